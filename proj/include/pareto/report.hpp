#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "pareto/hierarchy.hpp"
#include "pareto/kkt.hpp"
#include "pareto/scan.hpp"

#include "json.hpp"

namespace pareto {

/// Malformed CSV input; line is 1-based.
class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Shortest round-trip decimal; locale independent. NaN and infinities print
/// as "nan", "inf", "-inf".
std::string format_double(double v);

/// One row of a scan/classify CSV.
struct PointRow {
  Vector x;
  double omega = 0.0;
  Classification classification = Classification::NotCritical;
  double tstar = 0.0;
  int jac_rank = 0;
  int mult_dim = -1;
  bool degenerate = false;
};

struct MembershipRow {
  std::string subset;  // one-based indices joined by ';'
  Vector x;
};

std::string scan_csv_header(std::size_t n);
void write_point_row(std::ostream& out, const PointDiagnostics& d);
void write_scan_csv(std::ostream& out, const ScanResult& scan, std::size_t n);
/// Scan columns followed by alpha_1..alpha_k (the witness; empty when absent).
void write_classify_csv(std::ostream& out, const std::vector<PointDiagnostics>& points,
                        std::size_t n, std::size_t k);
/// alpha_1..alpha_{k-1},x1..xn,converged,iters,degenerate
void write_trace_csv(std::ostream& out, const TraceResult& trace, std::size_t n, std::size_t k);
/// subset,x1..xn: flagged nodes of every subproblem scan of the report.
void write_membership_csv(std::ostream& out, const CoverReport& report, std::size_t n);

/// Reads the leading x1..xn,omega,class,tstar,jac_rank,mult_dim,degenerate
/// columns; extra trailing columns are ignored.
std::vector<PointRow> read_scan_csv(std::istream& in);
std::vector<MembershipRow> read_membership_csv(std::istream& in);
/// Reads x1..xn columns only (header required; other columns ignored).
std::vector<Vector> read_points_csv(std::istream& in);

nlohmann::json cover_report_json(const Problem& p, const ScanResult& scan,
                                 const CoverReport& report);

struct PlotInput {
  GridSpec window;  // first two coordinates are drawn
  std::vector<PointRow> points;
  std::vector<MembershipRow> membership;
  std::string title;
};

/// Fixed 800x800 canvas: gray squares for Interior nodes, darker for the other
/// critical classes, one palette color per subset (lexicographic order of the
/// subsets present), and a legend.
void write_svg(std::ostream& out, const PlotInput& input);

}  // namespace pareto
