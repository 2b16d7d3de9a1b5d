#include "pareto/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace pareto {

CsvError::CsvError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

namespace {

std::string fixed2(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 2);
  std::string s(buf.data(), ptr);
  return s == "-0.00" ? "0.00" : s;
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw CsvError(line, "bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s, std::size_t line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw CsvError(line, "bad integer '" + s + "'");
  return v;
}

// Number of leading x1, x2, ... columns in a header.
std::size_t count_coordinates(const std::vector<std::string>& header) {
  std::size_t n = 0;
  while (n < header.size() && header[n] == "x" + std::to_string(n + 1)) ++n;
  return n;
}

void write_x(std::ostream& out, std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0) out << ',';
    out << format_double(x[i]);
  }
}

void write_x_header(std::ostream& out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out << (i > 0 ? ",x" : "x") << i + 1;
}

}  // namespace

std::string scan_csv_header(std::size_t n) {
  std::ostringstream s;
  write_x_header(s, n);
  s << ",omega,class,tstar,jac_rank,mult_dim,degenerate";
  return s.str();
}

void write_point_row(std::ostream& out, const PointDiagnostics& d) {
  write_x(out, d.x);
  out << ',' << format_double(d.omega) << ',' << to_string(d.classification) << ','
      << format_double(d.tstar) << ',' << d.jac_rank << ',' << d.multiplier_dim << ','
      << (d.degenerate ? 1 : 0);
}

void write_scan_csv(std::ostream& out, const ScanResult& scan, std::size_t n) {
  out << scan_csv_header(n) << '\n';
  for (const PointDiagnostics& d : scan.points) {
    write_point_row(out, d);
    out << '\n';
  }
}

void write_classify_csv(std::ostream& out, const std::vector<PointDiagnostics>& points,
                        std::size_t n, std::size_t k) {
  out << scan_csv_header(n);
  for (std::size_t i = 0; i < k; ++i) out << ",alpha_" << i + 1;
  out << '\n';
  for (const PointDiagnostics& d : points) {
    write_point_row(out, d);
    for (std::size_t i = 0; i < k; ++i) {
      out << ',';
      if (d.witness) out << format_double(d.witness->full()[i]);
    }
    out << '\n';
  }
}

void write_trace_csv(std::ostream& out, const TraceResult& trace, std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i + 1 < k; ++i) out << "alpha_" << i + 1 << ',';
  write_x_header(out, n);
  out << ",converged,iters,degenerate\n";
  for (const TracePoint& tp : trace.points) {
    for (double a : tp.alpha_reduced) out << format_double(a) << ',';
    write_x(out, tp.x);
    out << ',' << (tp.converged ? 1 : 0) << ',' << tp.iterations << ',' << (tp.degenerate ? 1 : 0)
        << '\n';
  }
}

void write_membership_csv(std::ostream& out, const CoverReport& report, std::size_t n) {
  out << "subset,";
  write_x_header(out, n);
  out << '\n';
  for (std::size_t s = 0; s < report.subsets.size(); ++s) {
    const std::string name = report.subsets[s].to_string(';');
    for (const PointDiagnostics& d : report.subset_scans[s].points) {
      out << name << ',';
      write_x(out, d.x);
      out << '\n';
    }
  }
}

std::vector<PointRow> read_scan_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError(1, "missing header");
  const auto header = split(line);
  const std::size_t n = count_coordinates(header);
  static const std::array<const char*, 6> rest{"omega", "class", "tstar", "jac_rank", "mult_dim",
                                               "degenerate"};
  if (n == 0 || header.size() < n + rest.size()) throw CsvError(1, "unexpected header");
  for (std::size_t j = 0; j < rest.size(); ++j)
    if (header[n + j] != rest[j]) throw CsvError(1, std::string("expected column ") + rest[j]);

  std::vector<PointRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() < n + rest.size()) throw CsvError(lineno, "too few columns");
    PointRow r;
    for (std::size_t i = 0; i < n; ++i) r.x.push_back(parse_double(f[i], lineno));
    r.omega = parse_double(f[n], lineno);
    const auto c = parse_classification(f[n + 1]);
    if (!c) throw CsvError(lineno, "unknown class '" + f[n + 1] + "'");
    r.classification = *c;
    r.tstar = parse_double(f[n + 2], lineno);
    r.jac_rank = parse_int(f[n + 3], lineno);
    r.mult_dim = parse_int(f[n + 4], lineno);
    r.degenerate = parse_int(f[n + 5], lineno) != 0;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<MembershipRow> read_membership_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError(1, "missing header");
  auto header = split(line);
  if (header.empty() || header[0] != "subset") throw CsvError(1, "expected column subset");
  header.erase(header.begin());
  const std::size_t n = count_coordinates(header);
  if (n == 0) throw CsvError(1, "no coordinate columns");
  std::vector<MembershipRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() < n + 1) throw CsvError(lineno, "too few columns");
    MembershipRow r;
    r.subset = f[0];
    for (std::size_t i = 0; i < n; ++i) r.x.push_back(parse_double(f[i + 1], lineno));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<Vector> read_points_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError(1, "missing header");
  const std::size_t n = count_coordinates(split(line));
  if (n == 0) throw CsvError(1, "expected columns x1..xn");
  std::vector<Vector> pts;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() < n) throw CsvError(lineno, "too few columns");
    Vector x;
    for (std::size_t i = 0; i < n; ++i) x.push_back(parse_double(f[i], lineno));
    pts.push_back(std::move(x));
  }
  return pts;
}

nlohmann::json cover_report_json(const Problem& p, const ScanResult& scan,
                                 const CoverReport& report) {
  using nlohmann::json;
  json j;
  j["problem"] = p.name();
  j["n"] = p.dim();
  j["k"] = p.num_objectives();
  j["m"] = report.m;
  j["step"] = scan.grid.step;
  j["window"] = {{"lo", scan.grid.lo}, {"hi", scan.grid.hi}};
  json subsets = json::array();
  for (std::size_t s = 0; s < report.subsets.size(); ++s) {
    json ids = json::array();
    for (std::size_t i : report.subsets[s].indices()) ids.push_back(i + 1);
    subsets.push_back({{"indices", ids},
                       {"flagged", report.subset_scans[s].points.size()},
                       {"unique_edge_coverage", report.unique_coverage[s]}});
  }
  j["subsets"] = subsets;
  json edges = json::array();
  for (std::size_t e = 0; e < report.edge_points.size(); ++e) {
    json covered = json::array();
    for (std::size_t s : report.coverage[e]) covered.push_back(report.subsets[s].to_string(';'));
    edges.push_back({{"x", scan.points[report.edge_points[e]].x},
                     {"covered_by", covered},
                     {"stationary", static_cast<bool>(report.stationary[e])}});
  }
  j["edge_candidates"] = edges;
  json uncovered = json::array();
  for (std::size_t i : report.uncovered) uncovered.push_back(scan.points[i].x);
  j["uncovered"] = uncovered;
  return j;
}

namespace {

constexpr double kLeft = 70.0;
constexpr double kTop = 40.0;
constexpr double kPlot = 560.0;

const std::array<const char*, 10> kPalette{"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
                                           "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#393b79"};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* class_color(Classification c) {
  switch (c) {
    case Classification::Interior: return "#b4b4b4";
    case Classification::ZeroEdge: return "#404040";
    case Classification::BoundaryAmbiguous: return "#7a7a7a";
    case Classification::NotCritical: return "#ffffff";
  }
  return "#ffffff";
}

}  // namespace

void write_svg(std::ostream& out, const PlotInput& input) {
  const GridSpec& w = input.window;
  if (w.dim() < 2) throw std::invalid_argument("plot: window needs two coordinates");
  const double sx = kPlot / (w.hi[0] - w.lo[0]);
  const double sy = kPlot / (w.hi[1] - w.lo[1]);
  auto px = [&](double x) { return kLeft + (x - w.lo[0]) * sx; };
  auto py = [&](double y) { return kTop + (w.hi[1] - y) * sy; };
  const double cw = std::max(1.0, w.step * sx);
  const double ch = std::max(1.0, w.step * sy);
  auto cell = [&](const Vector& x, const char* color) {
    if (x.size() < 2 || !w.contains(std::span<const double>(x).first(2), w.step)) return;
    out << "<rect x=\"" << fixed2(px(x[0]) - cw / 2) << "\" y=\"" << fixed2(py(x[1]) - ch / 2)
        << "\" width=\"" << fixed2(cw) << "\" height=\"" << fixed2(ch) << "\" fill=\"" << color
        << "\"/>\n";
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n";
  if (!input.title.empty())
    out << "<text x=\"" << fixed2(kLeft) << "\" y=\"25\" font-family=\"sans-serif\" font-size=\"16\">"
        << xml_escape(input.title) << "</text>\n";
  out << "<g clip-path=\"url(#plot)\">\n";
  out << "<clipPath id=\"plot\"><rect x=\"" << fixed2(kLeft) << "\" y=\"" << fixed2(kTop)
      << "\" width=\"" << fixed2(kPlot) << "\" height=\"" << fixed2(kPlot) << "\"/></clipPath>\n";
  for (const PointRow& r : input.points) cell(r.x, class_color(r.classification));

  std::map<std::string, std::size_t> rank;
  {
    std::vector<std::pair<std::vector<int>, std::string>> keys;
    for (const MembershipRow& m : input.membership) {
      if (rank.count(m.subset)) continue;
      rank.emplace(m.subset, 0);
      std::vector<int> ids;
      for (const std::string& part : split(m.subset, ';')) ids.push_back(std::atoi(part.c_str()));
      keys.emplace_back(std::move(ids), m.subset);
    }
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 0; i < keys.size(); ++i) rank[keys[i].second] = i;
  }
  for (const MembershipRow& m : input.membership)
    cell(m.x, kPalette[rank.at(m.subset) % kPalette.size()]);
  out << "</g>\n";

  // Axes with ticks at both ends and the midpoint.
  out << "<rect x=\"" << fixed2(kLeft) << "\" y=\"" << fixed2(kTop) << "\" width=\"" << fixed2(kPlot)
      << "\" height=\"" << fixed2(kPlot) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
  for (int t = 0; t <= 2; ++t) {
    const double fx = w.lo[0] + (w.hi[0] - w.lo[0]) * t / 2.0;
    const double fy = w.lo[1] + (w.hi[1] - w.lo[1]) * t / 2.0;
    out << "<text x=\"" << fixed2(px(fx)) << "\" y=\"" << fixed2(kTop + kPlot + 18)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
        << format_double(fx) << "</text>\n";
    out << "<text x=\"" << fixed2(kLeft - 6) << "\" y=\"" << fixed2(py(fy) + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" << format_double(fy)
        << "</text>\n";
  }
  out << "<text x=\"" << fixed2(kLeft + kPlot / 2) << "\" y=\"" << fixed2(kTop + kPlot + 36)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">x1</text>\n";
  out << "<text x=\"20\" y=\"" << fixed2(kTop + kPlot / 2)
      << "\" font-family=\"sans-serif\" font-size=\"13\">x2</text>\n";

  // Legend to the right of the plot.
  double ly = kTop + 10;
  const double lx = kLeft + kPlot + 20;
  auto legend = [&](const char* color, const std::string& label) {
    out << "<rect x=\"" << fixed2(lx) << "\" y=\"" << fixed2(ly) << "\" width=\"12\" height=\"12\" fill=\""
        << color << "\" stroke=\"#000000\" stroke-width=\"0.5\"/>\n";
    out << "<text x=\"" << fixed2(lx + 18) << "\" y=\"" << fixed2(ly + 11)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n";
    ly += 20;
  };
  legend(class_color(Classification::Interior), "Interior");
  legend(class_color(Classification::ZeroEdge), "ZeroEdge");
  legend(class_color(Classification::BoundaryAmbiguous), "Boundary-Ambiguous");
  std::vector<std::pair<std::size_t, std::string>> ordered;
  for (const auto& [name, r] : rank) ordered.emplace_back(r, name);
  std::sort(ordered.begin(), ordered.end());
  for (const auto& [r, name] : ordered) {
    std::string label = "I = {" + name + "}";
    std::replace(label.begin(), label.end(), ';', ',');
    legend(kPalette[r % kPalette.size()], label);
  }
  out << "</svg>\n";
}

}  // namespace pareto
