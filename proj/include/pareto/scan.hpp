#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "pareto/kkt.hpp"

namespace pareto {

inline constexpr std::size_t kDefaultGridCap = 10'000'000;

class GridCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned window with nodes lo_d + i * step, i = 0..count(d)-1.
struct GridSpec {
  Vector lo;
  Vector hi;
  double step = 0.0;

  GridSpec() = default;
  GridSpec(Vector lo_, Vector hi_, double step_);
  /// Same range [lo, hi] in every one of `dim` coordinates.
  static GridSpec uniform(std::size_t dim, double lo, double hi, double step);

  std::size_t dim() const { return lo.size(); }
  std::size_t count(std::size_t d) const;
  /// Total node count, saturating at SIZE_MAX.
  std::size_t total() const;
  /// Multi-index of a flat node index (dimension 0 most significant).
  std::vector<std::size_t> multi_index(std::size_t flat) const;
  std::size_t flat_index(std::span<const std::size_t> multi) const;
  Vector node(std::size_t flat) const;
  double diameter() const;
  bool contains(std::span<const double> x, double slack = 0.0) const;

  /// Throws std::invalid_argument on malformed ranges, GridCapExceeded above cap.
  void validate(std::size_t cap = kDefaultGridCap) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct ScanConfig {
  Tolerances tol;
  std::size_t grid_cap = kDefaultGridCap;
  unsigned jobs = 1;
};

struct ScanResult {
  GridSpec grid;
  std::vector<PointDiagnostics> points;  // critical nodes, lexicographic order
  std::vector<std::size_t> nodes;        // flat grid index of each point
  std::uint64_t problem_hash = 0;
  Tolerances tol;
};

/// FNV-1a of the problem's rendered text.
std::uint64_t problem_hash(const Problem& p);

/// Runs diagnose at every grid node and keeps the critical ones. Work is split
/// over cfg.jobs threads; the merge is ordered by node index.
ScanResult grid_scan(const Problem& p, const GridSpec& grid, const ScanConfig& cfg = {});

struct TraceConfig {
  Tolerances tol;
  double newton_tol = 1e-10;
  int max_iterations = 50;
  double dedup_radius = 1e-6;
  std::size_t coarse_seeds_per_dim = 5;
  unsigned jobs = 1;
};

struct TracePoint {
  Vector alpha_reduced;
  Vector x;
  bool converged = false;
  int iterations = 0;
  bool degenerate = false;  // singular D_x F~ met (failure) or found at the solution
};

struct TraceResult {
  double simplex_step = 0.0;
  std::vector<TracePoint> points;  // ordered by simplex node, then by discovery
};

/// Interior nodes of the reduced simplex: a_j = s/2 + i_j s with a_k = 1 - sum >= s/2.
std::vector<Vector> reduced_simplex_nodes(std::size_t k, double simplex_step);

/// Newton continuation on x -> F~(x, a) over reduced_simplex_nodes. Seeds are
/// tried at every node; when empty, a coarse grid over the window is used.
/// Solutions at the previous node on the same simplex line are also tried.
/// Converged points outside the window are dropped; at most one failure of
/// each kind (non-converged, degenerate) is recorded per node.
TraceResult trace_manifold(const Problem& p, const GridSpec& window, double simplex_step,
                           std::span<const Vector> seeds = {}, const TraceConfig& cfg = {});

/// Union-find over flagged nodes; neighbors are at Chebyshev distance <= 1.5 h.
/// Components are ordered by their first point; members are point indices.
std::vector<std::vector<std::size_t>> connected_components(const ScanResult& result);

/// max_{a in A} min_{b in B} |a - b|; 0 for empty A, +inf for empty B and nonempty A.
double directed_hausdorff(std::span<const Vector> a, std::span<const Vector> b);
double hausdorff(std::span<const Vector> a, std::span<const Vector> b);

/// Coordinates of the points of a scan.
std::vector<Vector> coordinates(const ScanResult& result);

}  // namespace pareto
