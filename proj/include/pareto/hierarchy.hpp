#pragma once

#include <cstddef>
#include <vector>

#include "pareto/kkt.hpp"
#include "pareto/scan.hpp"
#include "pareto/subproblem.hpp"

namespace pareto {

/// MOP^I: the objectives with indices in I, order preserved.
Problem subproblem(const Problem& p, const SubproblemId& id);

struct HierarchyConfig {
  ScanConfig scan;
  /// When positive and |I| >= 2, check_containment also tests points traced on
  /// MOP^I at this simplex step (grid nodes rarely hit curved critical sets).
  double trace_step = 0.0;
  TraceConfig trace;
};

struct ContainmentRecord {
  Vector x;
  double sub_omega = 0.0;
  double full_omega = 0.0;
  Classification full_class = Classification::NotCritical;
  /// Subproblem witness extended by zeros outside I.
  Vector padded_witness;
  /// |sum_i padded_i grad f_i(x)| over the full criticality scale.
  double padded_residual = 0.0;
  bool traced = false;
};

struct ContainmentReport {
  SubproblemId id;
  std::vector<ContainmentRecord> records;
  double max_full_omega = 0.0;
  double max_padded_residual = 0.0;
  std::size_t violations = 0;  // records with full_omega > eps_crit
  std::size_t grid_points = 0;
  std::size_t traced_points = 0;
};

/// Scans MOP^I on the window and evaluates the full problem at each flagged node.
ContainmentReport check_containment(const Problem& p, const SubproblemId& id,
                                    const GridSpec& window, const HierarchyConfig& cfg = {});

struct DecompositionCover {
  std::vector<SubproblemId> subsets;    // distinct, lexicographic
  std::vector<std::size_t> assignment;  // per scan point, index into subsets
};

/// Assigns every flagged point to decompose_at's subset. Throws
/// std::logic_error if an assignment violates |I| = jac_rank + 1.
DecompositionCover decomposition_cover(const Problem& p, const ScanResult& scan,
                                       const HierarchyConfig& cfg = {});

struct CoverReport {
  int m = 0;                          // max jac_rank over flagged points
  std::vector<SubproblemId> subsets;  // all I with |I| = max(m, 1)
  std::vector<ScanResult> subset_scans;
  std::vector<std::size_t> edge_points;  // indices of ZeroEdge scan points (edge candidates)
  std::vector<std::vector<std::size_t>> coverage;  // per edge point, covering subset indices
  std::vector<bool> stationary;  // per edge point: some single gradient vanishes
  std::vector<std::size_t> uncovered;  // edge_points entries with no cover
  std::vector<std::size_t> unique_coverage;  // per subset: edge points covered by it alone
};

/// Scans every MOP^I with |I| = max(m, 1) on the window and checks that each
/// ZeroEdge point lies within 1.5 h of one of their flagged nodes, or has a
/// vanishing objective gradient.
CoverReport edge_cover(const Problem& p, const ScanResult& scan, const GridSpec& window,
                       const HierarchyConfig& cfg = {});

}  // namespace pareto
