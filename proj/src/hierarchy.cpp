#include "pareto/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "parallel.hpp"

namespace pareto {

Problem subproblem(const Problem& p, const SubproblemId& id) {
  if (id.size() == 0 || id.indices().back() >= p.num_objectives())
    throw std::invalid_argument("subproblem: index set does not fit the problem");
  return p.restrict_to(id.indices());
}

namespace {

ContainmentRecord containment_record(const Problem& p, const SubproblemId& id,
                                     const PointDiagnostics& sub, const Tolerances& tol) {
  ContainmentRecord rec;
  rec.x = sub.x;
  rec.sub_omega = sub.omega;
  const PointDiagnostics full = diagnose(p, sub.x, tol);
  rec.full_omega = full.omega;
  rec.full_class = full.classification;
  rec.padded_witness.assign(p.num_objectives(), 0.0);
  const Vector& wa = sub.witness->full();
  for (std::size_t j = 0; j < id.size(); ++j) rec.padded_witness[id.indices()[j]] = wa[j];
  const Vector r = residual_F(p, sub.x, rec.padded_witness);
  rec.padded_residual =
      norm2(std::span<const double>(r).first(p.dim())) / criticality_scale(p.gradients(sub.x));
  return rec;
}

bool within(const Vector& a, const Vector& b, double radius) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
  return d2 <= radius * radius;
}

}  // namespace

ContainmentReport check_containment(const Problem& p, const SubproblemId& id,
                                    const GridSpec& window, const HierarchyConfig& cfg) {
  const Problem sp = subproblem(p, id);
  const Tolerances& tol = cfg.scan.tol;
  ContainmentReport report;
  report.id = id;

  const ScanResult scan = grid_scan(sp, window, cfg.scan);
  for (const PointDiagnostics& d : scan.points)
    report.records.push_back(containment_record(p, id, d, tol));
  report.grid_points = scan.points.size();

  if (cfg.trace_step > 0.0 && id.size() >= 2) {
    TraceConfig tc = cfg.trace;
    tc.tol = tol;
    const TraceResult tr = trace_manifold(sp, window, cfg.trace_step, {}, tc);
    for (const TracePoint& tp : tr.points) {
      if (!tp.converged) continue;
      PointDiagnostics d = diagnose(sp, tp.x, tol);
      if (!d.critical()) continue;
      ContainmentRecord rec = containment_record(p, id, d, tol);
      rec.traced = true;
      report.records.push_back(std::move(rec));
      ++report.traced_points;
    }
  }

  for (const ContainmentRecord& r : report.records) {
    report.max_full_omega = std::max(report.max_full_omega, r.full_omega);
    report.max_padded_residual = std::max(report.max_padded_residual, r.padded_residual);
    if (r.full_omega > tol.eps_crit) ++report.violations;
  }
  return report;
}

DecompositionCover decomposition_cover(const Problem& p, const ScanResult& scan,
                                       const HierarchyConfig& cfg) {
  if (scan.points.empty()) throw std::invalid_argument("decomposition_cover: empty scan");
  const std::size_t count = scan.points.size();
  std::vector<SubproblemId> chosen(count);
  detail::parallel_chunks(count, cfg.scan.jobs, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) chosen[i] = decompose_at(p, scan.points[i].x, cfg.scan.tol);
  });

  DecompositionCover cover;
  std::map<SubproblemId, std::size_t> index;
  for (const SubproblemId& id : chosen) index.emplace(id, 0);
  for (auto& [id, slot] : index) {
    slot = cover.subsets.size();
    cover.subsets.push_back(id);
  }
  cover.assignment.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (chosen[i].size() != static_cast<std::size_t>(scan.points[i].jac_rank) + 1)
      throw std::logic_error("decomposition_cover: subset size differs from rank + 1");
    cover.assignment.push_back(index.at(chosen[i]));
  }
  return cover;
}

CoverReport edge_cover(const Problem& p, const ScanResult& scan, const GridSpec& window,
                       const HierarchyConfig& cfg) {
  CoverReport report;
  for (const PointDiagnostics& d : scan.points) report.m = std::max(report.m, d.jac_rank);
  const std::size_t size = static_cast<std::size_t>(std::max(report.m, 1));
  report.subsets = subsets_of_size(p.num_objectives(), size);
  for (const SubproblemId& id : report.subsets)
    report.subset_scans.push_back(grid_scan(subproblem(p, id), window, cfg.scan));
  report.unique_coverage.assign(report.subsets.size(), 0);

  const double radius = 1.5 * window.step;
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const PointDiagnostics& d = scan.points[i];
    if (d.classification != Classification::ZeroEdge) continue;
    report.edge_points.push_back(i);
    std::vector<std::size_t> covers;
    for (std::size_t s = 0; s < report.subsets.size(); ++s) {
      const auto& pts = report.subset_scans[s].points;
      if (std::any_of(pts.begin(), pts.end(),
                      [&](const PointDiagnostics& q) { return within(q.x, d.x, radius); }))
        covers.push_back(s);
    }
    bool stationary = false;
    for (std::size_t j = 0; j < p.num_objectives() && !stationary; ++j)
      stationary = norm2(p.gradient(j, d.x)) <= cfg.scan.tol.eps_crit;
    if (covers.size() == 1) ++report.unique_coverage[covers[0]];
    if (covers.empty() && !stationary) report.uncovered.push_back(i);
    report.coverage.push_back(std::move(covers));
    report.stationary.push_back(stationary);
  }
  return report;
}

}  // namespace pareto
