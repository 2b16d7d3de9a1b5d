// paretocrit: command-line front end for Pareto critical set computation.
//
// Exit codes: 0 success, 1 input error (bad file, flags or CSV), 2 numeric failure.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "checks.hpp"
#include "pareto/hierarchy.hpp"
#include "pareto/kkt.hpp"
#include "pareto/problem.hpp"
#include "pareto/report.hpp"
#include "pareto/scan.hpp"

namespace {

using namespace pareto;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumeric = 2;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string problem;
  std::string range = "-2:2";
  double step = 0.05;
  double simplex_step = 0.05;
  double eps = 1e-6;
  double rank_rtol = kDefaultRankRtol;
  double tau_int = 1e-6;
  double tau_zero = 1e-9;
  double newton_tol = 1e-10;
  std::string out;
  std::uint64_t seed = 1;
  unsigned jobs = 1;

  Tolerances tolerances() const {
    Tolerances t;
    t.eps_crit = eps;
    t.tau_int = tau_int;
    t.tau_zero = tau_zero;
    t.rank_rtol = rank_rtol;
    try {
      t.validate();
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    return t;
  }

  ScanConfig scan_config() const {
    ScanConfig c;
    c.tol = tolerances();
    c.jobs = jobs;
    return c;
  }
};

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("bad number '" + s + "'");
  }
  if (used != s.size()) throw InputError("bad number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

// "lo:hi[,lo:hi...]"; a single range applies to every coordinate.
GridSpec parse_window(const std::string& text, std::size_t n, double step) {
  Vector lo, hi;
  for (const std::string& part : split(text, ',')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) throw InputError("range '" + part + "' is not lo:hi");
    lo.push_back(parse_number(part.substr(0, colon)));
    hi.push_back(parse_number(part.substr(colon + 1)));
  }
  if (lo.size() == 1 && n > 1) {
    lo.assign(n, lo[0]);
    hi.assign(n, hi[0]);
  }
  if (lo.size() != n)
    throw InputError("range gives " + std::to_string(lo.size()) + " coordinates, problem has " +
                     std::to_string(n));
  GridSpec g(lo, hi, step);
  try {
    g.validate(kDefaultGridCap);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  return g;
}

Vector parse_point(const std::string& text) {
  Vector x;
  for (const std::string& part : split(text, ',')) x.push_back(parse_number(part));
  return x;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path);
  return f;
}

// Writes to the file when a path is given, otherwise to stdout.
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
  } else {
    auto f = open_out(path);
    fn(f);
  }
}

Problem load(const std::string& path) {
  open_in(path);
  return load_problem(path);
}

void add_common(CLI::App* cmd, RunConfig& cfg, bool window) {
  if (window) {
    cmd->add_option("--range", cfg.range, "Window lo:hi[,lo:hi...]; one range applies to all coordinates")
        ->capture_default_str();
    cmd->add_option("--step", cfg.step, "Grid step")->capture_default_str()->check(CLI::PositiveNumber);
  }
  cmd->add_option("--eps", cfg.eps, "Criticality threshold on the scaled min-norm")->capture_default_str();
  cmd->add_option("--rank-rtol", cfg.rank_rtol, "Relative tolerance for rank decisions")->capture_default_str();
  cmd->add_option("--tau-int", cfg.tau_int, "t* above this is Interior")->capture_default_str();
  cmd->add_option("--tau-zero", cfg.tau_zero, "t* below this is ZeroEdge")->capture_default_str();
  cmd->add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

int cmd_scan(const RunConfig& cfg) {
  const Problem p = load(cfg.problem);
  const GridSpec window = parse_window(cfg.range, p.dim(), cfg.step);
  const ScanResult r = grid_scan(p, window, cfg.scan_config());
  emit(cfg.out.empty() ? "points.csv" : cfg.out, [&](std::ostream& o) { write_scan_csv(o, r, p.dim()); });
  return kExitOk;
}

int cmd_classify(const RunConfig& cfg, const std::vector<std::string>& points,
                 const std::string& points_csv) {
  const Problem p = load(cfg.problem);
  std::vector<Vector> xs;
  for (const std::string& s : points) xs.push_back(parse_point(s));
  if (!points_csv.empty()) {
    auto in = open_in(points_csv);
    const auto more = read_points_csv(in);
    xs.insert(xs.end(), more.begin(), more.end());
  }
  if (xs.empty()) throw InputError("classify: give --point or --points");
  const Tolerances tol = cfg.tolerances();
  std::vector<PointDiagnostics> out;
  for (const Vector& x : xs) {
    if (x.size() != p.dim())
      throw InputError("point has " + std::to_string(x.size()) + " coordinates, problem has " +
                       std::to_string(p.dim()));
    out.push_back(diagnose(p, x, tol));
  }
  emit(cfg.out, [&](std::ostream& o) { write_classify_csv(o, out, p.dim(), p.num_objectives()); });
  return kExitOk;
}

int cmd_trace(const RunConfig& cfg) {
  const Problem p = load(cfg.problem);
  if (p.num_objectives() < 2) throw InputError("trace requires k >= 2");
  if (!(cfg.simplex_step > 0.0 && cfg.simplex_step < 1.0))
    throw InputError("--simplex-step must lie in (0, 1)");
  const GridSpec window = parse_window(cfg.range, p.dim(), cfg.step);
  TraceConfig tc;
  tc.tol = cfg.tolerances();
  tc.newton_tol = cfg.newton_tol;
  tc.jobs = cfg.jobs;
  const TraceResult r = trace_manifold(p, window, cfg.simplex_step, {}, tc);
  emit(cfg.out.empty() ? "trace.csv" : cfg.out,
       [&](std::ostream& o) { write_trace_csv(o, r, p.dim(), p.num_objectives()); });
  return kExitOk;
}

int cmd_subproblems_list(const RunConfig& cfg) {
  const Problem p = load(cfg.problem);
  for (const SubproblemId& id : all_subsets(p.num_objectives())) {
    std::cout << "{" << id.to_string() << "}";
    for (std::size_t i : id.indices()) std::cout << "  f" << i + 1 << " = " << render(p.objective(i));
    std::cout << '\n';
  }
  return kExitOk;
}

int cmd_subproblems_solve(const RunConfig& cfg, const std::string& subset) {
  const Problem p = load(cfg.problem);
  SubproblemId id;
  try {
    id = SubproblemId::parse(subset, p.num_objectives());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const GridSpec window = parse_window(cfg.range, p.dim(), cfg.step);
  HierarchyConfig hc;
  hc.scan = cfg.scan_config();
  const ScanResult r = grid_scan(subproblem(p, id), window, hc.scan);
  emit(cfg.out.empty() ? "subproblem.csv" : cfg.out,
       [&](std::ostream& o) { write_scan_csv(o, r, p.dim()); });
  const ContainmentReport c = check_containment(p, id, window, hc);
  std::cerr << "subset {" << id.to_string() << "}: " << c.records.size()
            << " critical nodes, max full-problem omega " << format_double(c.max_full_omega)
            << ", violations " << c.violations << '\n';
  return c.violations == 0 ? kExitOk : kExitNumeric;
}

int cmd_edge(const RunConfig& cfg, const std::string& points_out, const std::string& csv_out) {
  const Problem p = load(cfg.problem);
  const GridSpec window = parse_window(cfg.range, p.dim(), cfg.step);
  HierarchyConfig hc;
  hc.scan = cfg.scan_config();
  const ScanResult scan = grid_scan(p, window, hc.scan);
  const CoverReport report = edge_cover(p, scan, window, hc);
  const std::string json_path = cfg.out.empty() ? "edge.json" : cfg.out;
  emit(json_path, [&](std::ostream& o) { o << cover_report_json(p, scan, report).dump(2) << '\n'; });
  emit(csv_out.empty() ? "membership.csv" : csv_out,
       [&](std::ostream& o) { write_membership_csv(o, report, p.dim()); });
  if (!points_out.empty())
    emit(points_out, [&](std::ostream& o) { write_scan_csv(o, scan, p.dim()); });
  return kExitOk;
}

int cmd_plot(const RunConfig& cfg, const std::string& points_csv, const std::string& membership_csv,
             const std::string& title, bool range_given) {
  PlotInput input;
  input.title = title;
  if (!points_csv.empty()) {
    auto in = open_in(points_csv);
    input.points = read_scan_csv(in);
  }
  if (!membership_csv.empty()) {
    auto in = open_in(membership_csv);
    input.membership = read_membership_csv(in);
  }
  if (range_given) {
    input.window = parse_window(cfg.range, 2, cfg.step);
  } else {
    // Bounding box of the data, one step of padding; [-1, 1]^2 when empty.
    Vector lo{-1.0, -1.0}, hi{1.0, 1.0};
    bool first = true;
    auto grow = [&](const Vector& x) {
      if (x.size() < 2) return;
      for (int d = 0; d < 2; ++d) {
        lo[d] = first ? x[d] : std::min(lo[d], x[d]);
        hi[d] = first ? x[d] : std::max(hi[d], x[d]);
      }
      first = false;
    };
    for (const auto& r : input.points) grow(r.x);
    for (const auto& r : input.membership) grow(r.x);
    for (int d = 0; d < 2; ++d) {
      lo[d] -= cfg.step;
      hi[d] += cfg.step;
    }
    input.window = GridSpec(lo, hi, cfg.step);
  }
  emit(cfg.out.empty() ? "plot.svg" : cfg.out, [&](std::ostream& o) { write_svg(o, input); });
  return kExitOk;
}

int cmd_selftest(const RunConfig& cfg, const std::string& problems) {
  checks::SelftestOptions opt;
  opt.seed = cfg.seed;
  opt.jobs = cfg.jobs;
  if (!problems.empty()) checks::set_problems_dir(problems);
  return checks::run_selftest(opt, std::cout) ? kExitOk : kExitNumeric;
}

// CLI11 reads "-2:2" after an option as a flag; rewrite "--range -2:2" to "--range=-2:2".
std::vector<std::string> normalize_args(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if ((a == "--range" || a == "--point") && i + 1 < argc) {
      a += "=";
      a += argv[++i];
    }
    args.push_back(std::move(a));
  }
  std::reverse(args.begin(), args.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pareto critical sets of smooth multiobjective problems"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* scan = app.add_subcommand("scan", "Grid scan; writes the critical nodes as CSV");
  scan->add_option("problem", cfg.problem, "Problem file")->required();
  add_common(scan, cfg, true);
  scan->add_option("--out", cfg.out, "Output CSV (default points.csv, '-' for stdout)");

  std::vector<std::string> points;
  std::string points_csv;
  auto* classify = app.add_subcommand("classify", "Diagnose single points or a CSV of points");
  classify->add_option("problem", cfg.problem, "Problem file")->required();
  classify->add_option("--point", points, "Point x1,x2,...; repeatable");
  classify->add_option("--points", points_csv, "CSV whose leading columns are x1..xn");
  add_common(classify, cfg, false);
  classify->add_option("--out", cfg.out, "Output CSV (default stdout)");

  auto* trace = app.add_subcommand("trace", "Newton continuation over the multiplier simplex");
  trace->add_option("problem", cfg.problem, "Problem file")->required();
  add_common(trace, cfg, true);
  trace->add_option("--simplex-step", cfg.simplex_step, "Simplex grid step")->capture_default_str();
  trace->add_option("--newton-tol", cfg.newton_tol, "Newton residual tolerance")->capture_default_str();
  trace->add_option("--out", cfg.out, "Output CSV (default trace.csv)");

  std::string subset;
  auto* sub = app.add_subcommand("subproblems", "Subproblems on subsets of the objectives");
  sub->require_subcommand(1);
  auto* sub_list = sub->add_subcommand("list", "List all nonempty subsets");
  sub_list->add_option("problem", cfg.problem, "Problem file")->required();
  auto* sub_solve = sub->add_subcommand("solve", "Scan one subproblem and check containment");
  sub_solve->add_option("problem", cfg.problem, "Problem file")->required();
  sub_solve->add_option("--subset", subset, "One-based indices, e.g. 1,3")->required();
  add_common(sub_solve, cfg, true);
  sub_solve->add_option("--out", cfg.out, "Output CSV (default subproblem.csv)");

  std::string edge_points, edge_csv;
  auto* edge = app.add_subcommand("edge", "Cover the edge candidates by subproblem critical sets");
  edge->add_option("problem", cfg.problem, "Problem file")->required();
  add_common(edge, cfg, true);
  edge->add_option("--out", cfg.out, "Output JSON report (default edge.json)");
  edge->add_option("--csv", edge_csv, "Subset membership CSV (default membership.csv)");
  edge->add_option("--points-out", edge_points, "Also write the full scan CSV here");

  std::string plot_points, plot_membership, title;
  auto* plot = app.add_subcommand("plot", "Render scan and membership CSVs as SVG");
  plot->add_option("--points", plot_points, "Scan CSV");
  plot->add_option("--membership", plot_membership, "Membership CSV from edge");
  plot->add_option("--title", title, "Title text");
  auto* plot_range = plot->add_option("--range", cfg.range, "Plot window (default: data bounds)");
  plot->add_option("--step", cfg.step, "Cell size")->capture_default_str()->check(CLI::PositiveNumber);
  plot->add_option("--out", cfg.out, "Output SVG (default plot.svg)");

  std::string problems;
  auto* selftest = app.add_subcommand("selftest", "Run the property suites");
  selftest->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  selftest->add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str();
  selftest->add_option("--problems", problems, "Directory of fixture problem files");

  try {
    auto args = normalize_args(argc, argv);
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*scan) return cmd_scan(cfg);
    if (*classify) return cmd_classify(cfg, points, points_csv);
    if (*trace) return cmd_trace(cfg);
    if (*sub_list) return cmd_subproblems_list(cfg);
    if (*sub_solve) return cmd_subproblems_solve(cfg, subset);
    if (*edge) return cmd_edge(cfg, edge_points, edge_csv);
    if (*plot) return cmd_plot(cfg, plot_points, plot_membership, title, plot_range->count() > 0);
    if (*selftest) return cmd_selftest(cfg, problems);
  } catch (const ParseError& e) {
    std::cerr << "error: " << cfg.problem << ": " << e.what() << '\n';
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const CsvError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const GridCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}
