#ifndef EBRO_CLI_COMMANDS_HPP
#define EBRO_CLI_COMMANDS_HPP

// One function per CLI mode. Each writes report.json (deterministic for a
// fixed config), timing.json (wall time) and its CSV/plot outputs under the
// configured output directory, and returns a process exit code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ebro/cli/config.hpp"
#include "ebro/curve.hpp"
#include "ebro/decompose.hpp"
#include "ebro/ebt.hpp"
#include "ebro/errors.hpp"
#include "ebro/exact.hpp"
#include "ebro/minmax.hpp"
#include "ebro/models/benchmarks.hpp"
#include "ebro/models/spacecraft.hpp"
#include "ebro/models/toy.hpp"
#include "ebro/random.hpp"

namespace ebro::cli {

enum ExitCode : int { kSuccess = 0, kFailure = 1, kConfigError = 2, kInfeasible = 3, kOptimizerFailure = 4 };

/// Raised when a run only reaches the infeasibility penalty.
class ModelInfeasible : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline bool is_spacecraft(const ModelSpec& m) { return m.kind == "ttc" || m.kind == "pow" || m.kind == "integrated"; }

inline SystemModel build_model(const ModelSpec& spec) {
  SystemModel m;
  if (spec.kind == "benchmark") m = models::benchmark(spec.name, spec.n, models::parse_variant(spec.variant));
  else if (spec.kind == "ttc") m = models::ttc_model(spec.scenario);
  else if (spec.kind == "pow") m = models::pow_model(spec.scenario);
  else if (spec.kind == "integrated") m = models::integrated_model(spec.scenario);
  else if (spec.kind == "toy") m = models::toy_decomposable(models::parse_toy_variant(spec.variant)).monolithic();
  else throw ConfigError("model.kind: unknown value '" + spec.kind + "'");
  if (spec.space) {
    UncertainSpace space(*spec.space);
    if (space.dimension() != m.space.dimension())
      throw ConfigError("model.space: " + std::to_string(space.dimension()) + " variables declared, model takes " +
                        std::to_string(m.space.dimension()));
    m.space = std::move(space);
  }
  if (spec.design_bounds) {
    if (spec.design_bounds->size() != m.design_bounds.size())
      throw ConfigError("model.design_bounds: dimension " + std::to_string(spec.design_bounds->size()) +
                        ", model takes " + std::to_string(m.design_bounds.size()));
    m.design_bounds = *spec.design_bounds;
  }
  return m;
}

/// Search settings of a run: the run seed drives every stream.
struct Searches {
  GlobalSearchConfig outer;
  GlobalSearchConfig inner;
  EbtConfig ebt;
};

inline Searches searches_for(const RunConfig& c) {
  Searches s{c.outer, c.inner, c.ebt};
  s.outer.seed = derive_seed(c.seed, {1});
  s.inner.seed = derive_seed(c.seed, {2});
  s.ebt.seed = derive_seed(c.seed, {3});
  s.ebt.optimizer = s.inner;
  return s;
}

namespace detail {

inline Json vec(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

inline std::string run_id(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config.dump()) h = (h ^ ch) * 0x100000001b3ULL;
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline Json provenance_json(const CurveProvenance& p) {
  return Json{{"optimizations", p.optimizations},
              {"boxes_split", p.boxes_split},
              {"boxes_decided", p.boxes_decided},
              {"boxes_filtered", p.boxes_filtered},
              {"boxes_trusted", p.archive_decisions},
              {"witness_decisions", p.witness_decisions},
              {"model_evaluations", p.evaluations},
              {"discarded_mass", p.filtered_mass},
              {"unverified_mass", p.unverified_mass}};
}

inline Json minmax_json(const MinMaxResult& r) {
  return Json{{"nu_min", r.nu_min()},
              {"nu_max", r.nu_max()},
              {"d_star", vec(r.d_star())},
              {"d_min", vec(r.d_min())},
              {"u_at_max", vec(r.u_at_max())},
              {"u_at_min", vec(r.u_at_min())},
              {"model_evaluations", r.worst.model_evaluations + r.best.model_evaluations},
              {"inner_optimizations", r.worst.inner_optimizations + r.best.inner_optimizations},
              {"global_inner_optimizations", r.worst.global_inner_optimizations + r.best.global_inner_optimizations},
              {"verification_optimizations", r.worst.verification_optimizations + r.best.verification_optimizations}};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

inline void write_curve_files(const std::filesystem::path& dir, const std::string& stem, const BeliefCurve& curve) {
  std::ostringstream csv, bel, pl;
  write_curve_csv(csv, curve);
  write_plot_data(bel, curve, false);
  write_plot_data(pl, curve, true);
  write_text(dir / (stem + ".csv"), csv.str());
  write_text(dir / (stem + "_bel.dat"), bel.str());
  write_text(dir / (stem + "_pl.dat"), pl.str());
}

inline std::string fmt(double v) { return format_number(v); }

inline void check_feasible(const ModelSpec& spec, double value) {
  if (is_spacecraft(spec) && value >= spec.scenario.infeasible_penalty)
    throw ModelInfeasible("every evaluated design is infeasible (penalty value " + fmt(value) + ")");
}

inline MinMaxResult run_minmax(const SystemModel& model, const Searches& s) {
  return solve_min_max_and_min_min(model, s.outer, s.inner);
}

/// Full step curve: every per-focal extremum as a threshold.
inline std::vector<double> extrema_thresholds(const std::vector<FocalExtrema>& elements) {
  std::vector<double> nus;
  for (const auto& e : elements) {
    nus.push_back(e.min);
    nus.push_back(e.max);
  }
  std::sort(nus.begin(), nus.end());
  nus.erase(std::unique(nus.begin(), nus.end()), nus.end());
  return nus;
}

}  // namespace detail

/// Shared state of one command invocation.
struct Context {
  RunConfig config;
  Json config_json;
  std::ostream* log = nullptr;
  std::filesystem::path dir;
  Json report;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  explicit Context(RunConfig c, std::ostream& os) : config(std::move(c)), config_json(to_json(config)), log(&os) {
    dir = config.output_dir;
    std::filesystem::create_directories(dir);
    report["run_id"] = detail::run_id(config_json);
    report["seed"] = config.seed;
    report["mode"] = config.mode;
    report["model"] = config.model.kind == "benchmark"
                          ? config.model.name + " n=" + std::to_string(config.model.n) + " " + config.model.variant
                          : config.model.kind;
  }

  void finish() {
    report["config"] = config_json;
    detail::write_text(dir / "report.json", report.dump(2) + "\n");
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail::write_text(dir / "timing.json", Json{{"run_id", report["run_id"]}, {"wall_seconds", wall}}.dump(2) + "\n");
  }
};

inline std::vector<double> design_or(const RunConfig& c, const SystemModel& model, const std::vector<double>& fallback) {
  if (!c.design) return fallback;
  if (c.design->size() != model.design_bounds.size())
    throw ConfigError("design: dimension " + std::to_string(c.design->size()) + ", model takes " +
                      std::to_string(model.design_bounds.size()));
  if (!model.design_bounds.contains(*c.design)) throw ConfigError("design: point lies outside the design bounds");
  return *c.design;
}

inline int cmd_minmax(Context& ctx) {
  const auto model = build_model(ctx.config.model);
  const auto s = searches_for(ctx.config);
  const auto r = detail::run_minmax(model, s);
  detail::check_feasible(ctx.config.model, r.nu_min());
  ctx.report["minmax"] = detail::minmax_json(r);
  *ctx.log << "nu_max " << detail::fmt(r.nu_max()) << "\nnu_min " << detail::fmt(r.nu_min()) << "\n";
  ctx.finish();
  return kSuccess;
}

inline int cmd_exact(Context& ctx) {
  const auto model = build_model(ctx.config.model);
  const auto s = searches_for(ctx.config);
  std::vector<double> d;
  if (ctx.config.design) {
    d = design_or(ctx.config, model, {});
  } else {
    const auto r = detail::run_minmax(model, s);
    detail::check_feasible(ctx.config.model, r.nu_min());
    ctx.report["minmax"] = detail::minmax_json(r);
    d = r.d_star();
  }
  auto result = exact_bel_pl(model, d, model.space, ctx.config.thresholds, s.inner);
  if (ctx.config.thresholds.empty())
    result.curve = curve_from_extrema(result.elements, detail::extrema_thresholds(result.elements), &result.pl_not_a);
  result.curve.provenance.optimizations = result.optimizations;
  result.curve.provenance.evaluations = result.evaluations;
  detail::write_curve_files(ctx.dir, "curve", result.curve);
  ctx.report["design"] = detail::vec(d);
  ctx.report["focal_elements"] = result.elements.size();
  ctx.report["counts"] = detail::provenance_json(result.curve.provenance);
  *ctx.log << "focal elements " << result.elements.size() << "\noptimizations " << result.optimizations << "\n";
  ctx.finish();
  return kSuccess;
}

inline int cmd_curve(Context& ctx) {
  const auto model = build_model(ctx.config.model);
  const auto s = searches_for(ctx.config);
  const auto mm = detail::run_minmax(model, s);
  detail::check_feasible(ctx.config.model, mm.nu_min());
  const auto d = design_or(ctx.config, model, mm.d_star());
  const double inf = std::numeric_limits<double>::infinity();
  const auto run = approximate_curve(model, d, model.space, mm.nu_min(), mm.nu_max(), ctx.config.thresholds, s.ebt);
  // approximate_curve assembles over [nu_min, nu_max]; away from d_star the
  // support can extend past nu_max, so the CSV covers every box key.
  auto curve = assemble_curve(run.boxes, run.nu_bar, -inf, inf, ctx.config.thresholds);
  curve.provenance = run.curve.provenance;
  detail::write_curve_files(ctx.dir, "curve", curve);
  const double full = 2.0 * static_cast<double>(model.space.focal_count());
  ctx.report["minmax"] = detail::minmax_json(mm);
  ctx.report["design"] = detail::vec(d);
  ctx.report["nu_bar"] = run.nu_bar;
  ctx.report["focal_elements"] = model.space.focal_count();
  ctx.report["exact_optimizations"] = 2 * model.space.focal_count();
  ctx.report["approximation"] = detail::provenance_json(run.tree_provenance);
  ctx.report["approximation"]["optimization_ratio"] = static_cast<double>(run.tree_provenance.optimizations) / full;
  ctx.report["counts"] = detail::provenance_json(curve.provenance);
  ctx.report["counts"]["optimization_ratio"] = static_cast<double>(curve.provenance.optimizations) / full;
  *ctx.log << "nu_bar " << detail::fmt(run.nu_bar) << "\napproximation ratio "
           << detail::fmt(static_cast<double>(run.tree_provenance.optimizations) / full) << "\nrefined ratio "
           << detail::fmt(static_cast<double>(curve.provenance.optimizations) / full) << "\n";
  ctx.finish();
  return kSuccess;
}

inline int cmd_decompose(Context& ctx) {
  if (ctx.config.model.kind != "toy") throw ConfigError("decompose: model.kind must be a decomposable model (toy)");
  auto dm = models::toy_decomposable(models::parse_toy_variant(ctx.config.model.variant));
  if (ctx.config.model.space) {
    UncertainSpace space(*ctx.config.model.space);
    if (space.dimension() != dm.space.dimension()) throw ConfigError("model.space: dimension mismatch");
    dm.space = std::move(space);
  }
  if (ctx.config.model.design_bounds) dm.design_bounds = *ctx.config.model.design_bounds;
  try {
    dm.check_recomposition(100, ctx.config.seed);
  } catch (const std::logic_error& e) {
    throw std::runtime_error(std::string("recomposition check failed: ") + e.what());
  }
  const auto s = searches_for(ctx.config);
  const auto fix = fix_links(dm, s.outer, s.inner);
  auto thresholds = ctx.config.thresholds;
  if (thresholds.empty()) {
    const auto low = solve_min_min(dm.monolithic(), dm.space, s.outer, s.inner);
    for (int k = 0; k <= 20; ++k) thresholds.push_back(low.best.f + (fix.nu_max - low.best.f) * k / 20.0);
  }
  const auto dc = decomposed_curve(dm, fix, thresholds, s.inner);
  const std::size_t exact_count = 2 * dm.space.focal_count();
  std::ostringstream csv;
  csv << "nu,bel,pl";
  std::optional<ExactResult> exact;
  if (ctx.config.compare_exact) {
    exact = exact_bel_pl(dm.monolithic(), fix.d_bar, dm.space, thresholds, s.inner);
    csv << ",exact_bel,exact_pl";
  }
  csv << "\n";
  for (std::size_t k = 0; k < dc.curve.points.size(); ++k) {
    const auto& p = dc.curve.points[k];
    csv << detail::fmt(p.nu) << "," << detail::fmt(p.bel) << "," << detail::fmt(p.pl);
    if (exact) csv << "," << detail::fmt(exact->curve.points[k].bel) << "," << detail::fmt(exact->curve.points[k].pl);
    csv << "\n";
  }
  detail::write_text(ctx.dir / "decomposed.csv", csv.str());
  detail::write_curve_files(ctx.dir, "curve", dc.curve);
  Json branches = Json::array();
  for (const auto& b : dc.branches) {
    Json cells = Json::array();
    for (const auto& c : b.cells)
      cells.push_back({{"bpa", c.bpa}, {"min", c.min}, {"max", c.max}, {"feasible", c.feasible}});
    branches.push_back({{"name", b.name}, {"cells", cells}});
  }
  ctx.report["d_bar"] = detail::vec(fix.d_bar);
  ctx.report["nu_max"] = fix.nu_max;
  ctx.report["nu_h"] = detail::vec(fix.nu_h);
  ctx.report["branches"] = branches;
  ctx.report["counts"] = {{"optimizations", dc.optimizations},
                          {"max_side_optimizations", dc.max_side_optimizations},
                          {"exact_optimizations", exact_count},
                          {"ratio", static_cast<double>(dc.max_side_optimizations) / static_cast<double>(exact_count)},
                          {"model_evaluations", dc.evaluations},
                          {"infeasible_mass", dc.infeasible_mass}};
  *ctx.log << "max side optimizations " << dc.max_side_optimizations << "\nexact optimizations " << exact_count
           << "\n";
  ctx.finish();
  return kSuccess;
}

inline models::MarginSpec margin_spec(const MarginConfig& m) {
  models::MarginSpec spec;
  if (m.variant == "best") spec = models::best_case_margins();
  else if (m.variant == "worst") spec = models::worst_case_margins();
  else spec.components = m.components;
  spec.system_max = m.system_max;
  spec.steps = m.steps;
  return spec;
}

struct MarginRun {
  models::MarginTable table;
  std::vector<CurvePoint> points;
};

/// Margined masses of the min/min design with Bel/Pl of its exact curve.
inline MarginRun margin_sweep(const SystemModel& model, const MinMaxResult& mm, const models::MarginSpec& spec,
                              const models::ScenarioConfig& scenario, const GlobalSearchConfig& inner,
                              ExactResult* exact_out = nullptr) {
  MarginRun run;
  run.table = models::margin_mass(mm.d_min(), mm.u_at_min(), spec, scenario);
  std::vector<double> nus;
  for (const auto& row : run.table.rows) nus.push_back(row.mass);
  auto exact = exact_bel_pl(model, mm.d_min(), model.space, nus, inner);
  run.points = exact.curve.points;
  if (exact_out) *exact_out = std::move(exact);
  return run;
}

inline int cmd_margin(Context& ctx) {
  if (ctx.config.model.kind != "ttc") throw ConfigError("margin: model.kind must be ttc");
  const auto model = build_model(ctx.config.model);
  const auto s = searches_for(ctx.config);
  const auto mm = detail::run_minmax(model, s);
  detail::check_feasible(ctx.config.model, mm.nu_min());
  ExactResult exact;
  const auto run = margin_sweep(model, mm, margin_spec(ctx.config.margin), ctx.config.model.scenario, s.inner, &exact);
  std::ostringstream csv;
  csv << "margin_fraction,mass,bel,pl\n";
  for (std::size_t k = 0; k < run.points.size(); ++k)
    csv << detail::fmt(run.table.rows[k].system_margin) << "," << detail::fmt(run.table.rows[k].mass) << ","
        << detail::fmt(run.points[k].bel) << "," << detail::fmt(run.points[k].pl) << "\n";
  detail::write_text(ctx.dir / "margin.csv", csv.str());
  exact.curve = curve_from_extrema(exact.elements, detail::extrema_thresholds(exact.elements));
  detail::write_curve_files(ctx.dir, "curve", exact.curve);
  ctx.report["minmax"] = detail::minmax_json(mm);
  ctx.report["nominal_mass"] = run.table.nominal_mass;
  ctx.report["component_mass"] = run.table.component_mass;
  ctx.report["bel_at_max_margin"] = run.points.back().bel;
  ctx.report["pl_at_max_margin"] = run.points.back().pl;
  ctx.report["counts"] = {{"optimizations", exact.optimizations}, {"model_evaluations", exact.evaluations}};
  *ctx.log << "nominal mass " << detail::fmt(run.table.nominal_mass) << "\nbel at max margin "
           << detail::fmt(run.points.back().bel) << "\n";
  ctx.finish();
  return kSuccess;
}

/// Optimization counts of the approximated curve across dimensions, trust
/// factors, filter accuracies and seeds, at d = lower design bound.
inline int cmd_benchmark(Context& ctx) {
  if (ctx.config.model.kind != "benchmark") throw ConfigError("benchmark: model.kind must be benchmark");
  std::ostringstream csv;
  csv << "model,n,tau_c,filter_accuracy,seed,optimizations,exact_optimizations,ratio,discarded_mass\n";
  Json rows = Json::array();
  for (std::size_t n : ctx.config.benchmark.dimensions) {
    auto spec = ctx.config.model;
    spec.n = n;
    spec.space.reset();
    spec.design_bounds.reset();
    const auto model = build_model(spec);
    auto base = searches_for(ctx.config);
    const auto mm = detail::run_minmax(model, base);
    const std::size_t full = 2 * model.space.focal_count();
    for (double tau : ctx.config.benchmark.tau_c)
      for (double filter : ctx.config.benchmark.filter_accuracy)
        for (std::uint64_t seed : ctx.config.benchmark.seeds) {
          auto cfg = ctx.config;
          cfg.seed = seed;
          auto s = searches_for(cfg);
          s.ebt.tau_c = tau;
          s.ebt.filter_accuracy = filter;
          const auto run = approximate_curve(model, mm.d_star(), model.space, mm.nu_min(), mm.nu_max(), {}, s.ebt);
          const auto& p = run.tree_provenance;
          const double ratio = static_cast<double>(p.optimizations) / static_cast<double>(full);
          csv << spec.name << "," << n << "," << detail::fmt(tau) << "," << detail::fmt(filter) << "," << seed << ","
              << p.optimizations << "," << full << "," << detail::fmt(ratio) << "," << detail::fmt(p.filtered_mass)
              << "\n";
          rows.push_back({{"n", n}, {"tau_c", tau}, {"filter_accuracy", filter}, {"seed", seed},
                          {"optimizations", p.optimizations}, {"exact_optimizations", full}, {"ratio", ratio}});
          *ctx.log << spec.name << " n=" << n << " tau_c=" << detail::fmt(tau) << " filter=" << detail::fmt(filter)
                   << " seed=" << seed << " ratio " << detail::fmt(ratio) << "\n";
        }
  }
  detail::write_text(ctx.dir / "benchmark.csv", csv.str());
  ctx.report["rows"] = rows;
  ctx.finish();
  return kSuccess;
}

inline int dispatch(Context& ctx) {
  const auto& mode = ctx.config.mode;
  if (is_spacecraft(ctx.config.model)) {
    const auto problems = ctx.config.model.scenario.infeasibilities();
    if (!problems.empty()) throw ModelInfeasible("scenario: " + problems.front());
  }
  if (mode == "minmax") return cmd_minmax(ctx);
  if (mode == "exact") return cmd_exact(ctx);
  if (mode == "curve") return cmd_curve(ctx);
  if (mode == "decompose") return cmd_decompose(ctx);
  if (mode == "margin") return cmd_margin(ctx);
  if (mode == "benchmark") return cmd_benchmark(ctx);
  throw ConfigError("mode: unknown value '" + mode + "'");
}

/// Runs a validated config, mapping failures onto exit codes.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Context ctx(config, out);
    return dispatch(ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvalidSpace& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ModelInfeasible& e) {
    err << "model infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const ModelError& e) {
    err << "model infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const OptimizationFailed& e) {
    err << "optimizer failure: " << e.what() << "\n";
    return kOptimizerFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace ebro::cli

#endif  // EBRO_CLI_COMMANDS_HPP
