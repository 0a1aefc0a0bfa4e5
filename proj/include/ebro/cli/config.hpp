#ifndef EBRO_CLI_CONFIG_HPP
#define EBRO_CLI_CONFIG_HPP

// Run configuration: a versioned JSON document. Unknown keys are rejected
// at every level; to_json/parse_config round-trip losslessly.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ebro/ebt.hpp"
#include "ebro/errors.hpp"
#include "ebro/evidence.hpp"
#include "ebro/models/spacecraft.hpp"
#include "ebro/optimize.hpp"

namespace ebro::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct ModelSpec {
  /// benchmark | ttc | pow | integrated | toy
  std::string kind = "benchmark";
  std::string name = "MV1";
  std::size_t n = 2;
  /// default | EQ for benchmarks, a | b for the toy problem
  std::string variant = "default";
  std::optional<std::vector<UncertainVariable>> space;
  std::optional<Bounds> design_bounds;
  models::ScenarioConfig scenario;
};

struct MarginConfig {
  /// best | worst | custom
  std::string variant = "best";
  std::vector<models::ComponentMargin> components;
  double system_max = 0.25;
  std::size_t steps = 6;
};

struct BenchmarkSweep {
  std::vector<std::size_t> dimensions{2, 3, 4};
  std::vector<double> tau_c{0.99, 0.9};
  std::vector<double> filter_accuracy{0.0, 0.1};
  std::vector<std::uint64_t> seeds{1, 2, 3};
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  /// minmax | exact | curve | decompose | margin | benchmark
  std::string mode = "minmax";
  std::uint64_t seed = 1;
  ModelSpec model;
  /// Design point for exact/curve; absent selects the min/max design.
  std::optional<std::vector<double>> design;
  GlobalSearchConfig outer = GlobalSearchConfig::outer_defaults();
  GlobalSearchConfig inner = GlobalSearchConfig::inner_defaults();
  EbtConfig ebt;
  std::vector<double> thresholds;
  MarginConfig margin;
  BenchmarkSweep benchmark;
  /// decompose: also run the exact curve for side-by-side columns.
  bool compare_exact = true;
  std::string output_dir = "out";
};

inline const std::set<std::string>& known_modes() {
  static const std::set<std::string> m{"minmax", "exact", "curve", "decompose", "margin", "benchmark"};
  return m;
}

namespace detail {

/// Reads optional members of one JSON object and reports leftovers.
class ObjectReader {
public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const Json& raw(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  template <class T>
  void get(const char* key, T& out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(where() + "." + key + ": " + e.what());
    }
  }

  std::string child(const char* key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError(where() + ": unknown key '" + key + "'");
  }

private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class Obj>
struct Field {
  const char* key;
  double Obj::*member;
};

inline const std::vector<Field<models::ScenarioConfig>>& scenario_fields() {
  using S = models::ScenarioConfig;
  static const std::vector<Field<S>> f{
      {"r_gs_km", &S::r_gs_km},
      {"access_time_s", &S::access_time_s},
      {"acquisition_time_s", &S::acquisition_time_s},
      {"data_bits", &S::data_bits},
      {"faraday_rotation_deg", &S::faraday_rotation_deg},
      {"ber", &S::ber},
      {"ground_altitude_m", &S::ground_altitude_m},
      {"elevation_deg", &S::elevation_deg},
      {"ground_gain_db", &S::ground_gain_db},
      {"lna_gain_db", &S::lna_gain_db},
      {"cable_loss_db", &S::cable_loss_db},
      {"amplifier_noise_k", &S::amplifier_noise_k},
      {"noise_figure_db", &S::noise_figure_db},
      {"tx_gain_db", &S::tx_gain_db},
      {"tx_amplifier_noise_k", &S::tx_amplifier_noise_k},
      {"tx_noise_figure_db", &S::tx_noise_figure_db},
      {"antenna_noise_k", &S::antenna_noise_k},
      {"rain_loss_db", &S::rain_loss_db},
      {"rain_absorption_db", &S::rain_absorption_db},
      {"boltzmann_db", &S::boltzmann_db},
      {"reference_temperature_k", &S::reference_temperature_k},
      {"modulation_k_low", &S::modulation_k_low},
      {"modulation_k_high", &S::modulation_k_high},
      {"twta_mass_per_w", &S::twta_mass_per_w},
      {"twta_mass_offset", &S::twta_mass_offset},
      {"sspa_mass_per_w", &S::sspa_mass_per_w},
      {"sspa_mass_offset", &S::sspa_mass_offset},
      {"patch_dielectric_density", &S::patch_dielectric_density},
      {"patch_copper_density", &S::patch_copper_density},
      {"horn_areal_density", &S::horn_areal_density},
      {"parabola_areal_density", &S::parabola_areal_density},
      {"solar_flux", &S::solar_flux},
      {"sun_angle_deg", &S::sun_angle_deg},
      {"orbit_period_s", &S::orbit_period_s},
      {"eclipse_fraction", &S::eclipse_fraction},
      {"life_years", &S::life_years},
      {"daylight_load_w", &S::daylight_load_w},
      {"eclipse_load_w", &S::eclipse_load_w},
      {"n_cycles", &S::n_cycles},
      {"infeasible_penalty", &S::infeasible_penalty},
  };
  return f;
}

inline const char* to_string(LocalMethod m) { return m == LocalMethod::QuasiNewton ? "quasi_newton" : "nelder_mead"; }

inline LocalMethod parse_local_method(const std::string& s, const std::string& path) {
  if (s == "quasi_newton") return LocalMethod::QuasiNewton;
  if (s == "nelder_mead") return LocalMethod::NelderMead;
  throw ConfigError(path + ": expected quasi_newton or nelder_mead, got '" + s + "'");
}

inline Json search_to_json(const GlobalSearchConfig& c) {
  return Json{{"population_size", c.population_size},
              {"max_evaluations", c.max_evaluations},
              {"evaluations_per_half_dimension", c.evaluations_per_half_dimension},
              {"restart_contraction", c.restart_contraction},
              {"p_d", c.p_d},
              {"n_pop_verify", c.n_pop_verify},
              {"local_method", to_string(c.local_method)},
              {"archive_all", c.archive_all}};
}

inline void search_from_json(const Json& j, const std::string& path, GlobalSearchConfig& c) {
  ObjectReader r(j, path);
  r.get("population_size", c.population_size);
  r.get("max_evaluations", c.max_evaluations);
  r.get("evaluations_per_half_dimension", c.evaluations_per_half_dimension);
  r.get("restart_contraction", c.restart_contraction);
  r.get("p_d", c.p_d);
  r.get("n_pop_verify", c.n_pop_verify);
  std::string method = to_string(c.local_method);
  r.get("local_method", method);
  c.local_method = parse_local_method(method, r.child("local_method"));
  r.get("archive_all", c.archive_all);
  r.finish();
}

inline Json ebt_to_json(const EbtConfig& c) {
  Json j{{"tau_c", c.tau_c},
         {"filter_accuracy", c.filter_accuracy},
         {"filter_threshold", c.filter_threshold},
         {"nu_bar_fraction", c.nu_bar_fraction}};
  if (c.nu_bar) j["nu_bar"] = *c.nu_bar;
  j["min_max"] = c.mode == EbtMode::Archive ? "archive" : "optimize";
  j["witness_decisions"] = c.witness_decisions;
  return j;
}

inline void ebt_from_json(const Json& j, const std::string& path, EbtConfig& c) {
  ObjectReader r(j, path);
  r.get("tau_c", c.tau_c);
  r.get("filter_accuracy", c.filter_accuracy);
  r.get("filter_threshold", c.filter_threshold);
  r.get("nu_bar_fraction", c.nu_bar_fraction);
  if (r.has("nu_bar")) {
    double v = 0.0;
    r.get("nu_bar", v);
    c.nu_bar = v;
  }
  std::string mode = c.mode == EbtMode::Archive ? "archive" : "optimize";
  r.get("min_max", mode);
  if (mode == "archive") c.mode = EbtMode::Archive;
  else if (mode == "optimize") c.mode = EbtMode::Optimize;
  else throw ConfigError(r.child("min_max") + ": expected archive or optimize, got '" + mode + "'");
  r.get("witness_decisions", c.witness_decisions);
  r.finish();
}

inline Json tables_to_json(const models::LookupTables& t) {
  Json cells = Json::array(), batteries = Json::array(), atmosphere = Json::array();
  for (const auto& c : t.solar_cells)
    cells.push_back({{"name", c.name}, {"efficiency", c.efficiency}, {"degradation", c.degradation}});
  for (const auto& b : t.batteries)
    batteries.push_back(
        {{"name", b.name}, {"energy_density", b.energy_density}, {"efficiency", b.efficiency}, {"q", b.q}});
  for (const auto& a : t.atmosphere)
    atmosphere.push_back({{"altitude_lo_km", a.altitude_lo_km}, {"altitude_hi_km", a.altitude_hi_km}, {"loss_db", a.loss_db}});
  return Json{{"solar_cells", cells},
              {"batteries", batteries},
              {"atmosphere", atmosphere},
              {"feeder_loss_db", t.feeder_loss_db},
              {"misalignment_loss_db", t.misalignment_loss_db},
              {"implementation_loss_db", t.implementation_loss_db}};
}

inline void tables_from_json(const Json& j, const std::string& path, models::LookupTables& t) {
  ObjectReader r(j, path);
  auto list = [&](const char* key, auto&& each) {
    if (!r.has(key)) return;
    const auto& arr = r.raw(key);
    if (!arr.is_array() || arr.empty()) throw ConfigError(r.child(key) + ": expected a non-empty array");
    for (std::size_t k = 0; k < arr.size(); ++k) each(ObjectReader(arr[k], r.child(key) + "[" + std::to_string(k) + "]"), k);
  };
  std::vector<models::SolarCell> cells;
  list("solar_cells", [&](ObjectReader e, std::size_t) {
    models::SolarCell c;
    e.get("name", c.name);
    e.get("efficiency", c.efficiency);
    e.get("degradation", c.degradation);
    e.finish();
    cells.push_back(c);
  });
  if (!cells.empty()) t.solar_cells = cells;
  std::vector<models::BatteryType> batteries;
  list("batteries", [&](ObjectReader e, std::size_t) {
    models::BatteryType b;
    e.get("name", b.name);
    e.get("energy_density", b.energy_density);
    e.get("efficiency", b.efficiency);
    e.get("q", b.q);
    e.finish();
    batteries.push_back(b);
  });
  if (!batteries.empty()) t.batteries = batteries;
  std::vector<models::AtmosphereBand> bands;
  list("atmosphere", [&](ObjectReader e, std::size_t) {
    models::AtmosphereBand a;
    e.get("altitude_lo_km", a.altitude_lo_km);
    e.get("altitude_hi_km", a.altitude_hi_km);
    e.get("loss_db", a.loss_db);
    e.finish();
    bands.push_back(a);
  });
  if (!bands.empty()) t.atmosphere = bands;
  r.get("feeder_loss_db", t.feeder_loss_db);
  r.get("misalignment_loss_db", t.misalignment_loss_db);
  r.get("implementation_loss_db", t.implementation_loss_db);
  r.finish();
}

inline Json scenario_to_json(const models::ScenarioConfig& s) {
  Json j = Json::object();
  for (const auto& f : scenario_fields()) j[f.key] = s.*(f.member);
  j["link_power_in_daylight"] = s.link_power_in_daylight;
  j["link_power_in_eclipse"] = s.link_power_in_eclipse;
  j["tables"] = tables_to_json(s.tables);
  return j;
}

inline void scenario_from_json(const Json& j, const std::string& path, models::ScenarioConfig& s) {
  ObjectReader r(j, path);
  for (const auto& f : scenario_fields()) r.get(f.key, s.*(f.member));
  r.get("link_power_in_daylight", s.link_power_in_daylight);
  r.get("link_power_in_eclipse", s.link_power_in_eclipse);
  if (r.has("tables")) tables_from_json(r.raw("tables"), r.child("tables"), s.tables);
  r.finish();
}

inline Json space_to_json(const std::vector<UncertainVariable>& vars) {
  Json arr = Json::array();
  for (const auto& v : vars) {
    Json intervals = Json::array();
    for (const auto& i : v.intervals) intervals.push_back({i.lower, i.upper});
    arr.push_back({{"name", v.name}, {"intervals", intervals}, {"bpa", v.bpa}});
  }
  return arr;
}

inline std::vector<UncertainVariable> space_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path + ": expected a non-empty array of variables");
  std::vector<UncertainVariable> vars;
  for (std::size_t k = 0; k < j.size(); ++k) {
    ObjectReader r(j[k], path + "[" + std::to_string(k) + "]");
    UncertainVariable v;
    r.get("name", v.name);
    std::vector<std::vector<double>> intervals;
    r.get("intervals", intervals);
    for (const auto& i : intervals) {
      if (i.size() != 2) throw ConfigError(r.child("intervals") + ": each interval is [lo, hi]");
      v.intervals.push_back({i[0], i[1]});
    }
    r.get("bpa", v.bpa);
    r.finish();
    vars.push_back(std::move(v));
  }
  return vars;
}

inline Json model_to_json(const ModelSpec& m) {
  Json j{{"kind", m.kind}, {"name", m.name}, {"n", m.n}, {"variant", m.variant}};
  if (m.space) j["space"] = space_to_json(*m.space);
  if (m.design_bounds) j["design_bounds"] = {{"lower", m.design_bounds->lower}, {"upper", m.design_bounds->upper}};
  j["scenario"] = scenario_to_json(m.scenario);
  return j;
}

inline void model_from_json(const Json& j, const std::string& path, ModelSpec& m) {
  ObjectReader r(j, path);
  r.get("kind", m.kind);
  r.get("name", m.name);
  r.get("n", m.n);
  r.get("variant", m.variant);
  if (r.has("space")) m.space = space_from_json(r.raw("space"), r.child("space"));
  if (r.has("design_bounds")) {
    ObjectReader b(r.raw("design_bounds"), r.child("design_bounds"));
    Bounds bounds;
    b.get("lower", bounds.lower);
    b.get("upper", bounds.upper);
    b.finish();
    m.design_bounds = bounds;
  }
  if (r.has("scenario")) scenario_from_json(r.raw("scenario"), r.child("scenario"), m.scenario);
  r.finish();
}

inline Json margin_to_json(const MarginConfig& m) {
  Json comps = Json::array();
  for (const auto& c : m.components) comps.push_back({{"component", c.component}, {"fraction", c.fraction}});
  return Json{{"variant", m.variant}, {"components", comps}, {"system_max", m.system_max}, {"steps", m.steps}};
}

inline void margin_from_json(const Json& j, const std::string& path, MarginConfig& m) {
  ObjectReader r(j, path);
  r.get("variant", m.variant);
  if (r.has("components")) {
    const auto& arr = r.raw("components");
    if (!arr.is_array()) throw ConfigError(r.child("components") + ": expected an array");
    m.components.clear();
    for (std::size_t k = 0; k < arr.size(); ++k) {
      ObjectReader e(arr[k], r.child("components") + "[" + std::to_string(k) + "]");
      models::ComponentMargin c;
      e.get("component", c.component);
      e.get("fraction", c.fraction);
      e.finish();
      m.components.push_back(c);
    }
  }
  r.get("system_max", m.system_max);
  r.get("steps", m.steps);
  r.finish();
}

inline std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

}  // namespace detail

inline Json to_json(const RunConfig& c) {
  Json j;
  j["schema_version"] = c.schema_version;
  j["mode"] = c.mode;
  j["seed"] = c.seed;
  j["model"] = detail::model_to_json(c.model);
  if (c.design) j["design"] = *c.design;
  j["outer"] = detail::search_to_json(c.outer);
  j["inner"] = detail::search_to_json(c.inner);
  j["ebt"] = detail::ebt_to_json(c.ebt);
  j["thresholds"] = c.thresholds;
  j["margin"] = detail::margin_to_json(c.margin);
  j["benchmark"] = {{"dimensions", c.benchmark.dimensions},
                    {"tau_c", c.benchmark.tau_c},
                    {"filter_accuracy", c.benchmark.filter_accuracy},
                    {"seeds", c.benchmark.seeds}};
  j["compare_exact"] = c.compare_exact;
  j["output_dir"] = c.output_dir;
  return j;
}

/// Schema checks that do not need a model instance.
inline void validate(const RunConfig& c) {
  if (c.schema_version != kSchemaVersion)
    throw ConfigError("schema_version " + std::to_string(c.schema_version) + " is not supported (expected " +
                      std::to_string(kSchemaVersion) + ")");
  if (!known_modes().count(c.mode)) throw ConfigError("mode: unknown value '" + c.mode + "'");
  static const std::set<std::string> kinds{"benchmark", "ttc", "pow", "integrated", "toy"};
  if (!kinds.count(c.model.kind)) throw ConfigError("model.kind: unknown value '" + c.model.kind + "'");
  if (c.model.kind == "benchmark") {
    static const std::set<std::string> names{"MV1", "MV2", "MV8"};
    if (!names.count(c.model.name)) throw ConfigError("model.name: unknown benchmark '" + c.model.name + "'");
    if (c.model.n == 0) throw ConfigError("model.n must be positive");
    if (c.model.variant != "default" && c.model.variant != "EQ")
      throw ConfigError("model.variant: expected default or EQ for benchmarks");
  }
  if (c.model.kind == "toy" && c.model.variant != "a" && c.model.variant != "b")
    throw ConfigError("model.variant: expected a or b for the toy problem");
  if (c.model.space) {
    try {
      UncertainSpace check(*c.model.space);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("model.space: ") + e.what());
    }
  }
  if (c.model.design_bounds) {
    try {
      c.model.design_bounds->validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("model.design_bounds: ") + e.what());
    }
  }
  for (double v : c.thresholds)
    if (!std::isfinite(v)) throw ConfigError("thresholds must be finite");
  auto wrap = [](const char* where, auto&& f) {
    try {
      f();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string(where) + ": " + e.what());
    }
  };
  wrap("outer", [&] { c.outer.validate(); });
  wrap("inner", [&] { c.inner.validate(); });
  wrap("ebt", [&] { c.ebt.validate(); });
  static const std::set<std::string> variants{"best", "worst", "custom"};
  if (!variants.count(c.margin.variant)) throw ConfigError("margin.variant: expected best, worst or custom");
  static const std::set<std::string> components{"power", "case", "antenna", "amplifier"};
  for (const auto& m : c.margin.components)
    if (!components.count(m.component)) throw ConfigError("margin.components: unknown component '" + m.component + "'");
  if (!(c.margin.system_max >= 0.0)) throw ConfigError("margin.system_max must be non-negative");
  if (c.margin.steps < 2) throw ConfigError("margin.steps must be at least 2");
  if (c.output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

inline RunConfig from_json(const Json& j) {
  RunConfig c;
  detail::ObjectReader r(j, "");
  r.get("schema_version", c.schema_version);
  if (!r.has("schema_version")) throw ConfigError("config: schema_version is required");
  r.get("mode", c.mode);
  r.get("seed", c.seed);
  if (r.has("model")) detail::model_from_json(r.raw("model"), "model", c.model);
  if (r.has("design")) {
    std::vector<double> d;
    r.get("design", d);
    c.design = d;
  }
  if (r.has("outer")) detail::search_from_json(r.raw("outer"), "outer", c.outer);
  if (r.has("inner")) detail::search_from_json(r.raw("inner"), "inner", c.inner);
  if (r.has("ebt")) detail::ebt_from_json(r.raw("ebt"), "ebt", c.ebt);
  r.get("thresholds", c.thresholds);
  if (r.has("margin")) detail::margin_from_json(r.raw("margin"), "margin", c.margin);
  if (r.has("benchmark")) {
    detail::ObjectReader b(r.raw("benchmark"), "benchmark");
    b.get("dimensions", c.benchmark.dimensions);
    b.get("tau_c", c.benchmark.tau_c);
    b.get("filter_accuracy", c.benchmark.filter_accuracy);
    b.get("seeds", c.benchmark.seeds);
    b.finish();
  }
  r.get("compare_exact", c.compare_exact);
  r.get("output_dir", c.output_dir);
  r.finish();
  validate(c);
  return c;
}

/// Overrides from variables named PREFIX + path, with path segments joined
/// by "__" (EBRO_EBT__TAU_C sets ebt.tau_c). Values parse as JSON when they
/// can and as strings otherwise.
inline void apply_env_overrides(Json& j, const std::vector<std::pair<std::string, std::string>>& env,
                                const std::string& prefix = "EBRO_") {
  for (const auto& [name, value] : env) {
    if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) continue;
    std::vector<std::string> path;
    std::string rest = detail::lower(name.substr(prefix.size()));
    for (std::size_t pos = 0;;) {
      const auto next = rest.find("__", pos);
      path.push_back(rest.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
      if (next == std::string::npos) break;
      pos = next + 2;
    }
    Json* node = &j;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      if (!node->is_object()) throw ConfigError("environment override " + name + ": parent is not an object");
      node = &(*node)[path[k]];
      if (node->is_null()) *node = Json::object();
    }
    Json parsed = Json::parse(value, nullptr, false);
    if (parsed.is_discarded()) parsed = value;
    (*node)[path.back()] = parsed;
  }
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  Json j = Json::parse(in, nullptr, false, true);
  if (j.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");
  return j;
}

inline RunConfig parse_config(const std::string& text) {
  Json j = Json::parse(text, nullptr, false, true);
  if (j.is_discarded()) throw ConfigError("config is not valid JSON");
  return from_json(j);
}

}  // namespace ebro::cli

#endif  // EBRO_CLI_CONFIG_HPP
