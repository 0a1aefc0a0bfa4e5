#ifndef EBRO_MODELS_SPACECRAFT_HPP
#define EBRO_MODELS_SPACECRAFT_HPP

// Sizing models for a solar/battery power system (POW) and a telecom link
// (TTC), alone or coupled through the transmitter power.
//
// Design vectors:     TTC (f_T [MHz], Mod, T, G_t [dB])
//                     POW (eta_cell, rho_sa [kg/m^2], a_pcu [kg/W], E_d [Wh/kg])
// Uncertain vectors:  TTC (eta_ANT, rho_CMR, L_T [dB], AT_tempT [K])
//                     POW (X_e, X_d, I_d, eta_PCU)
// The integrated model concatenates TTC then POW in both vectors.
//
// Amplifier mass, rain loss, the Eb/No curve and the DOD law stand in for
// reference data that is not reproduced here; each one is a configurable
// parameter of ScenarioConfig.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ebro/evidence.hpp"
#include "ebro/model.hpp"
#include "ebro/optimize.hpp"

namespace ebro::models {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

struct SolarCell {
  std::string name;
  double efficiency = 0.0;
  double degradation = 0.0;  // per year
};

struct BatteryType {
  std::string name;
  double energy_density = 0.0;  // Wh/kg
  double efficiency = 0.0;      // fraction
  double q = 0.0;
};

struct AtmosphereBand {
  double altitude_lo_km = 0.0;
  double altitude_hi_km = 0.0;
  double loss_db = 0.0;
};

struct LookupTables {
  std::vector<SolarCell> solar_cells = {{"CdTe", 0.165, 1.0},         {"p c-Si", 0.203, 0.037},
                                        {"u c-Si", 0.25, 0.037},      {"3j GaAs", 0.30, 0.05},
                                        {"Conc. 3j GaAs", 0.38, 0.05}, {"Multijunc. cells", 0.41, 0.05}};
  std::vector<BatteryType> batteries = {{"NiCd", 60.0, 0.85, 145.8}, {"NiH2", 75.0, 0.86, 176.3}};
  std::vector<AtmosphereBand> atmosphere = {
      {-2.0, 2.0, 0.04}, {2.1, 6.0, 0.025}, {6.1, 10.0, 0.008}, {10.1, 14.0, 0.004}, {14.1, 18.0, 0.001}};
  double feeder_loss_db = 2.0;
  double misalignment_loss_db = 0.5;
  double implementation_loss_db = 2.0;

  /// Row with the nearest efficiency (ties: the lower efficiency).
  const SolarCell& solar_cell_for(double efficiency) const {
    const SolarCell* best = &solar_cells.front();
    for (const auto& c : solar_cells)
      if (std::abs(c.efficiency - efficiency) < std::abs(best->efficiency - efficiency)) best = &c;
    return *best;
  }

  /// (efficiency, q) interpolated linearly in E_d, held constant outside the
  /// tabulated range.
  std::pair<double, double> battery_for(double energy_density) const {
    const auto& b = batteries;
    if (energy_density <= b.front().energy_density) return {b.front().efficiency, b.front().q};
    if (energy_density >= b.back().energy_density) return {b.back().efficiency, b.back().q};
    for (std::size_t k = 0; k + 1 < b.size(); ++k)
      if (energy_density <= b[k + 1].energy_density) {
        const double t = (energy_density - b[k].energy_density) / (b[k + 1].energy_density - b[k].energy_density);
        return {b[k].efficiency + t * (b[k + 1].efficiency - b[k].efficiency), b[k].q + t * (b[k + 1].q - b[k].q)};
      }
    return {b.back().efficiency, b.back().q};
  }

  /// Band lookup by altitude; a value between two bands takes the upper one.
  double atmospheric_loss(double altitude_km) const {
    if (altitude_km < atmosphere.front().altitude_lo_km || altitude_km > atmosphere.back().altitude_hi_km)
      throw std::domain_error("ground station altitude " + std::to_string(altitude_km) +
                              " km is outside the atmospheric loss table");
    for (const auto& band : atmosphere)
      if (altitude_km <= band.altitude_hi_km) return band.loss_db;
    return atmosphere.back().loss_db;
  }
};

struct ScenarioConfig {
  // telecom
  double r_gs_km = 1.5e6;
  double access_time_s = 1000.0;
  double acquisition_time_s = 0.0;
  double data_bits = 120000.0;
  double faraday_rotation_deg = 9.0;
  double ber = 1e-6;
  double ground_altitude_m = 0.0;
  double elevation_deg = 30.0;
  double ground_gain_db = 60.0;        // G_r
  double lna_gain_db = 60.0;           // G_AMP
  double cable_loss_db = 8.0;          // L_A
  double amplifier_noise_k = 400.0;    // T_AMP
  double noise_figure_db = 10.0;       // F
  double tx_gain_db = 20.0;            // G_T
  double tx_amplifier_noise_k = 400.0; // T_eT
  double tx_noise_figure_db = 10.0;    // F_T
  double antenna_noise_k = 290.0;      // AN_temp
  double rain_loss_db = 0.0;           // Ra_L
  double rain_absorption_db = 0.0;     // RA
  double boltzmann_db = 228.6;
  double reference_temperature_k = 290.0;
  /// BER = erfc(sqrt(k * Eb/No)) / 2; Mod < 0.5 uses the first factor.
  double modulation_k_low = 1.0;
  double modulation_k_high = 0.5;
  double twta_mass_per_w = 0.07;
  double twta_mass_offset = 0.5;
  double sspa_mass_per_w = 0.08;
  double sspa_mass_offset = 1.0;
  double patch_dielectric_density = 2000.0;
  double patch_copper_density = 8940.0;
  double horn_areal_density = 15.0;
  double parabola_areal_density = 10.0;

  // power
  double solar_flux = 1367.0;
  double sun_angle_deg = 15.0;
  double orbit_period_s = 5900.0;
  double eclipse_fraction = 0.5;
  double life_years = 4.0;
  double daylight_load_w = 900.0;
  double eclipse_load_w = 400.0;
  /// 0 derives Life * year / period.
  double n_cycles = 0.0;
  bool link_power_in_daylight = true;
  bool link_power_in_eclipse = true;

  double infeasible_penalty = 1e6;
  LookupTables tables;

  double cycles() const {
    if (n_cycles > 0.0) return n_cycles;
    return life_years * 365.25 * 86400.0 / orbit_period_s;
  }
  double eclipse_time_s() const { return orbit_period_s * eclipse_fraction; }
  double daylight_time_s() const { return orbit_period_s * (1.0 - eclipse_fraction); }

  /// Inconsistencies that make every evaluation infeasible.
  std::vector<std::string> infeasibilities() const {
    std::vector<std::string> out;
    if (!(access_time_s > acquisition_time_s)) out.push_back("access time must exceed acquisition time");
    if (!(std::cos(deg_to_rad(faraday_rotation_deg)) > 0.0)) out.push_back("cos(faraday rotation) must be positive");
    if (!(std::sin(deg_to_rad(elevation_deg)) > 0.0)) out.push_back("elevation must lie in (0, 180) degrees");
    if (!(eclipse_fraction >= 0.0 && eclipse_fraction < 1.0)) out.push_back("eclipse fraction must lie in [0, 1)");
    if (!(ber > 0.0 && ber < 0.5)) out.push_back("BER must lie in (0, 0.5)");
    if (!(cycles() > 1.0)) out.push_back("battery cycle count must exceed 1");
    return out;
  }
};

/// Eb/No (linear) solving BER = erfc(sqrt(k * x)) / 2.
inline double eb_no_linear(double ber, double k) {
  double lo = 0.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(mid) > ber) lo = mid;
    else hi = mid;
  }
  const double y = 0.5 * (lo + hi);
  return y * y / k;
}

// ---------------------------------------------------------------- power

struct PowerDesign {
  double eta_cell = 0.0;
  double rho_sa = 0.0;
  double a_pcu = 0.0;
  double energy_density = 0.0;
};

struct PowerUncertain {
  double x_e = 0.0;
  double x_d = 0.0;
  double i_d = 0.0;
  double eta_pcu = 0.0;
};

struct PowerResult {
  double p_sa = 0.0;
  double p_bol = 0.0;
  double degradation = 0.0;
  double l_d = 0.0;
  double p_eol = 0.0;
  double a_sa = 0.0;
  double m_sa = 0.0;
  double p_pcu = 0.0;
  double m_pcu = 0.0;
  double eta_batt = 0.0;
  double dod = 0.0;
  double c_min = 0.0;
  double m_b = 0.0;
  double total_mass = 0.0;
  bool feasible = true;
  bool dod_clamped = false;
};

/// Orbit-average array power for the given loads.
inline double array_power(double p_e, double t_e, double x_e, double p_d, double t_d, double x_d) {
  return (p_e * t_e / x_e + p_d * t_d / x_d) / t_d;
}

inline double life_degradation(double degradation_per_year, double life_years) {
  return std::pow(1.0 - degradation_per_year, life_years);
}

inline PowerResult power_budget(const PowerDesign& d, const PowerUncertain& u, double p_d, double p_e,
                                const ScenarioConfig& s) {
  PowerResult r;
  const double t_e = s.eclipse_time_s(), t_d = s.daylight_time_s();
  r.p_sa = array_power(p_e, t_e, u.x_e, p_d, t_d, u.x_d);
  r.p_bol = d.eta_cell * s.solar_flux * u.i_d * std::cos(deg_to_rad(s.sun_angle_deg));
  r.degradation = s.tables.solar_cell_for(d.eta_cell).degradation;
  r.l_d = life_degradation(r.degradation, s.life_years);
  r.p_eol = r.p_bol * r.l_d;
  r.p_pcu = r.p_sa / u.eta_pcu;
  r.m_pcu = d.a_pcu * r.p_pcu;
  const auto [eta_batt, q] = s.tables.battery_for(d.energy_density);
  r.eta_batt = eta_batt;
  r.dod = q / (100.0 * std::log10(s.cycles()));
  if (!(r.dod > 0.0 && r.dod <= 1.0)) {
    r.dod = std::clamp(r.dod, 1e-6, 1.0);
    r.dod_clamped = true;
  }
  r.c_min = p_e * (t_e / 3600.0) / (r.dod * r.eta_batt);
  r.m_b = r.c_min / d.energy_density;
  if (!(r.p_eol > 0.0)) {
    r.feasible = false;
    r.total_mass = s.infeasible_penalty;
    return r;
  }
  r.a_sa = r.p_sa / r.p_eol;
  r.m_sa = r.a_sa * d.rho_sa;
  r.total_mass = r.m_sa + r.m_pcu + r.m_b;
  return r;
}

// ---------------------------------------------------------------- telecom

struct TelecomDesign {
  double f_t_mhz = 0.0;
  double mod = 0.0;
  double type = 0.0;  // 0 TWTA, 1 solid state
  double g_t_db = 0.0;
};

struct TelecomUncertain {
  double eta_ant = 0.0;
  double rho_cmr = 0.0;
  double l_t_db = 0.0;
  double t_ant_k = 0.0;
};

struct TelecomResult {
  double r_t = 0.0;
  double eb_no_db = 0.0;
  double cn = 0.0;
  double fs_l = 0.0;
  double p_l = 0.0;
  double a_lh = 0.0;
  double l_total = 0.0;
  double rn_fig = 0.0;
  double s_temp = 0.0;
  double n_rain = 0.0;
  double ts_noise = 0.0;
  double g_over_t = 0.0;
  double eirp = 0.0;
  double p_ld_db = 0.0;
  double p_ld_w = 0.0;
  double d_ant = 0.0;
  std::string antenna;
  double m_ant = 0.0;
  double m_amp = 0.0;
  double m_case = 0.0;
  double total_mass = 0.0;
  bool feasible = true;
};

inline double free_space_loss(double r_gs_km, double f_t_mhz) {
  return 32.4 + 20.0 * std::log10(r_gs_km) + 20.0 * std::log10(f_t_mhz);
}

inline double polarization_loss(double faraday_rotation_rad) {
  return -20.0 * std::log10(std::cos(faraday_rotation_rad));
}

/// Noise temperature of an antenna + amplifier + lossy cable chain.
inline double chain_noise(double antenna_k, double amplifier_k, double loss_db, double noise_figure_db,
                          double gain_db, double k_o) {
  const double l = db_to_linear(loss_db);
  return antenna_k + amplifier_k + ((l - 1.0) * k_o + l * (db_to_linear(noise_figure_db) - 1.0) * k_o) / db_to_linear(gain_db);
}

inline double amplifier_mass(double p_ld_w, double type, const ScenarioConfig& s) {
  return type < 0.5 ? s.twta_mass_per_w * p_ld_w + s.twta_mass_offset : s.sspa_mass_per_w * p_ld_w + s.sspa_mass_offset;
}

/// Antenna characteristic length [m] and mass [kg] by gain band.
inline std::pair<double, double> antenna_mass(double g_t_db, double eta_ant, double f_t_mhz, const ScenarioConfig& s,
                                              std::string* kind = nullptr) {
  constexpr double c = 299792458.0;
  const double d = std::sqrt(db_to_linear(g_t_db) / eta_ant) * c / (std::numbers::pi * f_t_mhz * 1e6);
  const double disc = std::numbers::pi * d * d / 4.0;
  if (g_t_db <= 10.0) {
    if (kind) *kind = "patch";
    return {d, disc * (0.0015 * s.patch_dielectric_density + 0.0005 * s.patch_copper_density)};
  }
  if (g_t_db <= 20.0) {
    if (kind) *kind = "horn";
    const double length = 2.0 * d;
    const double lateral = std::numbers::pi * d / 2.0 * std::sqrt(d * d / 4.0 + length * length);
    return {d, lateral * s.horn_areal_density};
  }
  if (kind) *kind = "parabola";
  return {d, disc * s.parabola_areal_density};
}

/// Terms of the link budget that depend on the scenario only.
struct LinkConstants {
  bool feasible = true;
  double r_t = 0.0;
  double eb_no_low_db = 0.0;
  double eb_no_high_db = 0.0;
  double p_l = 0.0;
  double a_lh = 0.0;
  double fixed_loss_db = 0.0;  // every loss except free space
  double rn_fig = 0.0;
  double n_rain = 0.0;
};

inline LinkConstants link_constants(const ScenarioConfig& s) {
  LinkConstants c;
  if (!s.infeasibilities().empty()) {
    c.feasible = false;
    return c;
  }
  c.r_t = linear_to_db(1e3 * s.data_bits / (s.access_time_s - s.acquisition_time_s));
  c.eb_no_low_db = linear_to_db(eb_no_linear(s.ber, s.modulation_k_low));
  c.eb_no_high_db = linear_to_db(eb_no_linear(s.ber, s.modulation_k_high));
  c.p_l = polarization_loss(deg_to_rad(s.faraday_rotation_deg));
  c.a_lh = s.tables.atmospheric_loss(s.ground_altitude_m / 1000.0) / std::sin(deg_to_rad(s.elevation_deg));
  c.fixed_loss_db = s.tables.feeder_loss_db + s.tables.misalignment_loss_db + c.a_lh + c.p_l + s.rain_loss_db +
                    s.tables.implementation_loss_db;
  c.rn_fig = chain_noise(s.antenna_noise_k, s.amplifier_noise_k, s.cable_loss_db, s.noise_figure_db, s.lna_gain_db,
                         s.reference_temperature_k);
  c.n_rain = (1.0 - 1.0 / db_to_linear(s.rain_absorption_db)) * s.reference_temperature_k;
  return c;
}

inline TelecomResult telecom_budget(const TelecomDesign& d, const TelecomUncertain& u, const ScenarioConfig& s,
                                    const LinkConstants& c) {
  TelecomResult r;
  if (!c.feasible) {
    r.feasible = false;
    r.total_mass = s.infeasible_penalty;
    return r;
  }
  r.r_t = c.r_t;
  r.eb_no_db = d.mod < 0.5 ? c.eb_no_low_db : c.eb_no_high_db;
  r.cn = r.eb_no_db + r.r_t;
  r.fs_l = free_space_loss(s.r_gs_km, d.f_t_mhz);
  r.p_l = c.p_l;
  r.a_lh = c.a_lh;
  r.l_total = r.fs_l + c.fixed_loss_db;
  r.rn_fig = c.rn_fig;
  r.s_temp = chain_noise(u.t_ant_k, s.tx_amplifier_noise_k, u.l_t_db, s.tx_noise_figure_db, s.tx_gain_db,
                         s.reference_temperature_k);
  r.n_rain = c.n_rain;
  r.ts_noise = linear_to_db(r.rn_fig + r.s_temp + r.n_rain);
  r.g_over_t = s.ground_gain_db - r.ts_noise;
  r.eirp = r.cn - r.g_over_t + r.l_total - s.boltzmann_db;
  r.p_ld_db = r.eirp - d.g_t_db;
  r.p_ld_w = db_to_linear(r.p_ld_db);
  std::tie(r.d_ant, r.m_ant) = antenna_mass(d.g_t_db, u.eta_ant, d.f_t_mhz, s, &r.antenna);
  r.m_amp = amplifier_mass(r.p_ld_w, d.type, s);
  r.m_case = r.m_amp * u.rho_cmr;
  r.total_mass = r.m_ant + r.m_amp + r.m_case;
  return r;
}

inline TelecomResult telecom_budget(const TelecomDesign& d, const TelecomUncertain& u, const ScenarioConfig& s) {
  return telecom_budget(d, u, s, link_constants(s));
}

// ---------------------------------------------------------------- evidence and models

inline UncertainSpace ttc_space() {
  return UncertainSpace({
      {"eta_ANT", {{0.5, 0.6}, {0.65, 0.75}, {0.6, 0.8}, {0.8, 0.95}}, {0.2, 0.5, 0.2, 0.1}},
      {"rho_CMR", {{0.1, 0.2}, {0.25, 0.3}, {0.1, 0.3}}, {0.5, 0.35, 0.15}},
      {"L_T", {{1.0, 2.0}, {2.0, 3.0}, {3.0, 5.0}}, {0.2, 0.3, 0.5}},
      {"AT_tempT", {{200.0, 250.0}, {300.0, 370.0}, {400.0, 500.0}}, {0.1, 0.6, 0.3}},
  });
}

inline UncertainSpace pow_space() {
  return UncertainSpace({
      {"X_e", {{0.5, 0.6}, {0.65, 0.7}, {0.72, 0.75}}, {0.1, 0.6, 0.3}},
      {"X_d", {{0.65, 0.7}, {0.75, 0.8}, {0.8, 0.85}}, {0.2, 0.6, 0.2}},
      {"I_d", {{0.8, 0.81}, {0.82, 0.83}, {0.83, 0.9}}, {0.7, 0.2, 0.1}},
      {"eta_PCU", {{0.5, 0.6}, {0.65, 0.7}, {0.8, 0.9}}, {0.1, 0.6, 0.3}},
  });
}

inline UncertainSpace integrated_space() {
  auto vars = ttc_space().variables();
  const auto power = pow_space();
  for (const auto& v : power.variables()) vars.push_back(v);
  return UncertainSpace(std::move(vars));
}

inline Bounds ttc_design_bounds() { return {{7e3, 0.0, 0.0, 5.0}, {11e3, 1.0, 1.0, 20.0}}; }
inline Bounds pow_design_bounds() { return {{0.1, 1.0, 0.01, 60.0}, {0.3, 2.0, 0.02, 100.0}}; }

inline TelecomDesign ttc_design(std::span<const double> d) { return {d[0], d[1], d[2], d[3]}; }
inline TelecomUncertain ttc_uncertain(std::span<const double> u) { return {u[0], u[1], u[2], u[3]}; }
inline PowerDesign pow_design(std::span<const double> d) { return {d[0], d[1], d[2], d[3]}; }
inline PowerUncertain pow_uncertain(std::span<const double> u) { return {u[0], u[1], u[2], u[3]}; }

inline SystemModel ttc_model(const ScenarioConfig& s = {}) {
  SystemModel m;
  m.name = "ttc";
  m.design_bounds = ttc_design_bounds();
  m.space = ttc_space();
  m.design_names = {"f_T", "Mod", "T", "G_t"};
  m.function = [s, c = link_constants(s)](std::span<const double> d, std::span<const double> u) {
    return telecom_budget(ttc_design(d), ttc_uncertain(u), s, c).total_mass;
  };
  return m;
}

inline SystemModel pow_model(const ScenarioConfig& s = {}) {
  SystemModel m;
  m.name = "pow";
  m.design_bounds = pow_design_bounds();
  m.space = pow_space();
  m.design_names = {"eta_cell", "rho_sa", "a_pcu", "E_d"};
  m.function = [s](std::span<const double> d, std::span<const double> u) {
    return power_budget(pow_design(d), pow_uncertain(u), s.daylight_load_w, s.eclipse_load_w, s).total_mass;
  };
  return m;
}

struct IntegratedResult {
  TelecomResult ttc;
  PowerResult pow;
  double total_mass = 0.0;
  bool feasible = true;
};

inline IntegratedResult integrated_budget(std::span<const double> d, std::span<const double> u,
                                          const ScenarioConfig& s, const LinkConstants& c) {
  IntegratedResult r;
  r.ttc = telecom_budget(ttc_design(d.first(4)), ttc_uncertain(u.first(4)), s, c);
  const double p_d = s.daylight_load_w + (s.link_power_in_daylight ? r.ttc.p_ld_w : 0.0);
  const double p_e = s.eclipse_load_w + (s.link_power_in_eclipse ? r.ttc.p_ld_w : 0.0);
  r.pow = power_budget(pow_design(d.subspan(4, 4)), pow_uncertain(u.subspan(4, 4)), p_d, p_e, s);
  r.feasible = r.ttc.feasible && r.pow.feasible;
  r.total_mass = r.feasible ? r.ttc.total_mass + r.pow.total_mass : s.infeasible_penalty;
  return r;
}

inline IntegratedResult integrated_budget(std::span<const double> d, std::span<const double> u,
                                          const ScenarioConfig& s) {
  return integrated_budget(d, u, s, link_constants(s));
}

inline SystemModel integrated_model(const ScenarioConfig& s = {}) {
  SystemModel m;
  m.name = "integrated";
  const auto t = ttc_design_bounds(), p = pow_design_bounds();
  m.design_bounds = t;
  m.design_bounds.lower.insert(m.design_bounds.lower.end(), p.lower.begin(), p.lower.end());
  m.design_bounds.upper.insert(m.design_bounds.upper.end(), p.upper.begin(), p.upper.end());
  m.space = integrated_space();
  m.design_names = {"f_T", "Mod", "T", "G_t", "eta_cell", "rho_sa", "a_pcu", "E_d"};
  m.function = [s, c = link_constants(s)](std::span<const double> d, std::span<const double> u) {
    return integrated_budget(d, u, s, c).total_mass;
  };
  return m;
}

// ---------------------------------------------------------------- margins

struct ComponentMargin {
  std::string component;  // power | case | antenna | amplifier
  double fraction = 0.0;
};

struct MarginSpec {
  std::vector<ComponentMargin> components;
  double system_max = 0.25;
  std::size_t steps = 6;
};

/// 25% on the link power and on the casing.
inline MarginSpec best_case_margins() { return {{{"power", 0.25}, {"case", 0.25}}, 0.25, 6}; }
/// 25% on the antenna and on the amplifier.
inline MarginSpec worst_case_margins() { return {{{"antenna", 0.25}, {"amplifier", 0.25}}, 0.25, 6}; }

struct MarginRow {
  double system_margin = 0.0;
  double mass = 0.0;
};

struct MarginTable {
  double nominal_mass = 0.0;
  /// Mass after component margins, before the system margin.
  double component_mass = 0.0;
  std::vector<MarginRow> rows;
};

/// TTC mass at (d, u) with component margins applied, then a system margin
/// (a fraction of the nominal mass) swept from 0 to system_max in `steps`
/// equal increments. The casing follows the margined amplifier.
inline MarginTable margin_mass(std::span<const double> d, std::span<const double> u, const MarginSpec& spec,
                               const ScenarioConfig& s = {}) {
  const auto design = ttc_design(d);
  const auto unc = ttc_uncertain(u);
  const auto nominal = telecom_budget(design, unc, s);
  double power = 0.0, casing = 0.0, antenna = 0.0, amplifier = 0.0;
  for (const auto& c : spec.components) {
    if (c.component == "power") power += c.fraction;
    else if (c.component == "case") casing += c.fraction;
    else if (c.component == "antenna") antenna += c.fraction;
    else if (c.component == "amplifier") amplifier += c.fraction;
    else throw std::invalid_argument("unknown margin component '" + c.component + "'");
  }
  const double m_amp = amplifier_mass(nominal.p_ld_w * (1.0 + power), design.type, s) * (1.0 + amplifier);
  const double m_case = m_amp * unc.rho_cmr * (1.0 + casing);
  const double m_ant = nominal.m_ant * (1.0 + antenna);
  MarginTable t;
  t.nominal_mass = nominal.total_mass;
  t.component_mass = m_ant + m_amp + m_case;
  const std::size_t steps = std::max<std::size_t>(spec.steps, 2);
  for (std::size_t k = 0; k < steps; ++k) {
    const double sm = spec.system_max * static_cast<double>(k) / static_cast<double>(steps - 1);
    t.rows.push_back({sm, t.component_mass + sm * t.nominal_mass});
  }
  return t;
}

}  // namespace ebro::models

#endif  // EBRO_MODELS_SPACECRAFT_HPP
