#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hnls/harness.hpp"

namespace hnls {

using json = nlohmann::json;

// -- config ------------------------------------------------------------------

inline void from_json_params(const json& j, EquationParams& p) {
  p.a = j.value("a", 0.0);
  p.b = j.value("b", 0.0);
  p.c = j.value("c", 0.0);
  p.d = j.value("d", 0.0);
  p.e = j.value("e", 0.0);
}

/// Loads an ExperimentConfig from JSON mirroring the struct field names.
/// Every key is optional; scenario presets fill the coefficients unless a
/// "params" object overrides them.
inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  if (j.contains("scenario")) c.scenario = parse_scenario(j.at("scenario"));
  if (j.contains("params")) {
    EquationParams p;
    from_json_params(j.at("params"), p);
    c.params_override = p;
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    c.grid.n = g.value("n", c.grid.n);
    c.grid.length = g.value("L", g.value("length", c.grid.length));
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    c.solver.dt = s.value("dt", c.solver.dt);
    c.solver.t_end = s.value("t_end", c.solver.t_end);
    c.solver.dealias = s.value("dealias", c.solver.dealias);
    c.solver.record_every = s.value("record_every", c.solver.record_every);
    c.solver.boundary_guard = s.value("boundary_guard", c.solver.boundary_guard);
  }
  if (j.contains("thetas")) c.thetas = j.at("thetas").get<std::vector<double>>();
  if (j.contains("lambda_ladder"))
    c.lambda_ladder = j.at("lambda_ladder").get<std::vector<double>>();
  if (j.contains("perturbation_eps"))
    c.perturbation_eps = j.at("perturbation_eps").get<std::vector<double>>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("data")) {
    const json& d = j.at("data");
    c.data.amplitude = d.value("amplitude", c.data.amplitude);
    c.data.sigma = d.value("sigma", c.data.sigma);
    c.data.k = d.value("k", c.data.k);
    c.data.center = d.value("center", c.data.center);
    c.data.mode = d.value("mode", c.data.mode);
  }
  if (j.contains("family")) {
    const json& f = j.at("family");
    c.family.A = f.value("A", c.family.A);
    c.family.R0 = f.value("R0", c.family.R0);
    c.family.T = f.value("T", c.family.T);
    c.family.n_times = f.value("n_times", c.family.n_times);
    c.family.grid_n = f.value("grid_n", c.family.grid_n);
    c.family.grid_length = f.value("grid_length", c.family.grid_length);
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;
  return config_from_json(j);
}

inline json config_to_json(const ExperimentConfig& c) {
  const EquationParams p = c.params();
  return json{
      {"scenario", scenario_name(c.scenario)},
      {"params", {{"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}, {"e", p.e}}},
      {"grid", {{"n", c.grid.n}, {"L", c.grid.length}}},
      {"solver",
       {{"dt", c.solver.dt},
        {"t_end", c.solver.t_end},
        {"dealias", c.solver.dealias},
        {"record_every", c.solver.record_every},
        {"boundary_guard", c.solver.boundary_guard}}},
      {"thetas", c.thetas},
      {"lambda_ladder", c.lambda_ladder},
      {"perturbation_eps", c.perturbation_eps},
      {"seed", c.seed},
      {"data",
       {{"amplitude", c.data.amplitude},
        {"sigma", c.data.sigma},
        {"k", c.data.k},
        {"center", c.data.center},
        {"mode", c.data.mode}}},
      {"family",
       {{"A", c.family.A},
        {"R0", c.family.R0},
        {"T", c.family.T},
        {"n_times", c.family.n_times},
        {"grid_n", c.family.grid_n},
        {"grid_length", c.family.grid_length}}}};
}

// -- reports -----------------------------------------------------------------

inline json to_json(const ConditionEntry& e) {
  json j{{"condition", e.condition}, {"lhs", e.lhs}, {"rhs", e.rhs},
         {"slack", e.slack}, {"pass", e.pass}};
  j["t"] = e.t ? json(*e.t) : json(nullptr);
  j["theta"] = e.theta ? json(*e.theta) : json(nullptr);
  return j;
}

inline json to_json(const ConditionReport& r) {
  json arr = json::array();
  for (const auto& e : r.entries) arr.push_back(to_json(e));
  return json{{"overall_pass", r.overall_pass}, {"entries", arr}};
}

inline json to_json(const InequalityReport& r) {
  json arr = json::array();
  for (const auto& s : r.slacks)
    arr.push_back(json{{"t", s.t},
                       {"lhs", s.lhs},
                       {"rhs_literal", s.rhs_literal},
                       {"slack_literal", s.slack_literal},
                       {"rhs_corrected", s.rhs_corrected},
                       {"slack_corrected", s.slack_corrected},
                       {"pass", s.pass}});
  return json{{"theta", r.theta},
              {"s", r.s},
              {"rho", r.constants.rho},
              {"K0", r.constants.K0},
              {"K1", r.constants.K1},
              {"K2", r.constants.K2},
              {"sobolev_constant", r.sobolev_constant},
              {"pass", r.pass},
              {"slacks", arr}};
}

inline json to_json(const PersistenceReport& r) {
  json dirs = json::array();
  for (const auto& d : r.directions)
    dirs.push_back(json{{"t_end", d.t_end},
                        {"A", d.A},
                        {"tol", d.tol},
                        {"max_rate_violation", d.max_rate_violation},
                        {"max_envelope_violation", d.max_envelope_violation},
                        {"rate_ok", d.rate_ok},
                        {"envelope_ok", d.envelope_ok}});
  return json{{"experiment", "persistence"}, {"a0", r.a0}, {"directions", dirs},
              {"warnings", r.warnings}, {"pass", r.pass}};
}

inline json to_json(const AprioriReport& r) {
  json j{{"experiment", "apriori"},
         {"i1_drift", r.i1_drift},
         {"sup_ux", r.sup_ux},
         {"sup_uxx", r.sup_uxx},
         {"ux_initial", r.ux_initial},
         {"i1_ok", r.i1_ok},
         {"i2_ok", r.i2_ok},
         {"ux_bounded", r.ux_bounded},
         {"warnings", r.warnings},
         {"pass", r.pass}};
  j["i2_drift"] = r.i2_drift ? json(*r.i2_drift) : json(nullptr);
  return j;
}

inline json to_json(const ApproxReport& r) {
  json series = json::array();
  for (const auto& s : r.series)
    series.push_back(json{{"s", s.s}, {"errors", s.errors}, {"monotone", s.monotone}});
  return json{{"experiment", "approx"},
              {"lambdas", r.lambdas},
              {"series", series},
              {"effective_bandwidth", r.effective_bandwidth},
              {"final_check_applicable", r.final_check_applicable},
              {"final_ok", r.final_ok},
              {"min_cutoff_slack", r.min_cutoff_slack},
              {"cutoff_monotone_ok", r.cutoff_monotone_ok},
              {"warnings", r.warnings},
              {"pass", r.pass}};
}

inline json to_json(const ContdepReport& r) {
  json series = json::array();
  for (const auto& s : r.series)
    series.push_back(json{{"theta", s.theta}, {"ratios", s.ratios},
                          {"spread", s.spread}, {"ok", s.ok}});
  return json{{"experiment", "contdep"}, {"eps", r.eps}, {"series", series},
              {"pass", r.pass}};
}

inline json to_json(const LemmaWitness& w) {
  return json{{"C0", w.C0},       {"C0t", w.C0t},     {"C1t", w.C1t},
              {"Theta", w.Theta}, {"gamma1", w.gamma1}, {"R", w.R},
              {"gamma2", w.gamma2}, {"s", w.s},        {"T", w.T}};
}

inline json to_json(const TheoremReport& r) {
  json results = json::array();
  for (const auto& t : r.results)
    results.push_back(json{{"theta", t.theta},
                           {"s", t.s},
                           {"min_slack_literal", t.min_slack_literal},
                           {"min_slack_corrected", t.min_slack_corrected},
                           {"C", t.C},
                           {"theorem_bound_margin", t.theorem_bound_margin},
                           {"pass", t.pass}});
  json ineqs = json::array();
  for (const auto& iq : r.inequalities) ineqs.push_back(to_json(iq));
  return json{{"experiment", "theorem"},
              {"inconclusive", r.inconclusive},
              {"inconclusive_reason", r.inconclusive_reason},
              {"witness", to_json(r.witness)},
              {"conditions_pass", r.conditions_pass},
              {"conditions", to_json(r.conditions)},
              {"results", results},
              {"inequalities", ineqs},
              {"endpoint0_consistency", r.endpoint0_consistency},
              {"endpoint0_bound_ok", r.endpoint0_bound_ok},
              {"endpoint1_consistency", r.endpoint1_consistency},
              {"endpoint1_envelope_ok", r.endpoint1_envelope_ok},
              {"warnings", r.warnings},
              {"pass", r.pass}};
}

inline json to_json(const MixedMonitorReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back(json{{"profile", e.profile}, {"lhs", e.lhs}, {"rhs", e.rhs},
                           {"ratio", e.ratio}, {"skipped", e.skipped}});
  return json{{"experiment", "mixed-monitor"}, {"entries", entries},
              {"spread", r.spread}, {"pass", r.pass}};
}

inline json to_json(const GaugeCheckReport& r) {
  return json{{"experiment", "gauge-check"},
              {"trials", r.trials},
              {"max_c3_after", r.max_c3_after},
              {"c3_ok", r.c3_ok},
              {"max_second_alpha", r.max_second_alpha},
              {"two_path_l2_diff", r.two_path_l2_diff},
              {"two_path_ok", r.two_path_ok},
              {"pass", r.pass}};
}

inline json to_json(const LemmaFamilyReport& r) {
  json ineqs = json::array();
  for (const auto& iq : r.inequalities) ineqs.push_back(to_json(iq));
  return json{{"experiment", "lemma-family"},
              {"A", r.A},
              {"R0", r.R0},
              {"T", r.T},
              {"n_times", r.n_times},
              {"taper_width", r.taper_width},
              {"conditions_pass", r.conditions_pass},
              {"conditions", to_json(r.conditions)},
              {"min_slack_literal", r.min_slack_literal},
              {"min_slack_corrected", r.min_slack_corrected},
              {"max_k_identity_error", r.max_k_identity_error},
              {"inequalities", ineqs},
              {"pass", r.pass}};
}

// -- trajectory output ---------------------------------------------------------

inline void write_diagnostics_csv(const Trajectory& traj,
                                  const std::vector<double>& thetas,
                                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << diagnostics_csv_header(thetas) << "\n";
  for (const auto& rec : traj.diagnostics) out << diagnostics_csv_row(rec) << "\n";
}

inline json diagnostics_to_json(const Trajectory& traj,
                                const std::vector<double>& thetas) {
  json arr = json::array();
  for (const auto& r : traj.diagnostics) {
    json j{{"t", r.t},         {"I1", r.I1},       {"l2", r.l2},
           {"h1dot", r.h1dot}, {"h2dot", r.h2dot}, {"edge_mass", r.edge_mass}};
    j["I2"] = r.I2 ? json(*r.I2) : json(nullptr);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      char key[48];
      std::snprintf(key, sizeof(key), "mu_dot_theta_%g", thetas[i]);
      j[key] = r.weighted_mu_dot[i];
      std::snprintf(key, sizeof(key), "x2_theta_%g", thetas[i]);
      j[key] = r.x2theta[i];
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

/// Raw frame dump, little-endian. Header: u32 n, f64 L, u32 frame count,
/// then the frame times as f64, then each frame as n complex64 values
/// (float32 re, float32 im interleaved).
inline void write_frames_bin(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  if (traj.frames.empty()) throw std::runtime_error("write_frames_bin: no frames");
  const std::uint32_t n = static_cast<std::uint32_t>(traj.frames.front().grid.n());
  const double L = traj.frames.front().grid.length();
  const std::uint32_t count = static_cast<std::uint32_t>(traj.frames.size());
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&L), sizeof(L));
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  for (double t : traj.times)
    out.write(reinterpret_cast<const char*>(&t), sizeof(t));
  for (const Field& f : traj.frames)
    for (const cplx& z : f.values) {
      const float re = static_cast<float>(z.real());
      const float im = static_cast<float>(z.imag());
      out.write(reinterpret_cast<const char*>(&re), sizeof(re));
      out.write(reinterpret_cast<const char*>(&im), sizeof(im));
    }
}

}  // namespace hnls
