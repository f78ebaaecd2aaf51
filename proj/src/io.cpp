#include "winkler/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "winkler/errors.hpp"

namespace winkler {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ParameterError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ParameterError("unknown key '" + key + "' in " + where);
}

double number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ParameterError("missing key '" + key + "' in " + where);
  const json& v = j.at(key);
  if (!v.is_number()) throw ParameterError("'" + key + "' in " + where + " must be a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

std::complex<double> complex_value(const json& v, const std::string& what) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ParameterError(what + " must be a number or a [re, im] pair");
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

}  // namespace

StackParameters parse_parameters(const json& j) {
  const std::string where = "parameters";
  reject_unknown(j, {"lambda_f", "mu_f", "E_f", "nu_f", "rho_E", "rho_nu", "alpha", "beta", "h_f", "h_b", "L", "cell"},
                 where);
  StackParameters p;
  const bool lame = j.contains("lambda_f") || j.contains("mu_f");
  const bool engineering = j.contains("E_f") || j.contains("nu_f");
  if (lame == engineering) throw ParameterError("give either lambda_f and mu_f or E_f and nu_f");
  if (lame) {
    p.lambda_f = number(j, "lambda_f", where);
    p.mu_f = number(j, "mu_f", where);
  } else {
    const Lame l = lame_from_engineering(number(j, "E_f", where), number(j, "nu_f", where));
    p.lambda_f = l.lambda;
    p.mu_f = l.mu;
  }
  p.rho_E = number_or(j, "rho_E", 1.0, where);
  p.rho_nu = number_or(j, "rho_nu", 1.0, where);
  p.alpha = number(j, "alpha", where);
  p.beta = number(j, "beta", where);
  p.h_f = number_or(j, "h_f", 1.0, where);
  p.h_b = number_or(j, "h_b", 1.0, where);
  if (j.contains("cell")) {
    const json& c = j.at("cell");
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
      throw ParameterError("'cell' must be a pair of numbers");
    p.cell = {c[0].get<double>(), c[1].get<double>()};
  }
  p.L = number_or(j, "L", std::hypot(p.cell[0], p.cell[1]), where);
  p.validate();
  return p;
}

Mode parse_mode(const json& j) {
  reject_unknown(j, {"mode", "p_hat", "phi_hat"}, "load entry");
  Mode m;
  const json& n = j.contains("mode") ? j.at("mode") : throw ParameterError("load entry needs 'mode'");
  if (!n.is_array() || n.size() != 2 || !n[0].is_number_integer() || !n[1].is_number_integer())
    throw ParameterError("'mode' must be a pair of integers");
  m.n = {n[0].get<int>(), n[1].get<int>()};
  if (j.contains("p_hat")) m.p_hat = complex_value(j.at("p_hat"), "p_hat");
  if (j.contains("phi_hat")) {
    const json& phi = j.at("phi_hat");
    if (!phi.is_array() || phi.size() != 3) throw ParameterError("'phi_hat' must be a 3x3 array");
    for (int r = 0; r < 3; ++r) {
      if (!phi[r].is_array() || phi[r].size() != 3) throw ParameterError("'phi_hat' must be a 3x3 array");
      for (int c = 0; c < 3; ++c) m.phi_hat(r, c) = complex_value(phi[r][c], "phi_hat entry");
    }
  }
  m.validate();
  return m;
}

RunConfig parse_run_config(const json& j) {
  reject_unknown(j, {"schema", "parameters", "load", "eps", "mesh_n", "out", "threads"}, "config");
  if (!j.contains("schema") || j.at("schema") != kSchemaVersion)
    throw ParameterError(std::string("config 'schema' must be \"") + kSchemaVersion + "\"");
  RunConfig cfg;
  if (!j.contains("parameters")) throw ParameterError("config needs 'parameters'");
  cfg.params = parse_parameters(j.at("parameters"));
  if (j.contains("load")) {
    if (!j.at("load").is_array()) throw ParameterError("'load' must be an array");
    for (const auto& entry : j.at("load")) cfg.load.push_back(parse_mode(entry));
  }
  if (j.contains("eps")) {
    const json& e = j.at("eps");
    if (!e.is_array() || e.empty()) throw ParameterError("'eps' must be a non-empty array");
    for (const auto& v : e) {
      if (!v.is_number() || !(v.get<double>() > 0.0)) throw ParameterError("'eps' entries must be positive numbers");
      cfg.eps.push_back(v.get<double>());
    }
  }
  if (j.contains("mesh_n")) {
    const json& n = j.at("mesh_n");
    if (!n.is_number_integer() || n.get<long long>() < 2) throw ParameterError("'mesh_n' must be an integer >= 2");
    cfg.mesh_n = n.get<std::size_t>();
  }
  if (j.contains("out")) {
    if (!j.at("out").is_string()) throw ParameterError("'out' must be a string");
    cfg.out_dir = j.at("out").get<std::string>();
  }
  if (j.contains("threads")) {
    const json& t = j.at("threads");
    if (!t.is_number_integer() || t.get<long long>() < 1) throw ParameterError("'threads' must be a positive integer");
    cfg.threads = t.get<unsigned>();
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParameterError("malformed config " + path.string() + ": " + e.what());
  }
  return parse_run_config(j);
}

json to_json(const Field3D& field) {
  json out = json::array();
  const std::vector<double> nodes = field.mesh.nodes();
  for (const auto& f : field.modes) {
    json u = json::array();
    for (const auto& v : f.u) u.push_back(json::array({complex_json(v[0]), complex_json(v[1]), complex_json(v[2])}));
    out.push_back({{"mode", {f.mode.n[0], f.mode.n[1]}}, {"nodes", nodes}, {"u", std::move(u)}});
  }
  return out;
}

json to_json(const ReducedSolution& s) {
  return {{"model", std::string(to_string(s.model))},
          {"mode", {s.mode.n[0], s.mode.n[1]}},
          {"zeta", json::array({complex_json(s.zeta[0]), complex_json(s.zeta[1]), complex_json(s.zeta[2])})}};
}

json to_json(const std::vector<ReducedSolution>& solution) {
  json out = json::array();
  for (const auto& s : solution) out.push_back(to_json(s));
  return out;
}

json to_json(const LimitCoefficients& c) {
  return {{"c1", c.c1},         {"c2", c.c2},         {"c3", c.c3},         {"K_in", c.K_in},
          {"K_tr", c.K_tr},     {"ell_in", c.ell_in}, {"ell_tr", c.ell_tr}, {"bending", c.bending}};
}

json to_json(const StackParameters& p) {
  return {{"lambda_f", p.lambda_f}, {"mu_f", p.mu_f}, {"rho_E", p.rho_E}, {"rho_nu", p.rho_nu},
          {"alpha", p.alpha},       {"beta", p.beta}, {"h_f", p.h_f},     {"h_b", p.h_b},
          {"L", p.L},               {"cell", {p.cell[0], p.cell[1]}}};
}

json classification_json(const StackParameters& params) {
  const Exponents ex = derive_exponents(params.alpha, params.beta);
  const LimitCoefficients c = limit_coefficients(params);
  const NondimensionalCoefficients nd = nondimensional_coefficients(params);
  const Lame b = reference_bonding_moduli(params);
  json out = {{"alpha", params.alpha},
              {"beta", params.beta},
              {"gamma", ex.gamma},
              {"delta", ex.delta},
              {"regime", std::string(to_string(ex.regime))},
              {"coefficients", to_json(c)},
              {"ell_in", c.ell_in},
              {"ell_tr", c.ell_tr},
              {"bonding_reference", {{"lambda_b", b.lambda}, {"mu_b", b.mu}}},
              {"nondimensional",
               {{"c_hat", nd.c_hat},
                {"pressure_factor", nd.pressure_factor},
                {"membrane_weight", nd.membrane_weight},
                {"plate_weight", nd.plate_weight}}}};
  out["warning"] = ex.warning ? json(*ex.warning) : json(nullptr);
  return out;
}

json to_json(const SweepReport& r) {
  json bounds = {{"kappa_film", json::array()}, {"kappa_b33", json::array()}, {"e33_film", json::array()},
                 {"ea3_film", json::array()},   {"d3ua_bl", json::array()},   {"eab_bl", json::array()}};
  json residuals = {{"r_film_k33", json::array()}, {"r_film_k3a", json::array()}, {"r_bl_kaa", json::array()}};
  json eps = json::array(), n = json::array(), err = json::array(), err_abs = json::array(), err_bl = json::array(),
       stat = json::array(), rel = json::array(), ms = json::array();
  for (const auto& e : r.entries) {
    eps.push_back(e.eps);
    n.push_back(e.elements_per_layer);
    err.push_back(e.error_h1_film.value);
    err_abs.push_back(e.error_h1_film.absolute);
    err_bl.push_back(e.error_l2_bonding.value);
    bounds["kappa_film"].push_back(e.bounds.kappa_film);
    bounds["kappa_b33"].push_back(e.bounds.kappa_b33);
    bounds["e33_film"].push_back(e.bounds.e33_film);
    bounds["ea3_film"].push_back(e.bounds.ea3_film);
    bounds["d3ua_bl"].push_back(e.bounds.d3ua_bl);
    bounds["eab_bl"].push_back(e.bounds.eab_bl);
    residuals["r_film_k33"].push_back(e.residuals.film_k33);
    residuals["r_film_k3a"].push_back(e.residuals.film_k3a);
    residuals["r_bl_kaa"].push_back(e.residuals.bl_kaa);
    stat.push_back(e.stationarity);
    rel.push_back(e.relative_residual);
    ms.push_back(e.runtime_ms);
  }
  json out = {{"schema", kSchemaVersion},
              {"parameters", to_json(r.params)},
              {"gamma", r.exponents.gamma},
              {"delta", r.exponents.delta},
              {"regime", std::string(to_string(r.exponents.regime))},
              {"limit_model", r.limit_model},
              {"coefficients", to_json(r.coefficients)},
              {"eps_values", std::move(eps)},
              {"elements_per_layer", std::move(n)},
              {"errors_h1_film", std::move(err)},
              {"errors_h1_film_absolute", std::move(err_abs)},
              {"errors_l2_bonding", std::move(err_bl)},
              {"strain_bound_ratios", std::move(bounds)},
              {"optimality_residuals", std::move(residuals)},
              {"stationarity_residuals", std::move(stat)},
              {"solver_relative_residuals", std::move(rel)},
              {"runtime_ms", std::move(ms)},
              {"notes", r.notes}};
  if (r.rate)
    out["rate"] = {{"slope", r.rate->slope}, {"low_confidence", r.rate->low_confidence}};
  else
    out["rate"] = nullptr;
  return out;
}

}  // namespace winkler
