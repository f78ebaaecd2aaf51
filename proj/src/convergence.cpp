#include "winkler/convergence.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "winkler/errors.hpp"
#include "winkler/reduced.hpp"

namespace winkler {

namespace {

void check_compatible(const Field3D& a, const Field3D& b) {
  if (a.mesh.nodes() != b.mesh.nodes()) throw ParameterError("fields live on different meshes");
  if (a.modes.size() != b.modes.size()) throw ParameterError("fields carry different mode sets");
  for (std::size_t m = 0; m < a.modes.size(); ++m)
    if (a.modes[m].mode.n != b.modes[m].mode.n) throw ParameterError("fields carry different mode sets");
}

struct Norms {
  double difference = 0.0;
  double reference = 0.0;
};

// Exact P1 integrals of |v|^2 and |v'|^2 on [a, b] given end values.
double mass(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b, double h) {
  return h / 3.0 * (a.squaredNorm() + b.squaredNorm() + a.dot(b).real());
}

double stiffness(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b, double h) {
  return (b - a).squaredNorm() / h;
}

template <class Accumulate>
Norms layer_norms(const Field3D& field, const Field3D& limit, bool film, Accumulate&& acc) {
  check_compatible(field, limit);
  const std::vector<double> x3 = field.mesh.nodes();
  Norms n;
  for (std::size_t m = 0; m < field.modes.size(); ++m) {
    const auto& u = field.modes[m].u;
    const auto& l = limit.modes[m].u;
    const double k2 = field.modes[m].k.squaredNorm();
    for (std::size_t e = 0; e + 1 < x3.size(); ++e) {
      if (field.mesh.in_film(e) != film) continue;
      const double h = x3[e + 1] - x3[e];
      n.difference += acc(u[e] - l[e], u[e + 1] - l[e + 1], h, k2);
      n.reference += acc(l[e], l[e + 1], h, k2);
    }
  }
  return n;
}

H1Error relative(const Norms& n) {
  if (n.reference > 0.0) return {std::sqrt(n.difference / n.reference), false};
  return {std::sqrt(n.difference), n.difference > 0.0};
}

double integrate(const ScaledStrains& s, bool film, auto&& density) {
  double sum = 0.0;
  for (std::size_t m = 0; m < s.modes.size(); ++m)
    for (std::size_t q = 0; q < s.gauss_x3.size(); ++q)
      if (s.in_film(q) == film) sum += s.gauss_weight[q] * density(m, s.at(m, q));
  return std::sqrt(s.area * sum);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

H1Error h1_error_film(const Field3D& field, const Field3D& limit, const StackParameters&) {
  return relative(layer_norms(field, limit, true, [](const auto& a, const auto& b, double h, double k2) {
    return (1.0 + k2) * mass(a, b, h) + stiffness(a, b, h);
  }));
}

H1Error l2_error_bonding(const Field3D& field, const Field3D& limit, const StackParameters&) {
  return relative(layer_norms(field, limit, false,
                              [](const auto& a, const auto& b, double h, double) { return mass(a, b, h); }));
}

StrainBounds strain_bounds(const ScaledStrains& strains, const Field3D& field, const StackParameters& params,
                           double eps) {
  const Exponents ex = derive_exponents(params.alpha, params.beta);
  StrainBounds b;
  b.kappa_film = integrate(strains, true, [](std::size_t, const Eigen::Matrix3cd& k) { return k.squaredNorm(); });
  b.kappa_b33 = integrate(strains, false, [](std::size_t, const Eigen::Matrix3cd& k) { return std::norm(k(2, 2)); });
  b.e33_film = integrate(strains, true, [](std::size_t, const Eigen::Matrix3cd& k) { return std::norm(k(2, 2)); });
  b.ea3_film = integrate(strains, true, [](std::size_t, const Eigen::Matrix3cd& k) {
    return std::norm(k(0, 2)) + std::norm(k(1, 2));
  });
  b.eab_bl = integrate(strains, false, [](std::size_t, const Eigen::Matrix3cd& k) {
    return k.topLeftCorner<2, 2>().squaredNorm();
  });

  const std::vector<double> x3 = field.mesh.nodes();
  double d3 = 0.0;
  for (const auto& f : field.modes)
    for (std::size_t e = 0; e < field.mesh.interface_node(); ++e) {
      const double h = x3[e + 1] - x3[e];
      d3 += (f.u[e + 1].head<2>() - f.u[e].head<2>()).squaredNorm() / h;
    }
  b.d3ua_bl = std::pow(eps, ex.delta) * std::sqrt(params.cell_area() * d3);
  return b;
}

OptimalityResiduals optimality_residuals(const ScaledStrains& strains, const Field3D& field,
                                         const StackParameters& params, double) {
  if (strains.modes.size() != field.modes.size()) throw ParameterError("strains do not match field");
  const double lf = params.lambda_f, mf = params.mu_f;
  const Lame b = reference_bonding_moduli(params);
  OptimalityResiduals r;
  r.film_k33 = integrate(strains, true, [&](std::size_t m, const Eigen::Matrix3cd& k) {
    const Eigen::Matrix3cd& phi = field.modes[m].mode.phi_hat;
    const std::complex<double> target = (2.0 * mf * phi(2, 2) + lf * (phi(0, 0) + phi(1, 1))) / (lf + 2.0 * mf);
    return std::norm(k(2, 2) + lf / (lf + 2.0 * mf) * (k(0, 0) + k(1, 1)) - target);
  });
  r.film_k3a = integrate(strains, true, [](std::size_t, const Eigen::Matrix3cd& k) {
    return std::norm(k(0, 2)) + std::norm(k(1, 2));
  });
  r.bl_kaa = integrate(strains, false, [&](std::size_t, const Eigen::Matrix3cd& k) {
    return std::norm(k(0, 0) + k(1, 1) + b.lambda / (b.lambda + 2.0 * b.mu) * k(2, 2));
  });
  return r;
}

RateEstimate rate_estimate(const std::vector<double>& errors, const std::vector<double>& eps_values) {
  if (errors.size() != eps_values.size() || errors.size() < 3)
    throw ParameterError("rate estimate needs at least three (eps, error) pairs");
  std::vector<std::size_t> order(errors.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i : order)
    if (!(errors[i] > 0.0) || !(eps_values[i] > 0.0)) throw ParameterError("rate estimate needs positive entries");
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return eps_values[a] > eps_values[b]; });

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(errors.size());
  for (std::size_t i : order) {
    const double x = std::log(eps_values[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  RateEstimate out;
  const double denom = n * sxx - sx * sx;
  if (!(denom > 1e-12 * n * sxx)) throw ParameterError("rate estimate needs distinct eps values");
  out.slope = (n * sxy - sx * sy) / denom;
  // The first two points may be pre-asymptotic.
  for (std::size_t j = 2; j < order.size(); ++j)
    if (errors[order[j]] > errors[order[j - 1]]) out.low_confidence = true;
  return out;
}

std::vector<double> SweepReport::eps_values() const {
  std::vector<double> v;
  for (const auto& e : entries) v.push_back(e.eps);
  return v;
}

std::vector<double> SweepReport::errors_h1_film() const {
  std::vector<double> v;
  for (const auto& e : entries) v.push_back(e.error_h1_film.value);
  return v;
}

std::vector<double> default_eps_values() {
  std::vector<double> v;
  for (int j = 1; j <= 8; ++j) v.push_back(std::ldexp(1.0, -j));
  return v;
}

SweepReport run_sweep(const StackParameters& params, const LoadSpec& load, const std::vector<double>& eps_values,
                      const SweepOptions& options) {
  params.validate();
  SweepReport report;
  report.params = params;
  report.exponents = derive_exponents(params.alpha, params.beta);
  const Regime regime = report.exponents.regime;
  if (regime != Regime::MembraneInPlaneFoundation && regime != Regime::PlateTransverseFoundation)
    throw RegimeError("no limit model for regime " + std::string(to_string(regime)));
  for (double eps : eps_values)
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ParameterError("eps values must be positive");
  report.coefficients = limit_coefficients(params);
  const bool membrane = regime == Regime::MembraneInPlaneFoundation;
  report.limit_model = membrane ? "membrane" : "plate";
  if (report.exponents.warning) report.notes.push_back(*report.exponents.warning);
  if (!membrane)
    report.notes.push_back("plate in-plane zero mode is reported as zero; the periodic cell has no in-plane rotations");
  report.notes.push_back("transverse foundation stiffness carries 1/h_b from thickness integration");
  const std::vector<ReducedSolution> limit = membrane ? solve_membrane(params, load) : solve_plate(params, load);

  for (double eps : eps_values) {
    const auto start = std::chrono::steady_clock::now();
    SweepEntry entry;
    entry.eps = eps;
    entry.elements_per_layer = options.elements_per_layer.value_or(default_elements_per_layer(eps));
    const ThicknessMesh mesh =
        ThicknessMesh::uniform(params.h_b, params.h_f, entry.elements_per_layer, entry.elements_per_layer);
    SolveDiagnostics diag;
    const Field3D field = solve3d(params, eps, load, mesh, options.threads, &diag);
    const Field3D limit_field = reconstruct_limit_field(limit, params, mesh);
    const ScaledStrains strains = scaled_strains(field, params, eps);
    entry.error_h1_film = h1_error_film(field, limit_field, params);
    entry.error_l2_bonding = l2_error_bonding(field, limit_field, params);
    entry.bounds = strain_bounds(strains, field, params, eps);
    entry.residuals = optimality_residuals(strains, field, params, eps);
    entry.stationarity = stationarity_residual(field, params, eps, load);
    entry.relative_residual = diag.max_relative_residual;
    entry.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    report.entries.push_back(entry);
  }

  if (report.entries.size() >= 3) {
    const auto errors = report.errors_h1_film();
    if (std::all_of(errors.begin(), errors.end(), [](double e) { return e > 0.0; }))
      report.rate = rate_estimate(errors, report.eps_values());
  }
  return report;
}

std::string sweep_csv(const SweepReport& report) {
  std::string out =
      "eps,n,err_h1,err_l2_bonding,kappa_film,kappa_b33,e33_film,ea3_film,d3ua_bl,eab_bl,"
      "r_film_k33,r_film_k3a,r_bl_kaa,stationarity,ms\n";
  for (const auto& e : report.entries) {
    const double row[] = {e.error_h1_film.value, e.error_l2_bonding.value, e.bounds.kappa_film,
                          e.bounds.kappa_b33,    e.bounds.e33_film,       e.bounds.ea3_film,
                          e.bounds.d3ua_bl,      e.bounds.eab_bl,         e.residuals.film_k33,
                          e.residuals.film_k3a,  e.residuals.bl_kaa,      e.stationarity};
    out += format_double(e.eps) + "," + std::to_string(e.elements_per_layer);
    for (double v : row) out += "," + format_double(v);
    out += "," + format_double(e.runtime_ms) + "\n";
  }
  return out;
}

}  // namespace winkler
