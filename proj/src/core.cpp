#include "winkler/core.hpp"

#include <cmath>
#include <string>

#include "winkler/errors.hpp"

namespace winkler {

namespace {

bool near(double a, double b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= kBoundaryTolerance * scale;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace

void StackParameters::validate() const {
  const double values[] = {lambda_f, mu_f, rho_E, rho_nu, alpha, beta, h_f, h_b, L, cell[0], cell[1]};
  for (double v : values) require(std::isfinite(v), "stack parameters must be finite");
  require(mu_f > 0.0, "mu_f must be positive");
  require(lambda_f >= 0.0, "lambda_f must be non-negative");
  require(h_f > 0.0 && h_b > 0.0, "layer thicknesses must be positive");
  require(cell[0] > 0.0 && cell[1] > 0.0, "cell periods must be positive");
  require(L > 0.0, "diameter L must be positive");
  require(rho_E > 0.0, "rho_E must be positive");
  const Lame bonding = reference_bonding_moduli(*this);
  require(bonding.mu > 0.0, "bonding-layer shear modulus must be positive");
  require(bonding.lambda >= 0.0, "bonding-layer lambda must be non-negative");
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Slender: return "slender";
    case Regime::Persistent3D: return "persistent_3d";
    case Regime::Rigid: return "rigid";
    case Regime::MembraneInPlaneFoundation: return "membrane_in_plane_foundation";
    case Regime::PlateTransverseFoundation: return "plate_transverse_foundation";
    case Regime::OutOfScope: return "out_of_scope";
  }
  return "out_of_scope";
}

// Boundary membership: the delta = 0 half-line needs gamma > 0, the plate band
// is closed at delta = 1 and includes the gamma = delta line, every other
// point of gamma = delta is persistent 3D.
Regime classify_regime(double gamma, double delta) {
  const bool on_diagonal = near(gamma, delta);
  if (!on_diagonal && gamma < delta) return Regime::Slender;
  const bool delta_zero = near(delta, 0.0);
  const bool gamma_positive = gamma > 0.0 && !near(gamma, 0.0);
  if (!delta_zero && delta < 0.0) return on_diagonal ? Regime::Persistent3D : Regime::Rigid;
  if (delta_zero) return gamma_positive ? Regime::MembraneInPlaneFoundation : Regime::Persistent3D;
  const bool delta_le_one = delta < 1.0 || near(delta, 1.0);
  if (delta_le_one && gamma_positive) return Regime::PlateTransverseFoundation;
  if (on_diagonal) return Regime::Persistent3D;
  return Regime::OutOfScope;
}

std::optional<std::string> regime_warning(double gamma, double delta) {
  if (classify_regime(gamma, delta) != Regime::PlateTransverseFoundation) return std::nullopt;
  std::string msg = "plate regime assigned from 0 < delta <= 1, gamma > 0; the phase-diagram band also asks for delta > gamma";
  if (near(gamma, delta)) msg += "; point lies on the gamma = delta locus (bonding layer of order-one thickness)";
  if (gamma < 1.0 && !near(gamma, 1.0)) msg += "; gamma < 1: transverse shear of the bonding layer is not negligible";
  return msg;
}

Exponents derive_exponents(double alpha, double beta) {
  Exponents out;
  out.gamma = 0.5 * (alpha + beta);
  out.delta = 0.5 * (beta - alpha) - 1.0;
  out.regime = classify_regime(out.gamma, out.delta);
  out.warning = regime_warning(out.gamma, out.delta);
  return out;
}

std::array<double, 2> exponents_to_scalings(double gamma, double delta) {
  return {gamma - delta - 1.0, gamma + delta + 1.0};
}

LimitCoefficients limit_coefficients(const StackParameters& params) {
  params.validate();
  const double lf = params.lambda_f;
  const double mf = params.mu_f;
  const Lame b = reference_bonding_moduli(params);

  LimitCoefficients c;
  c.c1 = 2.0 * lf * mf / (lf + 2.0 * mf);
  c.c2 = lf * lf / (lf + 2.0 * mf);
  c.c3 = 2.0 * mf;
  c.K_in = 2.0 * b.mu / params.h_b;
  c.K_tr = 4.0 * b.mu * (b.lambda + b.mu) / ((b.lambda + 2.0 * b.mu) * params.h_b);
  c.ell_in = std::sqrt(mf / b.mu * params.h_f * params.h_b);
  c.ell_tr = std::sqrt(mf * (b.lambda + 2.0 * b.mu) * params.h_f * params.h_b /
                       (12.0 * b.mu * (b.lambda + b.mu)));
  c.bending = std::pow(params.h_f, 3) / 12.0 * (c.c1 + c.c3);
  return c;
}

NondimensionalCoefficients nondimensional_coefficients(const StackParameters& params) {
  const LimitCoefficients c = limit_coefficients(params);
  const double membrane = 2.0 * params.mu_f * params.h_f;
  NondimensionalCoefficients out;
  out.c_hat = {c.c1 / membrane, c.c2 / membrane, c.c3 / membrane};
  out.pressure_factor = 3.0 / (params.mu_f * params.h_f);
  out.membrane_weight = params.L * params.L / (c.ell_in * c.ell_in);
  out.plate_weight = params.L * params.L / (c.ell_tr * c.ell_tr);
  return out;
}

Lame lame_from_engineering(double E, double nu) {
  if (!(E > 0.0) || !std::isfinite(E)) throw ParameterError("Young's modulus must be positive");
  if (!(nu > -1.0 && nu < 0.5)) throw ParameterError("Poisson ratio must lie in (-1, 1/2)");
  return {E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), E / (2.0 * (1.0 + nu))};
}

std::array<double, 2> engineering_from_lame(const Lame& lame) {
  if (!(lame.mu > 0.0) || lame.lambda < 0.0) throw ParameterError("Lamé pair must satisfy mu > 0, lambda >= 0");
  const double E = lame.mu * (3.0 * lame.lambda + 2.0 * lame.mu) / (lame.lambda + lame.mu);
  const double nu = lame.lambda / (2.0 * (lame.lambda + lame.mu));
  return {E, nu};
}

Lame reference_bonding_moduli(const StackParameters& params) {
  const auto [E_f, nu_f] = engineering_from_lame({params.lambda_f, params.mu_f});
  const double nu_b = params.rho_nu * nu_f;
  if (!(nu_b > -1.0 && nu_b < 0.5))
    throw ParameterError("bonding-layer Poisson ratio rho_nu * nu_f leaves (-1, 1/2)");
  return lame_from_engineering(params.rho_E * E_f, nu_b);
}

Lame bonding_moduli(const StackParameters& params, double eps) {
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  const Lame ref = reference_bonding_moduli(params);
  const double factor = std::pow(eps, params.beta);
  return {ref.lambda * factor, ref.mu * factor};
}

}  // namespace winkler
