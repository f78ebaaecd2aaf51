#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace winkler {

/// Isotropic Lamé pair.
struct Lame {
  double lambda = 0.0;
  double mu = 0.0;
};

/// Material and geometric description of the film / bonding-layer stack on the
/// fixed (rescaled) domain.
///
/// The bonding layer is described relative to the film through the ratios of
/// Young's modulus and Poisson ratio, E_b/E_f = rho_E eps^beta and
/// nu_b/nu_f = rho_nu. The film occupies (0, h_f), the bonding layer
/// (-h_b, 0), and the in-plane cell is the rectangle cell[0] x cell[1] with
/// periodic boundary conditions.
struct StackParameters {
  double lambda_f = 0.0;
  double mu_f = 0.0;
  double rho_E = 1.0;
  double rho_nu = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  double h_f = 1.0;
  double h_b = 1.0;
  double L = 1.0;
  std::array<double, 2> cell{1.0, 1.0};

  /// Throws ParameterError when an invariant is violated.
  void validate() const;

  [[nodiscard]] double cell_area() const { return cell[0] * cell[1]; }
};

enum class Regime {
  Slender,
  Persistent3D,
  Rigid,
  MembraneInPlaneFoundation,
  PlateTransverseFoundation,
  OutOfScope,
};

/// Stable snake_case label used in JSON output and golden files.
std::string_view to_string(Regime regime);

/// Exponent pair of the scaled energy together with its phase-diagram label.
struct Exponents {
  double gamma = 0.0;
  double delta = 0.0;
  Regime regime = Regime::OutOfScope;
  /// Set when the point lies on a strip whose membership the phase diagram
  /// leaves ambiguous (currently: plate points with delta <= gamma).
  std::optional<std::string> warning;
};

/// Tolerance used when deciding whether a coordinate sits exactly on a
/// regime boundary (gamma - delta = 0, delta = 0, ...).
inline constexpr double kBoundaryTolerance = 1e-12;

Regime classify_regime(double gamma, double delta);
std::optional<std::string> regime_warning(double gamma, double delta);

Exponents derive_exponents(double alpha, double beta);

/// Inverse of the affine map in derive_exponents.
std::array<double, 2> exponents_to_scalings(double gamma, double delta);

/// Closed-form coefficients of the two limit models.
struct LimitCoefficients {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double K_in = 0.0;  ///< in-plane (shear) foundation stiffness 2 mu_b / h_b
  double K_tr = 0.0;  ///< transverse foundation stiffness
  double ell_in = 0.0;
  double ell_tr = 0.0;
  /// Flexural rigidity h_f^3/12 (c1 + c3) of the Kirchhoff-Love film.
  double bending = 0.0;
};

LimitCoefficients limit_coefficients(const StackParameters& params);

/// Scaled quantities of the nondimensional (y = x'/L) forms of the limit
/// equations, for reporting.
struct NondimensionalCoefficients {
  std::array<double, 3> c_hat{};   ///< c_i / (2 mu_f h_f)
  double pressure_factor = 0.0;    ///< p_hat = pressure_factor * p
  double membrane_weight = 0.0;    ///< L^2 / ell_in^2
  double plate_weight = 0.0;       ///< L^2 / ell_tr^2
};

NondimensionalCoefficients nondimensional_coefficients(const StackParameters& params);

/// E, nu -> (lambda, mu). Requires E > 0 and -1 < nu < 1/2.
Lame lame_from_engineering(double E, double nu);

/// (lambda, mu) -> (E, nu) for mu > 0, lambda >= 0.
std::array<double, 2> engineering_from_lame(const Lame& lame);

/// Bonding-layer moduli at eps = 1, the values that enter the scaled energy
/// (the eps^beta factor is carried by the exponents gamma and delta there).
Lame reference_bonding_moduli(const StackParameters& params);

/// Physical bonding-layer moduli at thickness parameter eps, i.e. the
/// reference moduli multiplied by eps^beta.
Lame bonding_moduli(const StackParameters& params, double eps);

}  // namespace winkler
