#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "winkler/core.hpp"
#include "winkler/load.hpp"
#include "winkler/solver3d.hpp"

namespace winkler {

struct H1Error {
  double value = 0.0;
  /// Set when the limit has zero norm and value is the absolute error.
  bool absolute = false;
};

/// Relative H1(film) distance between two fields on the same mesh and mode
/// set, sqrt(sum_k int_0^hf |d|^2 + |d3 d|^2 + |k|^2 |d|^2) over the same
/// norm of the limit.
H1Error h1_error_film(const Field3D& field, const Field3D& limit, const StackParameters& params);

/// Relative L2(bonding layer) distance, absolute when the limit vanishes there.
H1Error l2_error_bonding(const Field3D& field, const Field3D& limit, const StackParameters& params);

/// Quantities that stay bounded along an eps sweep.
struct StrainBounds {
  double kappa_film = 0.0;   ///< |kappa|_{L2(film)}
  double kappa_b33 = 0.0;    ///< |kappa^b_33|_{L2(bonding)}
  double e33_film = 0.0;     ///< |e33|_{L2(film)} / eps^2
  double ea3_film = 0.0;     ///< |e_a3|_{L2(film)} / eps
  double d3ua_bl = 0.0;      ///< eps^delta |d3 u_a|_{L2(bonding)}
  double eab_bl = 0.0;       ///< eps^gamma |e_ab|_{L2(bonding)}
};

StrainBounds strain_bounds(const ScaledStrains& strains, const Field3D& field, const StackParameters& params,
                           double eps);

/// L2 defects of the algebraic relations satisfied by the limit scaled strains.
struct OptimalityResiduals {
  double film_k33 = 0.0;  ///< kappa_33 + l/(l+2m) kappa_aa - (2m phi_33 + l phi_aa)/(l+2m), film
  double film_k3a = 0.0;  ///< kappa_a3, film
  double bl_kaa = 0.0;    ///< kappa_aa + l_b/(l_b+2m_b) kappa_33, bonding layer
};

OptimalityResiduals optimality_residuals(const ScaledStrains& strains, const Field3D& field,
                                         const StackParameters& params, double eps);

struct RateEstimate {
  double slope = 0.0;
  bool low_confidence = false;
};

/// Least-squares slope of log(error) against log(eps). Needs at least three
/// positive points; flags a non-monotone tail.
RateEstimate rate_estimate(const std::vector<double>& errors, const std::vector<double>& eps_values);

struct SweepEntry {
  double eps = 0.0;
  std::size_t elements_per_layer = 0;
  H1Error error_h1_film;
  H1Error error_l2_bonding;
  StrainBounds bounds;
  OptimalityResiduals residuals;
  double stationarity = 0.0;
  double relative_residual = 0.0;
  double runtime_ms = 0.0;
};

struct SweepReport {
  StackParameters params;
  Exponents exponents;
  LimitCoefficients coefficients;
  std::string limit_model;
  std::vector<SweepEntry> entries;
  std::optional<RateEstimate> rate;
  std::vector<std::string> notes;

  [[nodiscard]] std::vector<double> eps_values() const;
  [[nodiscard]] std::vector<double> errors_h1_film() const;
};

struct SweepOptions {
  /// Fixed elements per layer; the eps-coupled default when empty.
  std::optional<std::size_t> elements_per_layer;
  unsigned threads = 1;
};

/// Default sweep 2^-1 ... 2^-8.
std::vector<double> default_eps_values();

/// Runs the 3D solver along eps_values against the limit model matching the
/// regime. Throws RegimeError before any solve when no limit model applies.
SweepReport run_sweep(const StackParameters& params, const LoadSpec& load, const std::vector<double>& eps_values,
                      const SweepOptions& options = {});

/// One row per eps; header documented in the README.
std::string sweep_csv(const SweepReport& report);

}  // namespace winkler
