#include "winkler/load.hpp"

#include <cmath>
#include <numbers>

#include "winkler/errors.hpp"

namespace winkler {

void Mode::validate() const {
  if (!std::isfinite(p_hat.real()) || !std::isfinite(p_hat.imag()) || !phi_hat.allFinite())
    throw ParameterError("load amplitudes must be finite");
  const double scale = std::max(1.0, phi_hat.cwiseAbs().maxCoeff());
  if ((phi_hat - phi_hat.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale)
    throw ParameterError("eigenstrain amplitude must be symmetric");
}

Eigen::Vector2d wave_vector(const Mode& mode, const StackParameters& params) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return {two_pi * mode.n[0] / params.cell[0], two_pi * mode.n[1] / params.cell[1]};
}

}  // namespace winkler
