#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Core>

#include "winkler/core.hpp"

namespace winkler {

/// One in-plane Fourier mode of the load, exp(i k.x') with
/// k = 2 pi (n1 / l1, n2 / l2).
struct Mode {
  std::array<int, 2> n{0, 0};
  std::complex<double> p_hat{0.0, 0.0};  ///< pressure on the top face
  Eigen::Matrix3cd phi_hat = Eigen::Matrix3cd::Zero();  ///< film eigenstrain, constant in x3

  /// Throws ParameterError if phi_hat is not symmetric or not finite.
  void validate() const;
};

using LoadSpec = std::vector<Mode>;

Eigen::Vector2d wave_vector(const Mode& mode, const StackParameters& params);

}  // namespace winkler
