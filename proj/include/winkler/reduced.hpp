#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "winkler/core.hpp"
#include "winkler/load.hpp"
#include "winkler/mesh.hpp"
#include "winkler/solver3d.hpp"

namespace winkler {

enum class ReducedModel { Membrane, Plate };

std::string_view to_string(ReducedModel model);

/// Mid-surface amplitudes (zeta_1, zeta_2, zeta_3) of one mode. For the
/// membrane zeta_3 is identically zero.
struct ReducedSolution {
  ReducedModel model = ReducedModel::Membrane;
  Mode mode;
  Eigen::Vector2d k = Eigen::Vector2d::Zero();
  Eigen::Vector3cd zeta = Eigen::Vector3cd::Zero();
};

/// Film membrane stiffness h_f c1 k k^T + mu_f h_f (|k|^2 I + k k^T), without
/// foundation.
Eigen::Matrix2d membrane_stiffness(const LimitCoefficients& coeffs, const StackParameters& params,
                                   const Eigen::Vector2d& k);

/// Right-hand side of the in-plane equations, driven by the thickness
/// averaged eigenstrain h_f phi_hat.
Eigen::Vector2cd membrane_load(const LimitCoefficients& coeffs, const StackParameters& params, const Mode& mode,
                               const Eigen::Vector2d& k);

/// Throws RegimeError unless (alpha, beta) lies on the membrane half-line.
ReducedSolution solve_membrane_mode(const LimitCoefficients& coeffs, const StackParameters& params,
                                    const Mode& mode);

/// Throws RegimeError unless (alpha, beta) lies in the plate region.
ReducedSolution solve_plate_mode(const LimitCoefficients& coeffs, const StackParameters& params, const Mode& mode);

std::vector<ReducedSolution> solve_membrane(const StackParameters& params, const LoadSpec& load);
std::vector<ReducedSolution> solve_plate(const StackParameters& params, const LoadSpec& load);

/// Membrane solve in the coordinates y = x'/L, with coefficients
/// c_i / (2 mu_f h_f) and foundation weight L^2 / ell_in^2. The returned
/// amplitudes are in units of L: the dimensional solution is L times them.
Eigen::Vector2cd solve_membrane_nondimensional(const StackParameters& params, const Mode& mode);

/// Three-dimensional limit displacement on the thickness mesh.
Field3D reconstruct_limit_field(const std::vector<ReducedSolution>& solution, const StackParameters& params,
                                const ThicknessMesh& mesh);

}  // namespace winkler
