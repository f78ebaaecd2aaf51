#include "winkler/reduced.hpp"

#include <Eigen/Dense>

#include "winkler/errors.hpp"

namespace winkler {

namespace {

void require_regime(const StackParameters& params, Regime wanted) {
  const Exponents ex = derive_exponents(params.alpha, params.beta);
  if (ex.regime != wanted)
    throw RegimeError("limit model '" + std::string(to_string(wanted)) + "' does not apply: (alpha, beta) = (" +
                      std::to_string(params.alpha) + ", " + std::to_string(params.beta) + ") is " +
                      std::string(to_string(ex.regime)));
}

// r_b = -i [ (c1 phi_aa + c2 phi_33) k_b + c3 phi_ab k_a ] with unit coefficients c.
Eigen::Vector2cd eigenstrain_rhs(const std::array<double, 3>& c, const Eigen::Matrix3cd& phi_bar,
                                 const Eigen::Vector2d& k) {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> volumetric = c[0] * (phi_bar(0, 0) + phi_bar(1, 1)) + c[1] * phi_bar(2, 2);
  Eigen::Vector2cd r;
  for (int b = 0; b < 2; ++b) r[b] = -i * (volumetric * k[b] + c[2] * (phi_bar(0, b) * k[0] + phi_bar(1, b) * k[1]));
  return r;
}

Eigen::Matrix2d shear_form(const Eigen::Vector2d& k) {
  return 0.5 * (k.squaredNorm() * Eigen::Matrix2d::Identity() + k * k.transpose());
}

}  // namespace

std::string_view to_string(ReducedModel model) { return model == ReducedModel::Membrane ? "membrane" : "plate"; }

Eigen::Matrix2d membrane_stiffness(const LimitCoefficients& coeffs, const StackParameters& params,
                                   const Eigen::Vector2d& k) {
  return params.h_f * (coeffs.c1 * k * k.transpose() + coeffs.c3 * shear_form(k));
}

Eigen::Vector2cd membrane_load(const LimitCoefficients& coeffs, const StackParameters& params, const Mode& mode,
                               const Eigen::Vector2d& k) {
  return eigenstrain_rhs({coeffs.c1, coeffs.c2, coeffs.c3}, params.h_f * mode.phi_hat, k);
}

ReducedSolution solve_membrane_mode(const LimitCoefficients& coeffs, const StackParameters& params,
                                    const Mode& mode) {
  require_regime(params, Regime::MembraneInPlaneFoundation);
  mode.validate();
  ReducedSolution sol{ReducedModel::Membrane, mode, wave_vector(mode, params), Eigen::Vector3cd::Zero()};
  const Eigen::Matrix2d m = membrane_stiffness(coeffs, params, sol.k) + coeffs.K_in * Eigen::Matrix2d::Identity();
  sol.zeta.head<2>() = m.cast<std::complex<double>>().llt().solve(membrane_load(coeffs, params, mode, sol.k));
  return sol;
}

ReducedSolution solve_plate_mode(const LimitCoefficients& coeffs, const StackParameters& params, const Mode& mode) {
  require_regime(params, Regime::PlateTransverseFoundation);
  mode.validate();
  ReducedSolution sol{ReducedModel::Plate, mode, wave_vector(mode, params), Eigen::Vector3cd::Zero()};
  const double k2 = sol.k.squaredNorm();
  sol.zeta[2] = mode.p_hat / (coeffs.bending * k2 * k2 + coeffs.K_tr);
  // In-plane rigid translations live only on the zero mode; pick the zero representative.
  if (sol.k.isZero()) return sol;
  const Eigen::Matrix2d m = membrane_stiffness(coeffs, params, sol.k);
  sol.zeta.head<2>() = m.cast<std::complex<double>>().llt().solve(membrane_load(coeffs, params, mode, sol.k));
  return sol;
}

std::vector<ReducedSolution> solve_membrane(const StackParameters& params, const LoadSpec& load) {
  const LimitCoefficients c = limit_coefficients(params);
  std::vector<ReducedSolution> out;
  for (const auto& mode : load) out.push_back(solve_membrane_mode(c, params, mode));
  return out;
}

std::vector<ReducedSolution> solve_plate(const StackParameters& params, const LoadSpec& load) {
  const LimitCoefficients c = limit_coefficients(params);
  std::vector<ReducedSolution> out;
  for (const auto& mode : load) out.push_back(solve_plate_mode(c, params, mode));
  return out;
}

Eigen::Vector2cd solve_membrane_nondimensional(const StackParameters& params, const Mode& mode) {
  require_regime(params, Regime::MembraneInPlaneFoundation);
  mode.validate();
  const NondimensionalCoefficients nd = nondimensional_coefficients(params);
  const Eigen::Vector2d ky = params.L * wave_vector(mode, params);
  const double ratio = params.lambda_f / (params.lambda_f + 2.0 * params.mu_f);
  const Eigen::Matrix2d m = ratio * ky * ky.transpose() + shear_form(ky) +
                            nd.membrane_weight * Eigen::Matrix2d::Identity();
  return m.cast<std::complex<double>>().llt().solve(eigenstrain_rhs(nd.c_hat, params.h_f * mode.phi_hat, ky));
}

Field3D reconstruct_limit_field(const std::vector<ReducedSolution>& solution, const StackParameters& params,
                                const ThicknessMesh& mesh) {
  mesh.validate();
  Field3D field;
  field.mesh = mesh;
  const std::vector<double> x3 = mesh.nodes();
  const std::complex<double> i(0.0, 1.0);
  for (const auto& s : solution) {
    ModeField f{s.mode, s.k, std::vector<Eigen::Vector3cd>(x3.size(), Eigen::Vector3cd::Zero())};
    const Eigen::Vector2cd ik = i * s.k.cast<std::complex<double>>();
    // In-plane displacement of the film at x3 = 0.
    Eigen::Vector2cd interface = s.zeta.head<2>();
    if (s.model == ReducedModel::Plate) interface += 0.5 * params.h_f * ik * s.zeta[2];
    for (std::size_t n = 0; n < x3.size(); ++n) {
      const double z = x3[n];
      Eigen::Vector3cd& u = f.u[n];
      if (z >= 0.0) {
        u.head<2>() = s.zeta.head<2>();
        if (s.model == ReducedModel::Plate) {
          u.head<2>() -= (z - 0.5 * params.h_f) * ik * s.zeta[2];
          u[2] = s.zeta[2];
        }
      } else {
        const double ramp = (z + params.h_b) / params.h_b;
        u.head<2>() = ramp * interface;
        u[2] = ramp * s.zeta[2];
      }
    }
    field.modes.push_back(std::move(f));
  }
  return field;
}

}  // namespace winkler
