#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "winkler/core.hpp"
#include "winkler/hermitian_band.hpp"
#include "winkler/load.hpp"
#include "winkler/mesh.hpp"

namespace winkler {

/// Working precision of assembly and factorization. The eps^-4 / h^2 spread
/// of the stiffness on fine meshes leaves too few digits in double.
using Extended = long double;
using ExtendedComplex = std::complex<Extended>;

/// Stationarity system of one Fourier mode. Unknowns are the nodal values
/// (u1, u2, u3) of nodes 1 .. N-1; node 0 (x3 = -h_b) is clamped.
struct ModeSystem {
  Mode mode;
  Eigen::Vector2d k = Eigen::Vector2d::Zero();
  HermitianBand<Extended> matrix;
  std::vector<ExtendedComplex> rhs;
  /// Stored transverse unknown is transverse_scale * u3.
  double transverse_scale = 1.0;

  [[nodiscard]] Eigen::MatrixXcd dense_matrix() const;
  [[nodiscard]] Eigen::VectorXcd rhs_vector() const;
};

/// Scale applied to the stored transverse displacement: eps^(1 - delta)
/// when 0 < delta < 1, else 1.
double transverse_scale(const StackParameters& params, double eps);

ModeSystem assemble_mode_system(const StackParameters& params, double eps, const Mode& mode,
                                const ThicknessMesh& mesh);

struct ModeSolution {
  std::vector<ExtendedComplex> x;
  double relative_residual = 0.0;  ///< |Mx - b|_inf / |b|_inf, 0 when b = 0
  double backward_error = 0.0;     ///< |Mx - b|_inf / (|M|_inf |x|_inf + |b|_inf)
  int refinement_steps = 0;
};

/// Band Cholesky solve with iterative refinement. The system is copied
/// before factorization.
ModeSolution solve_mode(const ModeSystem& system);

struct ModeField {
  Mode mode;
  Eigen::Vector2d k = Eigen::Vector2d::Zero();
  std::vector<Eigen::Vector3cd> u;  ///< one entry per mesh node
};

/// Per-mode nodal displacements on a thickness mesh. Entry order follows the
/// load list.
struct Field3D {
  ThicknessMesh mesh;
  double transverse_scale = 1.0;
  std::vector<ModeField> modes;

  /// Zero displacement carrying the given modes.
  static Field3D zero(const ThicknessMesh& mesh, const StackParameters& params, const LoadSpec& load,
                      double transverse_scale = 1.0);
};

struct SolveDiagnostics {
  double max_relative_residual = 0.0;
  double max_backward_error = 0.0;
};

/// Solves every mode independently on up to `threads` worker threads.
/// Errors are rethrown with the index of the failing mode.
Field3D solve3d(const StackParameters& params, double eps, const LoadSpec& load, const ThicknessMesh& mesh,
                unsigned threads = 1, SolveDiagnostics* diagnostics = nullptr);

/// Scaled strains at the two Gauss points of every element.
struct ModeStrains {
  std::vector<std::array<Eigen::Matrix3cd, 2>> values;  ///< per element
};

struct ScaledStrains {
  std::vector<double> gauss_x3;       ///< 2 per element
  std::vector<double> gauss_weight;   ///< 2 per element
  std::size_t film_begin = 0;         ///< first film Gauss point
  double area = 1.0;
  std::vector<ModeStrains> modes;

  [[nodiscard]] bool in_film(std::size_t gauss_index) const { return gauss_index >= film_begin; }
  [[nodiscard]] const Eigen::Matrix3cd& at(std::size_t mode, std::size_t gauss_index) const {
    return modes[mode].values[gauss_index / 2][gauss_index % 2];
  }
};

ScaledStrains scaled_strains(const Field3D& field, const StackParameters& params, double eps);

/// Scaled energy including the constant eigenstrain energy. Load modes
/// missing from the field are treated as zero displacement; field modes
/// absent from the load carry no load.
double energy(const Field3D& field, const StackParameters& params, double eps, const LoadSpec& load);

/// Constant eigenstrain energy.
double residual_energy(const StackParameters& params, const LoadSpec& load);

/// Largest |E'(u)(v)| over unit nodal basis vectors v, divided by
/// |M|_inf |u|_inf + |b|_inf of the corresponding mode.
double stationarity_residual(const Field3D& field, const StackParameters& params, double eps, const LoadSpec& load);

struct PoincareCheck {
  double l2_norm = 0.0;      ///< |u|_{L2(Omega)}
  double bound = 0.0;        ///< (h_f + h_b)(|d3 u|_{L2(film)} + |d3 u|_{L2(bonding)})
  [[nodiscard]] bool holds() const { return l2_norm <= bound; }
};

PoincareCheck poincare_check(const Field3D& field, const StackParameters& params);

}  // namespace winkler
