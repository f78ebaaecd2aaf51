#pragma once

// Test-only reference computations, kept apart from the library code paths.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "winkler/core.hpp"
#include "winkler/load.hpp"
#include "winkler/solver3d.hpp"

namespace oracle {

using cd = std::complex<double>;

/// Galerkin discretization of the 2D limit equations on the periodic cell,
/// with the trigonometric basis exp(i k_m . x), m in [-M, M]^2, and the
/// bilinear forms evaluated by trapezoidal quadrature on a grid x grid
/// lattice (exact for the trigonometric products involved). Returns the
/// amplitudes of the target mode.
struct LimitDiscretization {
  const winkler::StackParameters& params;
  int M = 2;
  int grid = 16;

  struct Basis {
    std::array<int, 2> n;
    Eigen::Vector2d k;
  };

  [[nodiscard]] std::vector<Basis> basis() const {
    std::vector<Basis> out;
    for (int a = -M; a <= M; ++a)
      for (int b = -M; b <= M; ++b) {
        const double k1 = 2.0 * std::numbers::pi * a / params.cell[0];
        const double k2 = 2.0 * std::numbers::pi * b / params.cell[1];
        out.push_back({{a, b}, {k1, k2}});
      }
    return out;
  }

  [[nodiscard]] std::vector<Eigen::Vector2d> points() const {
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j) pts.push_back({params.cell[0] * i / grid, params.cell[1] * j / grid});
    return pts;
  }

  /// Membrane (with_foundation) or plate in-plane system; returns zeta_1, zeta_2.
  [[nodiscard]] Eigen::Vector2cd in_plane(const winkler::Mode& load, bool with_foundation) const {
    const double lf = params.lambda_f, mf = params.mu_f, hf = params.h_f;
    const double c1 = 2 * lf * mf / (lf + 2 * mf), c2 = lf * lf / (lf + 2 * mf), c3 = 2 * mf;
    const winkler::Lame b = winkler::reference_bonding_moduli(params);
    const double K = with_foundation ? 2 * b.mu / params.h_b : 0.0;
    std::vector<Basis> B = basis();
    if (!with_foundation) std::erase_if(B, [](const Basis& x) { return x.n[0] == 0 && x.n[1] == 0; });
    const auto pts = points();
    const double dA = params.cell[0] * params.cell[1] / pts.size();
    const std::size_t N = 2 * B.size();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(N);
    const Eigen::Vector2d kl = winkler::wave_vector(load, params);
    const cd I(0, 1);
    const Eigen::Matrix3cd phibar = hf * load.phi_hat;

    // Strain of the dof (basis m, component c) at a point: e_ab = (i k_a d_bc + i k_b d_ac)/2 * w.
    auto strain = [&](const Basis& bm, int c, const Eigen::Vector2d& x) {
      const cd w = std::exp(I * bm.k.dot(x));
      Eigen::Matrix2cd e = Eigen::Matrix2cd::Zero();
      for (int a = 0; a < 2; ++a)
        for (int bb = 0; bb < 2; ++bb)
          e(a, bb) = 0.5 * ((bb == c ? I * bm.k[a] : 0.0) + (a == c ? I * bm.k[bb] : 0.0)) * w;
      return e;
    };
    for (const auto& x : pts) {
      const cd wl = std::exp(I * kl.dot(x));
      std::vector<Eigen::Matrix2cd> E(N);
      std::vector<cd> U(N);
      for (std::size_t m = 0; m < B.size(); ++m)
        for (int c = 0; c < 2; ++c) {
          E[2 * m + c] = strain(B[m], c, x);
          U[2 * m + c] = std::exp(I * B[m].k.dot(x));
        }
      for (std::size_t r = 0; r < N; ++r) {
        const Eigen::Matrix2cd Er = E[r].conjugate();
        for (std::size_t s = 0; s < N; ++s) {
          cd v = hf * c1 * E[s].trace() * Er.trace() + hf * c3 * (E[s].cwiseProduct(Er)).sum();
          if (r % 2 == s % 2) v += K * U[s] * std::conj(U[r]);
          A(r, s) += dA * v;
        }
        const cd vol = (c1 * (phibar(0, 0) + phibar(1, 1)) + c2 * phibar(2, 2)) * wl;
        cd work = vol * Er.trace();
        for (int a = 0; a < 2; ++a)
          for (int bb = 0; bb < 2; ++bb) work += c3 * phibar(a, bb) * wl * Er(a, bb);
        rhs[r] += dA * work;
      }
    }
    const Eigen::VectorXcd sol = A.ldlt().solve(rhs);
    for (std::size_t m = 0; m < B.size(); ++m)
      if (B[m].n == load.n) return {sol[2 * m], sol[2 * m + 1]};
    return Eigen::Vector2cd::Zero();
  }

  /// Plate flexural system; returns zeta_3 of the target mode.
  [[nodiscard]] cd flexural(const winkler::Mode& load) const {
    const double lf = params.lambda_f, mf = params.mu_f, hf = params.h_f;
    const double c1 = 2 * lf * mf / (lf + 2 * mf), c3 = 2 * mf;
    const winkler::Lame b = winkler::reference_bonding_moduli(params);
    const double Ktr = 4 * b.mu * (b.lambda + b.mu) / ((b.lambda + 2 * b.mu) * params.h_b);
    // Bending moments integrate (x3 - hf/2)^2 over the film thickness.
    double second_moment = 0.0;
    {
      // 3-point Gauss on (0, hf).
      const double g[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)}, w[3] = {5.0 / 9, 8.0 / 9, 5.0 / 9};
      for (int q = 0; q < 3; ++q) {
        const double z = 0.5 * hf * (1 + g[q]);
        second_moment += 0.5 * hf * w[q] * (z - 0.5 * hf) * (z - 0.5 * hf);
      }
    }
    const std::vector<Basis> B = basis();
    const auto pts = points();
    const double dA = params.cell[0] * params.cell[1] / pts.size();
    const std::size_t N = B.size();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(N);
    const Eigen::Vector2d kl = winkler::wave_vector(load, params);
    const cd I(0, 1);
    for (const auto& x : pts) {
      std::vector<Eigen::Matrix2cd> H(N);
      std::vector<cd> W(N);
      for (std::size_t m = 0; m < N; ++m) {
        W[m] = std::exp(I * B[m].k.dot(x));
        H[m] = -(B[m].k * B[m].k.transpose()).cast<cd>() * W[m];  // Hessian
      }
      for (std::size_t r = 0; r < N; ++r) {
        const Eigen::Matrix2cd Hr = H[r].conjugate();
        for (std::size_t s = 0; s < N; ++s)
          A(r, s) += dA * (second_moment * (c1 * H[s].trace() * Hr.trace() + c3 * H[s].cwiseProduct(Hr).sum()) +
                           Ktr * W[s] * std::conj(W[r]));
        rhs[r] += dA * load.p_hat * std::exp(I * kl.dot(x)) * std::conj(W[r]);
      }
    }
    const Eigen::VectorXcd sol = A.ldlt().solve(rhs);
    for (std::size_t m = 0; m < N; ++m)
      if (B[m].n == load.n) return sol[m];
    return 0.0;
  }
};

/// Dense LL^H solve of an assembled mode system in extended precision,
/// independent of the band factorization.
inline std::vector<winkler::ExtendedComplex> dense_solve(const winkler::ModeSystem& sys) {
  using C = winkler::ExtendedComplex;
  using Mat = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<C, Eigen::Dynamic, 1>;
  const Eigen::Index n = static_cast<Eigen::Index>(sys.matrix.size());
  Mat A = Mat::Zero(n, n);
  Vec b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    b[i] = sys.rhs[i];
    for (Eigen::Index j = 0; j < n; ++j)
      if (sys.matrix.in_band(i, j)) A(i, j) = sys.matrix(i, j);
  }
  const Vec x = A.llt().solve(b);
  return {x.data(), x.data() + n};
}

}  // namespace oracle
