#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "winkler/errors.hpp"
#include "winkler/solver3d.hpp"

using namespace winkler;
using cd = std::complex<double>;

namespace {

StackParameters stack(double alpha, double beta) {
  StackParameters p;
  p.lambda_f = 1.3;
  p.mu_f = 0.8;
  p.rho_E = 0.7;
  p.rho_nu = 0.9;
  p.alpha = alpha;
  p.beta = beta;
  p.h_f = 0.9;
  p.h_b = 1.2;
  p.cell = {1.0, 1.5};
  return p;
}

Mode mode(int n1, int n2, cd p, cd phi11 = 0.0, cd phi33 = 0.0) {
  Mode m;
  m.n = {n1, n2};
  m.p_hat = p;
  m.phi_hat(0, 0) = phi11;
  m.phi_hat(2, 2) = phi33;
  m.phi_hat(0, 1) = m.phi_hat(1, 0) = 0.5 * phi11;
  return m;
}

void perturb(Field3D& f, std::mt19937_64& rng, double size) {
  std::normal_distribution<double> g(0.0, size);
  for (auto& m : f.modes)
    for (std::size_t i = 1; i < m.u.size(); ++i)
      for (int c = 0; c < 3; ++c) m.u[i][c] += cd(g(rng), g(rng));
}

}  // namespace

TEST_CASE("mesh validation") {
  CHECK_THROWS_AS(ThicknessMesh::uniform(1.0, 1.0, 1, 4).validate(), ParameterError);
  ThicknessMesh m = ThicknessMesh::uniform(1.0, 2.0, 3, 4);
  CHECK(m.num_nodes() == 8);
  CHECK(m.node(0) == -1.0);
  CHECK(m.node(3) == 0.0);
  CHECK(m.node(7) == 2.0);
  m.nodes_f[1] = m.nodes_f[2];
  CHECK_THROWS_AS(m.validate(), ParameterError);
  CHECK(default_elements_per_layer(0.5) == 64);
  CHECK(default_elements_per_layer(1.0 / 32) == 256);
  CHECK(default_elements_per_layer(1.0 / 1024) == 1024);
}

TEST_CASE("assembly: zero load gives zero rhs and zero solution") {
  const StackParameters p = stack(0.0, 2.0);
  const ThicknessMesh mesh = ThicknessMesh::uniform(p.h_b, p.h_f, 6, 6);
  const ModeSystem sys = assemble_mode_system(p, 0.25, mode(2, -1, 0.0), mesh);
  for (const auto& v : sys.rhs) CHECK(std::abs(v) == 0.0L);

  const ModeSolution zero = solve_mode(assemble_mode_system(p, 0.25, mode(0, 0, 0.0), mesh));
  for (const auto& v : zero.x) CHECK(std::abs(v) == 0.0L);
}

TEST_CASE("assembled matrix is Hermitian positive definite") {
  for (auto [a, b] : {std::pair{0.0, 2.0}, {0.5, 3.5}, {0.0, 0.0}}) {
    const StackParameters p = stack(a, b);
    const ThicknessMesh mesh = ThicknessMesh::uniform(p.h_b, p.h_f, 3, 4);
    const ModeSystem sys = assemble_mode_system(p, 0.3, mode(1, 2, 1.0, 0.4), mesh);
    const Eigen::MatrixXcd A = sys.dense_matrix();
    CHECK((A - A.adjoint()).norm() <= 1e-14 * A.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("solve_mode on small systems") {
  ModeSystem one;
  one.matrix = HermitianBand<Extended>(1, 0);
  one.matrix.add_lower(0, 0, 4.0L);
  one.rhs = {ExtendedComplex(2.0L, -1.0L)};
  const ModeSolution s = solve_mode(one);
  CHECK(std::abs(s.x[0] - ExtendedComplex(0.5L, -0.25L)) < 1e-18L);

  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd B(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) B(i, j) = cd(g(rng), g(rng));
  const Eigen::MatrixXcd A = B.adjoint() * B + Eigen::MatrixXcd::Identity(6, 6);
  Eigen::VectorXcd b(6);
  for (int i = 0; i < 6; ++i) b[i] = cd(g(rng), g(rng));

  ModeSystem sys;
  sys.matrix = HermitianBand<Extended>(6, 5);
  for (int i = 0; i < 6; ++i) {
    sys.rhs.push_back(ExtendedComplex(b[i].real(), b[i].imag()));
    for (int j = 0; j <= i; ++j) sys.matrix.add_lower(i, j, ExtendedComplex(A(i, j).real(), A(i, j).imag()));
  }
  const ModeSolution sol = solve_mode(sys);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  const Eigen::VectorXcd x =
      es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint() * b;
  for (int i = 0; i < 6; ++i) {
    const cd xi(static_cast<double>(sol.x[i].real()), static_cast<double>(sol.x[i].imag()));
    CHECK(std::abs(xi - x[i]) <= 1e-10 * x.norm());
  }

  ModeSystem indefinite = one;
  indefinite.matrix = HermitianBand<Extended>(1, 0);
  indefinite.matrix.add_lower(0, 0, -1.0L);
  CHECK_THROWS_AS(solve_mode(indefinite), NumericalError);
}

TEST_CASE("band solve agrees with dense extended solve, pressure pushes upward") {
  const StackParameters p = stack(0.0, 4.0);
  const ThicknessMesh mesh = ThicknessMesh::uniform(p.h_b, p.h_f, 10, 10);
  const ModeSystem sys = assemble_mode_system(p, 0.2, mode(0, 0, 1.0), mesh);
  const ModeSolution band = solve_mode(sys);
  const auto dense = oracle::dense_solve(sys);
  Extended diff = 0, norm = 0;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    diff = std::max(diff, std::abs(band.x[i] - dense[i]));
    norm = std::max(norm, std::abs(dense[i]));
  }
  CHECK(static_cast<double>(diff / norm) < 1e-12);
  CHECK(band.x.back().real() > 0.0L);
  CHECK(band.relative_residual < 1e-12);
}

TEST_CASE("solve3d: empty, single mode, superposition, threads") {
  const StackParameters p = stack(0.0, 2.0);
  const ThicknessMesh mesh = ThicknessMesh::uniform(p.h_b, p.h_f, 8, 8);
  const double eps = 0.25;

  CHECK(solve3d(p, eps, {}, mesh).modes.empty());

  const Mode a = mode(1, 0, 0.0, 1.0);
  const Mode b = mode(-1, 2, cd(0.3, -0.2), cd(0.0, 0.5), 0.2);
  const Field3D fa = solve3d(p, eps, {a}, mesh);
  REQUIRE(fa.modes.size() == 1);
  CHECK(fa.modes[0].mode.n == a.n);

  const Field3D fb = solve3d(p, eps, {b}, mesh);
  const Field3D both = solve3d(p, eps, {a, b}, mesh);
  const Field3D threaded = solve3d(p, eps, {a, b}, mesh, 4);
  REQUIRE(both.modes.size() == 2);
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    CHECK((both.modes[0].u[i] - fa.modes[0].u[i]).norm() <= 1e-14 * (1 + fa.modes[0].u[i].norm()));
    CHECK((both.modes[1].u[i] - fb.modes[0].u[i]).norm() <= 1e-14 * (1 + fb.modes[0].u[i].norm()));
    CHECK(threaded.modes[0].u[i] == both.modes[0].u[i]);
    CHECK(threaded.modes[1].u[i] == both.modes[1].u[i]);
  }
  for (const auto& f : both.modes) CHECK(f.u[0].norm() == 0.0);
}

TEST_CASE("solve3d errors") {
  const StackParameters p = stack(0.0, 2.0);
  const ThicknessMesh mesh = ThicknessMesh::uniform(p.h_b, p.h_f, 4, 4);
  CHECK_THROWS_AS(solve3d(p, 0.0, {mode(1, 0, 1.0)}, mesh), ParameterError);
  CHECK_THROWS_AS(solve3d(p, -0.1, {mode(1, 0, 1.0)}, mesh), ParameterError);
  CHECK_THROWS_AS(solve3d(stack(-1.0, 3.0), 0.5, {mode(1, 0, 1.0)}, mesh), RegimeError);
  Mode bad = mode(1, 0, 1.0);
  bad.phi_hat(0, 2) = 1.0;
  try {
    (void)solve3d(p, 0.5, {mode(0, 1, 1.0), bad}, mesh);
    CHECK(false);
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("mode 1") != std::string::npos);
  }
}

TEST_CASE("scaled strains: zero and linear fields") {
  const StackParameters p = stack(0.0, 2.0);
  const ThicknessMesh mesh = ThicknessMesh::uniform(p.h_b, p.h_f, 4, 4);
  Field3D f = Field3D::zero(mesh, p, {mode(1, 1, 0.0)}, transverse_scale(p, 0.1));
  for (const auto& m : scaled_strains(f, p, 0.1).modes)
    for (const auto& e : m.values)
      for (const auto& k : e) CHECK(k.norm() == 0.0);

  // u3 = s x3 in the film, constant in the bonding layer.
  f.modes[0].k.setZero();
  const double s = 0.7;
  const auto x3 = mesh.nodes();
  for (std::size_t i = mesh.interface_node(); i < x3.size(); ++i) f.modes[0].u[i][2] = s * x3[i];
  const ScaledStrains st = scaled_strains(f, p, 0.1);
  for (std::size_t q = st.film_begin; q < st.gauss_x3.size(); ++q)
    CHECK(st.at(0, q)(2, 2).real() == doctest::Approx(s / 0.01).epsilon(1e-12));
}

TEST_CASE("scaled strains match finite differences of the definitions") {
  for (auto [a, b] : {std::pair{0.0, 2.0}, {0.5, 3.5}}) {
    const StackParameters p = stack(a, b);
    const Exponents ex = derive_exponents(a, b);
    const double eps = 0.3;
    const ThicknessMesh mesh = ThicknessMesh::uniform(p.h_b, p.h_f, 5, 7);
    Field3D f = Field3D::zero(mesh, p, {mode(1, -2, 0.0)}, transverse_scale(p, eps));
    std::mt19937_64 rng(3);
    perturb(f, rng, 1.0);
    const ScaledStrains st = scaled_strains(f, p, eps);
    const auto x3 = mesh.nodes();
    const auto& u = f.modes[0].u;
    const Eigen::Vector2d k = f.modes[0].k;
    const cd I(0, 1);

    auto interp = [&](std::size_t e, double x) -> Eigen::Vector3cd {
      const double t = (x - x3[e]) / (x3[e + 1] - x3[e]);
      Eigen::Vector3cd v = (1 - t) * u[e] + t * u[e + 1];
      v[2] /= f.transverse_scale;
      return v;
    };
    double worst = 0.0;
    for (std::size_t q = 0; q < st.gauss_x3.size(); ++q) {
      const std::size_t e = q / 2;
      const double x = st.gauss_x3[q];
      const double h = 1e-6 * (x3[e + 1] - x3[e]);
      const Eigen::Vector3cd v = interp(e, x);
      const Eigen::Vector3cd d = (interp(e, x + h) - interp(e, x - h)) / (2 * h);
      Eigen::Matrix3cd kap;
      const bool film = st.in_film(q);
      for (int al = 0; al < 2; ++al) {
        for (int be = 0; be < 2; ++be) {
          const cd eab = 0.5 * (I * k[be] * v[al] + I * k[al] * v[be]);
          kap(al, be) = film ? eab : std::pow(eps, ex.gamma) * eab;
        }
        kap(al, 2) = kap(2, al) = film ? 0.5 * (d[al] + I * k[al] * v[2]) / eps
                                       : 0.5 * (std::pow(eps, ex.delta) * d[al] +
                                                std::pow(eps, ex.gamma - 1) * I * k[al] * v[2]);
      }
      kap(2, 2) = film ? d[2] / (eps * eps) : std::pow(eps, ex.delta - 1) * d[2];
      worst = std::max(worst, (kap - st.at(0, q)).norm() / (1 + kap.norm()));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("energy: constant part, minimality, identity, homogeneity") {
  const StackParameters p = stack(0.0, 4.0);
  const double eps = 0.25;
  const ThicknessMesh mesh = ThicknessMesh::uniform(p.h_b, p.h_f, 6, 6);
  const LoadSpec load = {mode(1, 0, cd(1.0, 0.5), 0.3, -0.2), mode(0, 1, 0.0, cd(0.0, 0.4))};

  const Field3D zero = Field3D::zero(mesh, p, load, transverse_scale(p, eps));
  CHECK(energy(zero, p, eps, {}) == 0.0);
  const double F = residual_energy(p, load);
  CHECK(energy(zero, p, eps, load) == doctest::Approx(F).epsilon(1e-14));

  double direct = 0.0;
  for (const Mode& m : load) {
    const double lt = p.lambda_f * std::norm(m.phi_hat.trace());
    direct += 0.5 * p.h_f * (lt + 2 * p.mu_f * m.phi_hat.squaredNorm());
  }
  CHECK(F == doctest::Approx(direct * p.cell_area()).epsilon(1e-14));

  const Field3D u = solve3d(p, eps, load, mesh);
  const double Eu = energy(u, p, eps, load);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    Field3D v = u;
    perturb(v, rng, 1e-3 * (i + 1));
    CHECK(energy(v, p, eps, load) >= Eu);
  }

  // At the minimizer E = -1/2 Re(b^H x) area + F.
  double work = 0.0;
  for (std::size_t m = 0; m < load.size(); ++m) {
    const ModeSystem sys = assemble_mode_system(p, eps, load[m], mesh);
    for (std::size_t i = 1; i < mesh.num_nodes(); ++i)
      for (int c = 0; c < 3; ++c) {
        const auto b = sys.rhs[(i - 1) * 3 + c];
        work += (std::conj(cd(static_cast<double>(b.real()), static_cast<double>(b.imag()))) * u.modes[m].u[i][c])
                    .real();
      }
  }
  CHECK(Eu == doctest::Approx(-0.5 * work * p.cell_area() + F).epsilon(1e-10));

  LoadSpec doubled = load;
  for (auto& m : doubled) {
    m.p_hat *= 2.0;
    m.phi_hat *= 2.0;
  }
  const Field3D u2 = solve3d(p, eps, doubled, mesh);
  CHECK(energy(u2, p, eps, doubled) - residual_energy(p, doubled) ==
        doctest::Approx(4.0 * (Eu - F)).epsilon(1e-10));
}

TEST_CASE("stationarity residual") {
  const StackParameters p = stack(0.5, 3.5);
  const double eps = 0.2;
  const ThicknessMesh mesh = ThicknessMesh::uniform(p.h_b, p.h_f, 2, 2);
  const LoadSpec load = {mode(1, 1, 1.0, 0.5)};
  const Field3D u = solve3d(p, eps, load, mesh);
  CHECK(stationarity_residual(u, p, eps, load) <= 1e-10);

  const LoadSpec none = {mode(1, 1, 0.0)};
  CHECK(stationarity_residual(Field3D::zero(mesh, p, none, transverse_scale(p, eps)), p, eps, none) == 0.0);

  // Unit 2-norm perturbation: |K v|_inf >= lambda_min / sqrt(N).
  const ModeSystem sys = assemble_mode_system(p, eps, load[0], mesh);
  const Eigen::MatrixXcd K = sys.dense_matrix();
  const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(K).eigenvalues().minCoeff();
  const double N = static_cast<double>(K.rows());
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    Field3D v = u;
    Eigen::VectorXcd noise = Eigen::VectorXcd::Random(K.rows());
    noise /= noise.norm();
    Eigen::VectorXcd x(K.rows());
    for (std::size_t i = 1; i < mesh.num_nodes(); ++i)
      for (int c = 0; c < 3; ++c) {
        v.modes[0].u[i][c] += noise[(i - 1) * 3 + c];
        x[(i - 1) * 3 + c] = v.modes[0].u[i][c];
      }
    const double scale = K.cwiseAbs().rowwise().sum().maxCoeff() * x.cwiseAbs().maxCoeff() +
                         sys.rhs_vector().cwiseAbs().maxCoeff();
    CHECK(stationarity_residual(v, p, eps, load) * scale >= (1 - 1e-9) * lmin / std::sqrt(N));
  }
}

TEST_CASE("Poincare inequality on solutions") {
  for (auto [a, b] : {std::pair{0.0, 2.0}, {0.0, 4.0}, {0.5, 3.5}}) {
    const StackParameters p = stack(a, b);
    const ThicknessMesh mesh = ThicknessMesh::uniform(p.h_b, p.h_f, 16, 16);
    const Field3D u = solve3d(p, 0.25, {mode(1, 0, 1.0, 0.5), mode(0, 0, 0.5)}, mesh);
    const PoincareCheck c = poincare_check(u, p);
    CHECK(c.l2_norm > 0.0);
    CHECK(c.holds());
  }
}
