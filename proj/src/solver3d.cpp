#include "winkler/solver3d.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <span>
#include <string>

#include "parallel.hpp"
#include "winkler/errors.hpp"

namespace winkler {

namespace {

using Row = std::array<ExtendedComplex, 6>;

constexpr std::size_t kBand = 5;
constexpr std::size_t kDofsPerNode = 3;

// Local coordinate of the two Gauss points on the reference element [0, 1].
const std::array<Extended, 2> kGaussLocal = {0.5L - 0.5L / std::sqrt(3.0L), 0.5L + 0.5L / std::sqrt(3.0L)};

struct EnergyWeights {
  Extended lambda_f, mu_f, lambda_b, mu_b;
  Extended inv_eps, inv_eps2;
  Extended eps_gamma, eps_delta, eps_delta_m1, eps_gamma_m1;
  Extended inv_scale;  // stored u3 -> energy u3
};

EnergyWeights energy_weights(const StackParameters& params, double eps) {
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  params.validate();
  const Exponents ex = derive_exponents(params.alpha, params.beta);
  const Lame b = reference_bonding_moduli(params);
  const Extended e = eps;
  const Extended g = ex.gamma;
  const Extended d = ex.delta;
  return {params.lambda_f, params.mu_f, b.lambda, b.mu, 1.0L / e, 1.0L / (e * e),
          std::pow(e, g), std::pow(e, d), std::pow(e, d - 1.0L), std::pow(e, g - 1.0L),
          1.0L / static_cast<Extended>(transverse_scale(params, eps))};
}

// Strain building blocks at one Gauss point, as rows acting on the local
// element vector (u1, u2, u3 at the lower node, then at the upper node).
struct PointRows {
  std::array<Row, 3> value;        // u_i
  std::array<Row, 3> derivative;   // d3 u_i
  std::array<std::array<Row, 2>, 2> e_in;  // e_ab
  Row trace;                       // e_aa
};

PointRows point_rows(Extended h, Extended t, const std::array<ExtendedComplex, 2>& ik, Extended inv_scale) {
  PointRows p{};
  for (std::size_t c = 0; c < 3; ++c) {
    const Extended s = c == 2 ? inv_scale : 1.0L;
    p.value[c][c] = (1.0L - t) * s;
    p.value[c][3 + c] = t * s;
    p.derivative[c][c] = -s / h;
    p.derivative[c][3 + c] = s / h;
  }
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t j = 0; j < 6; ++j)
        p.e_in[a][b][j] = 0.5L * (ik[a] * p.value[b][j] + ik[b] * p.value[a][j]);
  for (std::size_t j = 0; j < 6; ++j) p.trace[j] = p.e_in[0][0][j] + p.e_in[1][1][j];
  return p;
}

Row combine(const Row& a, Extended sa, const Row& b, ExtendedComplex sb) {
  Row r;
  for (std::size_t j = 0; j < 6; ++j) r[j] = sa * a[j] + sb * b[j];
  return r;
}

Row scaled(const Row& a, Extended s) {
  Row r;
  for (std::size_t j = 0; j < 6; ++j) r[j] = s * a[j];
  return r;
}

struct WeightedRow {
  Extended weight;
  Row row;
};

// Quadratic energy density at a Gauss point as sum of weight * |row . x|^2 / 2.
std::vector<WeightedRow> energy_rows(bool film, const PointRows& p, const std::array<ExtendedComplex, 2>& ik,
                                     const EnergyWeights& w) {
  std::vector<WeightedRow> rows;
  rows.reserve(8);
  const Row& e33 = p.derivative[2];
  if (film) {
    rows.push_back({w.lambda_f, combine(e33, w.inv_eps2, p.trace, 1.0L)});
    for (std::size_t a = 0; a < 2; ++a)
      rows.push_back({2.0L * w.mu_f * w.inv_eps2, combine(p.derivative[a], 1.0L, p.value[2], ik[a])});
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) rows.push_back({2.0L * w.mu_f, p.e_in[a][b]});
    rows.push_back({2.0L * w.mu_f, scaled(e33, w.inv_eps2)});
  } else {
    rows.push_back({w.lambda_b, combine(e33, w.eps_delta_m1, p.trace, w.eps_gamma)});
    for (std::size_t a = 0; a < 2; ++a)
      rows.push_back({2.0L * w.mu_b, combine(p.derivative[a], w.eps_delta, p.value[2], w.eps_gamma_m1 * ik[a])});
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) rows.push_back({2.0L * w.mu_b, scaled(p.e_in[a][b], w.eps_gamma)});
    rows.push_back({2.0L * w.mu_b, scaled(e33, w.eps_delta_m1)});
  }
  return rows;
}

// Eigenstrain work density at a film Gauss point, as sum of conj(g) * row . x.
std::vector<std::pair<ExtendedComplex, Row>> load_rows(const PointRows& p, const Mode& mode, const EnergyWeights& w) {
  const auto phi = [&](int i, int j) {
    const auto v = mode.phi_hat(i, j);
    return ExtendedComplex(v.real(), v.imag());
  };
  const ExtendedComplex in_plane = phi(0, 0) + phi(1, 1);
  std::vector<std::pair<ExtendedComplex, Row>> rows;
  rows.push_back({2.0L * w.mu_f * phi(2, 2) + w.lambda_f * in_plane, scaled(p.derivative[2], w.inv_eps2)});
  rows.push_back({w.lambda_f * (in_plane + phi(2, 2)), p.trace});
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) rows.push_back({2.0L * w.mu_f * phi(a, b), p.e_in[a][b]});
  return rows;
}

std::array<ExtendedComplex, 2> imaginary_wave(const Eigen::Vector2d& k) {
  return {ExtendedComplex(0, k[0]), ExtendedComplex(0, k[1])};
}

void check_regime(const StackParameters& params) {
  const Exponents ex = derive_exponents(params.alpha, params.beta);
  if (!(ex.gamma - ex.delta > kBoundaryTolerance * std::max(1.0, std::abs(ex.gamma))))
    throw RegimeError("3D solver requires gamma - delta > 0 (got gamma=" + std::to_string(ex.gamma) +
                      ", delta=" + std::to_string(ex.delta) + ")");
}

// Energy-variable nodal vector of a mode, in the ordering of the constrained
// system (node 0 dropped).
std::vector<ExtendedComplex> constrained_vector(const ModeField& f) {
  std::vector<ExtendedComplex> x((f.u.size() - 1) * kDofsPerNode);
  for (std::size_t i = 1; i < f.u.size(); ++i)
    for (std::size_t c = 0; c < 3; ++c) {
      const auto v = f.u[i][c];
      x[(i - 1) * kDofsPerNode + c] = ExtendedComplex(v.real(), v.imag());
    }
  return x;
}

const ModeField* find_mode(const Field3D& field, const Mode& mode) {
  for (const auto& f : field.modes)
    if (f.mode.n == mode.n) return &f;
  return nullptr;
}

Extended max_abs(std::span<const ExtendedComplex> v) {
  Extended m = 0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

double transverse_scale(const StackParameters& params, double eps) {
  const Exponents ex = derive_exponents(params.alpha, params.beta);
  const bool rescale = ex.delta > kBoundaryTolerance && ex.delta < 1.0 - kBoundaryTolerance;
  return rescale ? std::pow(eps, 1.0 - ex.delta) : 1.0;
}

Eigen::MatrixXcd ModeSystem::dense_matrix() const {
  const std::size_t n = matrix.size();
  Eigen::MatrixXcd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const ExtendedComplex v = matrix(i, j);
      m(i, j) = {static_cast<double>(v.real()), static_cast<double>(v.imag())};
    }
  return m;
}

Eigen::VectorXcd ModeSystem::rhs_vector() const {
  Eigen::VectorXcd b(rhs.size());
  for (std::size_t i = 0; i < rhs.size(); ++i)
    b[i] = {static_cast<double>(rhs[i].real()), static_cast<double>(rhs[i].imag())};
  return b;
}

ModeSystem assemble_mode_system(const StackParameters& params, double eps, const Mode& mode,
                                const ThicknessMesh& mesh) {
  mesh.validate();
  mode.validate();
  check_regime(params);
  const EnergyWeights w = energy_weights(params, eps);

  ModeSystem sys;
  sys.mode = mode;
  sys.k = wave_vector(mode, params);
  sys.transverse_scale = transverse_scale(params, eps);
  const std::size_t nodes = mesh.num_nodes();
  const std::size_t n = (nodes - 1) * kDofsPerNode;
  sys.matrix = HermitianBand<Extended>(n, kBand);
  sys.rhs.assign(n, ExtendedComplex(0));
  const auto ik = imaginary_wave(sys.k);

  const std::vector<double> x3 = mesh.nodes();
  for (std::size_t e = 0; e + 1 < nodes; ++e) {
    const bool film = mesh.in_film(e);
    const Extended h = static_cast<Extended>(x3[e + 1]) - static_cast<Extended>(x3[e]);
    std::array<std::array<ExtendedComplex, 6>, 6> ke{};
    std::array<ExtendedComplex, 6> be{};
    for (const Extended t : kGaussLocal) {
      const Extended qw = 0.5L * h;
      const PointRows p = point_rows(h, t, ik, w.inv_scale);
      for (const auto& [weight, row] : energy_rows(film, p, ik, w))
        for (std::size_t i = 0; i < 6; ++i)
          for (std::size_t j = 0; j < 6; ++j) ke[i][j] += qw * weight * std::conj(row[i]) * row[j];
      if (film)
        for (const auto& [g, row] : load_rows(p, mode, w))
          for (std::size_t i = 0; i < 6; ++i) be[i] += qw * std::conj(row[i]) * g;
    }
    // Global dof of local i is 3e + i; constrained index drops the first node.
    for (std::size_t i = 0; i < 6; ++i) {
      const std::size_t gi = kDofsPerNode * e + i;
      if (gi < kDofsPerNode) continue;
      sys.rhs[gi - kDofsPerNode] += be[i];
      for (std::size_t j = 0; j <= i; ++j) {
        const std::size_t gj = kDofsPerNode * e + j;
        if (gj < kDofsPerNode) continue;
        sys.matrix.add_lower(gi - kDofsPerNode, gj - kDofsPerNode, ke[i][j]);
      }
    }
  }
  sys.rhs[n - 1] += ExtendedComplex(mode.p_hat.real(), mode.p_hat.imag()) * w.inv_scale;
  return sys;
}

ModeSolution solve_mode(const ModeSystem& system) {
  const std::size_t n = system.matrix.size();
  if (n == 0 || system.rhs.size() != n) throw ParameterError("empty or inconsistent mode system");
  HermitianBand<Extended> factor = system.matrix;
  factor.factor();

  ModeSolution out;
  out.x = system.rhs;
  factor.solve_in_place(out.x);

  const Extended b_norm = max_abs(system.rhs);
  const Extended m_norm = system.matrix.norm_inf();
  std::vector<ExtendedComplex> r(n);
  auto residual = [&] {
    system.matrix.multiply<ExtendedComplex, ExtendedComplex>(out.x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = system.rhs[i] - r[i];
    return max_abs(r);
  };
  Extended r_norm = residual();
  constexpr int kMaxRefinement = 4;
  while (out.refinement_steps < kMaxRefinement && r_norm > 0) {
    std::vector<ExtendedComplex> dx = r;
    factor.solve_in_place(dx);
    std::vector<ExtendedComplex> previous = out.x;
    for (std::size_t i = 0; i < n; ++i) out.x[i] += dx[i];
    const Extended next = residual();
    ++out.refinement_steps;
    if (!(next < 0.5L * r_norm)) {
      if (!(next <= r_norm)) {
        out.x = std::move(previous);
        r_norm = residual();
      } else {
        r_norm = next;
      }
      break;
    }
    r_norm = next;
  }
  const Extended x_norm = max_abs(out.x);
  if (!std::isfinite(static_cast<double>(x_norm))) throw NumericalError("non-finite solution");
  out.relative_residual = b_norm > 0 ? static_cast<double>(r_norm / b_norm) : static_cast<double>(r_norm);
  const Extended scale = m_norm * x_norm + b_norm;
  out.backward_error = scale > 0 ? static_cast<double>(r_norm / scale) : 0.0;
  return out;
}

Field3D Field3D::zero(const ThicknessMesh& mesh, const StackParameters& params, const LoadSpec& load,
                      double transverse_scale) {
  Field3D f;
  f.mesh = mesh;
  f.transverse_scale = transverse_scale;
  for (const auto& mode : load)
    f.modes.push_back({mode, wave_vector(mode, params),
                       std::vector<Eigen::Vector3cd>(mesh.num_nodes(), Eigen::Vector3cd::Zero())});
  return f;
}

Field3D solve3d(const StackParameters& params, double eps, const LoadSpec& load, const ThicknessMesh& mesh,
                unsigned threads, SolveDiagnostics* diagnostics) {
  mesh.validate();
  check_regime(params);
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  Field3D field = Field3D::zero(mesh, params, load, transverse_scale(params, eps));
  std::vector<ModeSolution> solutions(load.size());
  std::vector<std::exception_ptr> errors(load.size());

  detail::parallel_for(load.size(), threads, [&](std::size_t m) {
    try {
      solutions[m] = solve_mode(assemble_mode_system(params, eps, load[m], mesh));
    } catch (...) {
      errors[m] = std::current_exception();
    }
  });

  for (std::size_t m = 0; m < load.size(); ++m) {
    if (!errors[m]) continue;
    const std::string where = "mode " + std::to_string(m) + " (n=" + std::to_string(load[m].n[0]) + "," +
                              std::to_string(load[m].n[1]) + "): ";
    try {
      std::rethrow_exception(errors[m]);
    } catch (const ParameterError& e) {
      throw ParameterError(where + e.what());
    } catch (const RegimeError& e) {
      throw RegimeError(where + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError(where + e.what());
    }
  }

  SolveDiagnostics diag;
  for (std::size_t m = 0; m < load.size(); ++m) {
    auto& u = field.modes[m].u;
    const auto& x = solutions[m].x;
    for (std::size_t i = 1; i < u.size(); ++i)
      for (std::size_t c = 0; c < 3; ++c) {
        const auto v = x[(i - 1) * kDofsPerNode + c];
        u[i][c] = {static_cast<double>(v.real()), static_cast<double>(v.imag())};
      }
    diag.max_relative_residual = std::max(diag.max_relative_residual, solutions[m].relative_residual);
    diag.max_backward_error = std::max(diag.max_backward_error, solutions[m].backward_error);
  }
  if (diagnostics) *diagnostics = diag;
  return field;
}

ScaledStrains scaled_strains(const Field3D& field, const StackParameters& params, double eps) {
  field.mesh.validate();
  const EnergyWeights w = energy_weights(params, eps);
  const Extended inv_scale = 1.0L / static_cast<Extended>(field.transverse_scale);
  const std::vector<double> x3 = field.mesh.nodes();
  const std::size_t elements = field.mesh.num_elements();

  ScaledStrains out;
  out.area = params.cell_area();
  out.film_begin = 2 * field.mesh.interface_node();
  for (std::size_t e = 0; e < elements; ++e) {
    const Extended h = static_cast<Extended>(x3[e + 1]) - static_cast<Extended>(x3[e]);
    for (const Extended t : kGaussLocal) {
      out.gauss_x3.push_back(static_cast<double>(x3[e] + t * h));
      out.gauss_weight.push_back(static_cast<double>(0.5L * h));
    }
  }

  for (const auto& f : field.modes) {
    if (f.u.size() != field.mesh.num_nodes()) throw ParameterError("field does not match its mesh");
    const auto ik = imaginary_wave(f.k);
    ModeStrains ms;
    ms.values.resize(elements);
    for (std::size_t e = 0; e < elements; ++e) {
      std::array<ExtendedComplex, 6> local;
      for (std::size_t c = 0; c < 3; ++c) {
        local[c] = ExtendedComplex(f.u[e][c].real(), f.u[e][c].imag());
        local[3 + c] = ExtendedComplex(f.u[e + 1][c].real(), f.u[e + 1][c].imag());
      }
      const bool film = field.mesh.in_film(e);
      const Extended h = static_cast<Extended>(x3[e + 1]) - static_cast<Extended>(x3[e]);
      for (std::size_t q = 0; q < 2; ++q) {
        const PointRows p = point_rows(h, kGaussLocal[q], ik, inv_scale);
        auto apply = [&](const Row& r) {
          ExtendedComplex s = 0;
          for (std::size_t j = 0; j < 6; ++j) s += r[j] * local[j];
          return s;
        };
        std::array<ExtendedComplex, 3> shear;
        ExtendedComplex k33;
        std::array<std::array<ExtendedComplex, 2>, 2> kin;
        for (std::size_t a = 0; a < 2; ++a) {
          const ExtendedComplex d3 = apply(p.derivative[a]);
          const ExtendedComplex da3 = ik[a] * apply(p.value[2]);
          shear[a] = film ? 0.5L * (d3 + da3) * w.inv_eps : 0.5L * (w.eps_delta * d3 + w.eps_gamma_m1 * da3);
          for (std::size_t b = 0; b < 2; ++b) kin[a][b] = (film ? 1.0L : w.eps_gamma) * apply(p.e_in[a][b]);
        }
        k33 = apply(p.derivative[2]) * (film ? w.inv_eps2 : w.eps_delta_m1);
        Eigen::Matrix3cd m;
        auto cd = [](ExtendedComplex z) {
          return std::complex<double>(static_cast<double>(z.real()), static_cast<double>(z.imag()));
        };
        for (std::size_t a = 0; a < 2; ++a) {
          for (std::size_t b = 0; b < 2; ++b) m(a, b) = cd(kin[a][b]);
          m(a, 2) = m(2, a) = cd(shear[a]);
        }
        m(2, 2) = cd(k33);
        ms.values[e][q] = m;
      }
    }
    out.modes.push_back(std::move(ms));
  }
  return out;
}

double residual_energy(const StackParameters& params, const LoadSpec& load) {
  double sum = 0.0;
  for (const auto& mode : load) {
    const auto& phi = mode.phi_hat;
    sum += 0.5 * params.h_f * (params.lambda_f * std::norm(phi.trace()) + 2.0 * params.mu_f * phi.squaredNorm());
  }
  return params.cell_area() * sum;
}

double energy(const Field3D& field, const StackParameters& params, double eps, const LoadSpec& load) {
  Extended total = 0;
  std::vector<Mode> modes(load.begin(), load.end());
  for (const auto& f : field.modes)
    if (std::none_of(load.begin(), load.end(), [&](const Mode& m) { return m.n == f.mode.n; })) {
      Mode unloaded;
      unloaded.n = f.mode.n;
      modes.push_back(unloaded);
    }
  for (const auto& mode : modes) {
    const ModeField* f = find_mode(field, mode);
    if (!f) continue;
    if (f->u.size() != field.mesh.num_nodes()) throw ParameterError("field does not match its mesh");
    if (transverse_scale(params, eps) != field.transverse_scale)
      throw ParameterError("field transverse scale does not match eps");
    const ModeSystem sys = assemble_mode_system(params, eps, mode, field.mesh);
    const std::vector<ExtendedComplex> x = constrained_vector(*f);
    std::vector<ExtendedComplex> mx(x.size());
    sys.matrix.multiply<ExtendedComplex, ExtendedComplex>(x, mx);
    ExtendedComplex quad = 0, work = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      quad += std::conj(x[i]) * mx[i];
      work += std::conj(sys.rhs[i]) * x[i];
    }
    total += 0.5L * quad.real() - work.real();
  }
  return static_cast<double>(total * static_cast<Extended>(params.cell_area())) + residual_energy(params, load);
}

double stationarity_residual(const Field3D& field, const StackParameters& params, double eps, const LoadSpec& load) {
  double worst = 0.0;
  for (const auto& mode : load) {
    const ModeSystem sys = assemble_mode_system(params, eps, mode, field.mesh);
    const ModeField* f = find_mode(field, mode);
    std::vector<ExtendedComplex> x(sys.rhs.size(), ExtendedComplex(0));
    if (f) {
      if (f->u.size() != field.mesh.num_nodes()) throw ParameterError("field does not match its mesh");
      x = constrained_vector(*f);
    }
    std::vector<ExtendedComplex> r(x.size());
    sys.matrix.multiply<ExtendedComplex, ExtendedComplex>(x, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= sys.rhs[i];
    const Extended scale = sys.matrix.norm_inf() * max_abs(x) + max_abs(sys.rhs);
    if (scale > 0) worst = std::max(worst, static_cast<double>(max_abs(r) / scale));
  }
  return worst;
}

PoincareCheck poincare_check(const Field3D& field, const StackParameters& params) {
  const std::vector<double> x3 = field.mesh.nodes();
  double u2 = 0.0, d_film = 0.0, d_bond = 0.0;
  for (const auto& f : field.modes) {
    for (std::size_t e = 0; e + 1 < x3.size(); ++e) {
      const double h = x3[e + 1] - x3[e];
      const Eigen::Vector3cd& a = f.u[e];
      const Eigen::Vector3cd& b = f.u[e + 1];
      // Exact integral of |a (1 - t) + b t|^2 over the element.
      u2 += h / 3.0 * (a.squaredNorm() + b.squaredNorm() + a.dot(b).real());
      const double d = (b - a).squaredNorm() / h;
      (field.mesh.in_film(e) ? d_film : d_bond) += d;
    }
  }
  const double area = params.cell_area();
  PoincareCheck out;
  out.l2_norm = std::sqrt(area * u2);
  out.bound = (params.h_f + params.h_b) * (std::sqrt(area * d_film) + std::sqrt(area * d_bond));
  return out;
}

}  // namespace winkler
