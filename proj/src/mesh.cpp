#include "winkler/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "winkler/errors.hpp"

namespace winkler {

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
  out.front() = a;
  out.back() = b;
  return out;
}

}  // namespace

ThicknessMesh ThicknessMesh::uniform(double h_b, double h_f, std::size_t n_b, std::size_t n_f) {
  if (!(h_b > 0.0) || !(h_f > 0.0)) throw ParameterError("layer thicknesses must be positive");
  ThicknessMesh mesh{linspace(-h_b, 0.0, n_b), linspace(0.0, h_f, n_f)};
  mesh.validate();
  return mesh;
}

void ThicknessMesh::validate() const {
  if (nodes_b.size() < 3 || nodes_f.size() < 3)
    throw ParameterError("thickness mesh needs at least 2 elements per layer");
  if (nodes_b.back() != 0.0 || nodes_f.front() != 0.0)
    throw ParameterError("thickness mesh layers must meet at x3 = 0");
  auto increasing = [](const std::vector<double>& v) {
    return std::adjacent_find(v.begin(), v.end(), [](double a, double b) { return !(a < b); }) == v.end();
  };
  if (!increasing(nodes_b) || !increasing(nodes_f))
    throw ParameterError("thickness mesh nodes must increase strictly");
}

std::vector<double> ThicknessMesh::nodes() const {
  std::vector<double> out(nodes_b);
  out.insert(out.end(), nodes_f.begin() + 1, nodes_f.end());
  return out;
}

double ThicknessMesh::node(std::size_t i) const {
  return i < nodes_b.size() ? nodes_b[i] : nodes_f[i - interface_node()];
}

std::size_t default_elements_per_layer(double eps) {
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  const double n = std::round(8.0 / eps);
  return static_cast<std::size_t>(std::clamp(n, 64.0, 1024.0));
}

}  // namespace winkler
