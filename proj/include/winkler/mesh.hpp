#pragma once

#include <cstddef>
#include <vector>

namespace winkler {

/// P1 mesh of the thickness interval (-h_b, h_f). The bonding layer and the
/// film share the interface node x3 = 0.
struct ThicknessMesh {
  std::vector<double> nodes_b;  ///< -h_b ... 0
  std::vector<double> nodes_f;  ///< 0 ... h_f

  static ThicknessMesh uniform(double h_b, double h_f, std::size_t n_b, std::size_t n_f);

  /// Throws ParameterError unless each layer has at least two elements,
  /// coordinates increase strictly and the layers meet at 0.
  void validate() const;

  [[nodiscard]] std::size_t num_nodes() const { return nodes_b.size() + nodes_f.size() - 1; }
  [[nodiscard]] std::size_t num_elements() const { return num_nodes() - 1; }
  /// Index of the node x3 = 0.
  [[nodiscard]] std::size_t interface_node() const { return nodes_b.size() - 1; }
  [[nodiscard]] bool in_film(std::size_t element) const { return element >= interface_node(); }

  /// All nodes in increasing order, the interface appearing once.
  [[nodiscard]] std::vector<double> nodes() const;
  [[nodiscard]] double node(std::size_t i) const;
};

/// Elements per layer used by the sweeps: round(8/eps) clamped to [64, 1024].
std::size_t default_elements_per_layer(double eps);

}  // namespace winkler
