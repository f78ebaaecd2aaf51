#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "winkler/convergence.hpp"
#include "winkler/core.hpp"
#include "winkler/load.hpp"
#include "winkler/reduced.hpp"
#include "winkler/solver3d.hpp"

namespace winkler {

inline constexpr const char* kSchemaVersion = "winkler-limit/1";

/// Run configuration as read from a JSON file. Unknown keys are rejected.
struct RunConfig {
  StackParameters params;
  LoadSpec load;
  std::vector<double> eps;
  std::optional<std::size_t> mesh_n;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
};

/// Accepts either lambda_f/mu_f or E_f/nu_f. L defaults to the cell diagonal.
StackParameters parse_parameters(const nlohmann::json& j);
Mode parse_mode(const nlohmann::json& j);
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const Field3D& field);
nlohmann::json to_json(const ReducedSolution& solution);
nlohmann::json to_json(const std::vector<ReducedSolution>& solution);
nlohmann::json to_json(const LimitCoefficients& coeffs);
nlohmann::json to_json(const SweepReport& report);
nlohmann::json to_json(const StackParameters& params);

/// Exponents, regime and closed-form coefficients of a stack.
nlohmann::json classification_json(const StackParameters& params);

}  // namespace winkler
