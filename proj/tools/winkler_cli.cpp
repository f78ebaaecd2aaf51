#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "winkler/convergence.hpp"
#include "winkler/errors.hpp"
#include "winkler/io.hpp"
#include "winkler/reduced.hpp"
#include "winkler/solver3d.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kRegimeError = 3, kNumericalError = 4 };

struct Options {
  std::string config;
  std::string out;
  std::string eps;
  std::size_t mesh_n = 0;
  unsigned threads = 0;
};

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw winkler::ParameterError("--eps: cannot parse '" + item + "'");
    }
    if (used != item.size() || !(v > 0.0)) throw winkler::ParameterError("--eps: entries must be positive numbers");
    out.push_back(v);
  }
  if (out.empty()) throw winkler::ParameterError("--eps: empty list");
  return out;
}

struct Resolved {
  winkler::RunConfig cfg;
  fs::path out;
  unsigned threads = 1;
};

Resolved resolve(const Options& opt) {
  Resolved r{winkler::load_run_config(opt.config), {}, 1};
  if (!opt.eps.empty()) r.cfg.eps = parse_eps_list(opt.eps);
  if (opt.mesh_n) {
    if (opt.mesh_n < 2) throw winkler::ParameterError("--mesh-n must be at least 2");
    r.cfg.mesh_n = opt.mesh_n;
  }
  r.out = !opt.out.empty() ? fs::path(opt.out) : fs::path(r.cfg.out_dir.value_or("."));
  if (opt.threads) {
    r.threads = opt.threads;
  } else if (r.cfg.threads) {
    r.threads = *r.cfg.threads;
  } else if (const char* env = std::getenv("WINKLER_THREADS")) {
    try {
      r.threads = static_cast<unsigned>(std::max(1, std::stoi(env)));
    } catch (const std::exception&) {
      throw winkler::ParameterError("WINKLER_THREADS must be a positive integer");
    }
  }
  return r;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw winkler::ParameterError("cannot write " + path.string());
  out << text;
}

int cmd_classify(const Options& opt) {
  const auto r = resolve(opt);
  std::cout << winkler::classification_json(r.cfg.params).dump(2) << '\n';
  return kOk;
}

int cmd_solve3d(const Options& opt) {
  const auto r = resolve(opt);
  const std::vector<double> eps = r.cfg.eps.empty() ? std::vector<double>{0.5} : r.cfg.eps;
  const std::size_t n = r.cfg.mesh_n.value_or(64);
  const auto mesh = winkler::ThicknessMesh::uniform(r.cfg.params.h_b, r.cfg.params.h_f, n, n);
  json summary = json::array();
  for (std::size_t i = 0; i < eps.size(); ++i) {
    winkler::SolveDiagnostics diag;
    const auto field = winkler::solve3d(r.cfg.params, eps[i], r.cfg.load, mesh, r.threads, &diag);
    const double residual = winkler::stationarity_residual(field, r.cfg.params, eps[i], r.cfg.load);
    const fs::path file = r.out / ("field_" + std::to_string(i) + ".json");
    json doc = {{"schema", winkler::kSchemaVersion},
                {"eps", eps[i]},
                {"transverse_scale", field.transverse_scale},
                {"stationarity_residual", residual},
                {"relative_residual", diag.max_relative_residual},
                {"energy", winkler::energy(field, r.cfg.params, eps[i], r.cfg.load)},
                {"field", winkler::to_json(field)}};
    write_file(file, doc.dump(1) + "\n");
    summary.push_back({{"eps", eps[i]}, {"file", file.string()}, {"stationarity_residual", residual}});
  }
  std::cout << summary.dump(2) << '\n';
  return kOk;
}

int cmd_solve_reduced(const Options& opt, bool plate) {
  const auto r = resolve(opt);
  const auto sol = plate ? winkler::solve_plate(r.cfg.params, r.cfg.load) : winkler::solve_membrane(r.cfg.params, r.cfg.load);
  const std::string text = winkler::to_json(sol).dump(2) + "\n";
  write_file(r.out / (plate ? "plate.json" : "membrane.json"), text);
  std::cout << text;
  return kOk;
}

int cmd_converge(const Options& opt) {
  const auto r = resolve(opt);
  winkler::SweepOptions so;
  so.elements_per_layer = r.cfg.mesh_n;
  so.threads = r.threads;
  const auto eps = r.cfg.eps.empty() ? winkler::default_eps_values() : r.cfg.eps;
  const auto report = winkler::run_sweep(r.cfg.params, r.cfg.load, eps, so);
  write_file(r.out / "sweep.json", winkler::to_json(report).dump(2) + "\n");
  const std::string csv = winkler::sweep_csv(report);
  write_file(r.out / "sweep.csv", csv);
  std::cout << csv;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Film / bonding-layer stack: 3D solves, limit models and convergence sweeps"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON run configuration")->required();
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--eps", opt.eps, "comma separated eps values, overrides the config");
    sub->add_option("--mesh-n", opt.mesh_n, "elements per layer");
    sub->add_option("--threads", opt.threads, "worker threads (fallback: WINKLER_THREADS)");
  };
  auto* classify = app.add_subcommand("classify", "print exponents, regime and coefficients");
  auto* solve = app.add_subcommand("solve3d", "solve the rescaled 3D problem per mode");
  auto* membrane = app.add_subcommand("solve-membrane", "solve the membrane limit model");
  auto* plate = app.add_subcommand("solve-plate", "solve the plate limit model");
  auto* converge = app.add_subcommand("converge", "eps sweep against the matching limit model");
  for (auto* sub : {classify, solve, membrane, plate, converge}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (classify->parsed()) return cmd_classify(opt);
    if (solve->parsed()) return cmd_solve3d(opt);
    if (membrane->parsed()) return cmd_solve_reduced(opt, false);
    if (plate->parsed()) return cmd_solve_reduced(opt, true);
    if (converge->parsed()) return cmd_converge(opt);
  } catch (const winkler::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const winkler::RegimeError& e) {
    std::cerr << "regime error: " << e.what() << '\n';
    return kRegimeError;
  } catch (const winkler::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}
