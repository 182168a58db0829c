// Command-line front end: run experiments, verify the analytic bounds,
// rasterize phantoms.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "abeltv/experiment.hpp"
#include "abeltv/io.hpp"
#include "abeltv/phantoms.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& output_override) {
  std::ifstream is(config_path);
  if (!is) {
    std::cerr << "cannot read config " << config_path << '\n';
    return 2;
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config parse error: " << e.what() << '\n';
    return 2;
  }
  abeltv::ExperimentConfig cfg;
  try {
    cfg = abeltv::config_from_json(j);
  } catch (const abeltv::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  if (!output_override.empty()) cfg.output_dir = output_override;
  const auto outcomes = abeltv::run_experiment(cfg, &std::cerr);
  abeltv::write_results_csv(std::cout, outcomes);
  for (const auto& o : outcomes)
    if (!o.ok()) return 1;
  return 0;
}

int cmd_verify(std::uint64_t seed, int trials) {
  const auto summary = abeltv::verify_bounds(seed, trials);
  std::cout << std::left << std::setw(24) << "check" << "max_ratio  result\n";
  for (const auto& c : summary.checks)
    std::cout << std::left << std::setw(24) << c.name << std::setw(11) << std::setprecision(6)
              << c.max_ratio << (c.passed() ? "pass" : "FAIL") << '\n';
  return summary.passed() ? 0 : 1;
}

int cmd_phantom(const std::string& name, const std::string& spec_path, int n,
                const std::string& out, const std::string& format) {
  abeltv::PhantomSpec spec;
  if (!spec_path.empty()) {
    std::ifstream is(spec_path);
    if (!is) {
      std::cerr << "cannot read phantom spec " << spec_path << '\n';
      return 2;
    }
    spec = abeltv::io::phantom_from_json(nlohmann::json::parse(is));
  } else {
    spec = abeltv::builtin_phantom(name);
  }
  const auto u = abeltv::rasterize_phantom(spec, abeltv::GridRZ(n));
  std::ofstream os(out);
  if (!os) {
    std::cerr << "cannot write " << out << '\n';
    return 2;
  }
  if (format == "json")
    os << abeltv::io::field_to_json(u).dump() << '\n';
  else
    abeltv::io::write_field_csv(os, u);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TV-regularized Abel inversion"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  auto* run = app.add_subcommand("run", "Run a phantom/noise/solve experiment from a JSON config");
  run->add_option("--config", config_path, "experiment config (JSON)")->required();
  run->add_option("--output-dir", output_dir, "override the config's output_dir");

  std::uint64_t seed = 20240101;
  int trials = 1000;
  auto* verify = app.add_subcommand("verify-bounds", "Check the analytic stability bounds");
  verify->add_option("--trials", trials, "random step profiles per suite");
  verify->add_option("--seed", seed, "RNG seed");

  std::string name = "nested-annuli", spec_path, out, format = "csv";
  int n = 128;
  auto* phantom = app.add_subcommand("phantom", "Rasterize a phantom onto the (r,z) grid");
  phantom->add_option("--name", name, "built-in phantom: nested-annuli | four-blobs");
  phantom->add_option("--spec", spec_path, "phantom JSON instead of a built-in name");
  phantom->add_option("--n", n, "radial cell count");
  phantom->add_option("--out", out, "output file")->required();
  phantom->add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, output_dir);
    if (*verify) return cmd_verify(seed, trials);
    if (*phantom) return cmd_phantom(name, spec_path, n, out, format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
