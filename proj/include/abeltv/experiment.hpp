#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "abeltv/analytic.hpp"
#include "abeltv/grid.hpp"
#include "abeltv/io.hpp"
#include "abeltv/metrics.hpp"
#include "abeltv/operators.hpp"
#include "abeltv/phantoms.hpp"
#include "abeltv/solver.hpp"

namespace abeltv {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// How lambda/tau/gamma in a config are to be read.
enum class ParameterUnits { unit_spacing, h_scaled };

struct RunSpec {
  double variance_fraction = 0.0;
  double lambda = 1.0;
  double tau = 0.2;
  double gamma = 0.2;
  int max_iter = 5000;
  std::uint64_t seed = 0;
  int record_every = 100;
};

struct ExperimentConfig {
  int grid_n = 128;
  PhantomSpec phantom;
  std::string phantom_name;  // empty for inline specs
  std::vector<RunSpec> runs;
  std::string output_dir;  // empty: nothing is written
  ParameterUnits units = ParameterUnits::unit_spacing;

  void validate() const {
    if (runs.empty()) throw ConfigError("config: 'runs' must not be empty");
    if (grid_n < 2) throw ConfigError("config: grid_n must be >= 2");
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& r = runs[i];
      if (!(r.lambda > 0 && r.tau > 0 && r.gamma > 0 && r.max_iter >= 1 && r.record_every >= 1 &&
            r.variance_fraction >= 0))
        throw ConfigError("config: run " + std::to_string(i) + " has non-positive parameters");
    }
  }

  SolverParams solver_params(const RunSpec& r, double h) const {
    if (units == ParameterUnits::unit_spacing)
      return SolverParams::from_unit_spacing(r.lambda, r.tau, r.gamma, h, r.max_iter,
                                             r.record_every);
    return {r.lambda, r.tau, r.gamma, r.max_iter, r.record_every};
  }
};

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    cfg.grid_n = j.value("grid_n", 128);
    const auto& ph = j.at("phantom");
    if (ph.is_string()) {
      cfg.phantom_name = ph.get<std::string>();
      cfg.phantom = builtin_phantom(cfg.phantom_name);
    } else {
      cfg.phantom = io::phantom_from_json(ph);
    }
    cfg.output_dir = j.value("output_dir", std::string());
    const auto units = j.value("parameter_units", std::string("unit_spacing"));
    if (units == "unit_spacing") cfg.units = ParameterUnits::unit_spacing;
    else if (units == "h_scaled") cfg.units = ParameterUnits::h_scaled;
    else throw ConfigError("config: parameter_units must be unit_spacing or h_scaled");
    for (const auto& r : j.at("runs")) {
      RunSpec rs;
      rs.variance_fraction = r.at("variance_fraction").get<double>();
      rs.lambda = r.at("lambda").get<double>();
      rs.tau = r.at("tau").get<double>();
      rs.gamma = r.at("gamma").get<double>();
      rs.max_iter = r.at("max_iter").get<int>();
      rs.seed = r.value("seed", std::uint64_t{0});
      rs.record_every = r.value("record_every", 100);
      cfg.runs.push_back(rs);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

struct RunOutcome {
  RunSpec spec;
  std::string status;  // "ok", "diverged@<iter>" or "degenerate"
  std::optional<BoundReport> report;
  double energy_final = std::nan("");
  int iterations = 0;
  double wall_seconds = 0.0;

  bool ok() const { return status == "ok"; }
};

inline const char* kResultsHeader =
    "sigma2_frac,err_l2_uh,resid_l2_vh,M1,c,M,c_star,energy_final,iterations,status";

inline void write_results_csv(std::ostream& os, const std::vector<RunOutcome>& outcomes) {
  os << kResultsHeader << '\n';
  for (const auto& o : outcomes) {
    auto num = [](double v) { return std::isfinite(v) ? io::format_double(v) : std::string("nan"); };
    const BoundReport r = o.report.value_or(BoundReport{NAN, NAN, NAN, NAN, NAN, NAN, NAN});
    os << num(o.spec.variance_fraction) << ',' << num(r.err_l2_uh) << ',' << num(r.resid_l2_vh)
       << ',' << num(r.M1) << ',' << num(r.c) << ',' << num(r.M) << ',' << num(r.c_star) << ','
       << num(o.energy_final) << ',' << o.iterations << ',' << o.status << '\n';
  }
}

/// Phantom -> project -> noise -> solve -> report for every run in the config.
inline std::vector<RunOutcome> run_experiment(const ExperimentConfig& cfg,
                                              std::ostream* log = nullptr) {
  cfg.validate();
  namespace fs = std::filesystem;
  const auto [g, g3] = make_grids(cfg.grid_n);
  const RadialField u0 = rasterize_phantom(cfg.phantom, g);
  const AbelMatrix a = build_abel_matrix(g);
  const ProjectionField f0 = apply_abel(a, u0);

  const bool write = !cfg.output_dir.empty();
  if (write) {
    fs::create_directories(cfg.output_dir);
    io::save_field_csv((fs::path(cfg.output_dir) / "u0.csv").string(), u0);
    io::save_field_csv((fs::path(cfg.output_dir) / "f0.csv").string(), f0);
  }

  std::vector<RunOutcome> outcomes;
  for (std::size_t i = 0; i < cfg.runs.size(); ++i) {
    const RunSpec& rs = cfg.runs[i];
    RunOutcome out{rs, "ok", std::nullopt};
    const ProjectionField f = add_noise(f0, {rs.variance_fraction, rs.seed});
    const fs::path run_dir = fs::path(cfg.output_dir) / ("run_" + std::to_string(i));
    if (write) {
      fs::create_directories(run_dir);
      io::save_field_csv((run_dir / "f.csv").string(), f);
    }
    try {
      const SolveResult sol = solve_tv(a, f, cfg.solver_params(rs, g.h));
      out.energy_final = sol.final_energy;
      out.iterations = sol.iterations_run;
      out.wall_seconds = sol.wall_time.count();
      const ProjectionField f_star = apply_abel(a, sol.u_star);
      if (write) {
        io::save_field_csv((run_dir / "u_star.csv").string(), sol.u_star);
        io::save_field_csv((run_dir / "f_star.csv").string(), f_star);
        std::ofstream es(run_dir / "energy.csv");
        io::write_energy_trace_csv(es, sol.energy_trace);
        std::ofstream meta(run_dir / "meta.json");
        meta << nlohmann::json{{"noise_norm_source", "realized"},
                               {"variance_fraction", rs.variance_fraction},
                               {"seed", rs.seed}}
                    .dump(2)
             << '\n';
      }
      out.report = bound_report(sol.u_star, u0, f_star, f, f0, g3);
    } catch (const DivergedError& e) {
      out.status = "diverged@" + std::to_string(e.iteration());
      out.iterations = e.iteration();
    } catch (const DegenerateInstance&) {
      out.status = "degenerate";
    }
    if (log) {
      *log << "run " << i << ": sigma2_frac=" << rs.variance_fraction << " status=" << out.status;
      if (out.report) *log << " err=" << out.report->err_l2_uh << " C*=" << out.report->c_star;
      *log << '\n';
    }
    outcomes.push_back(std::move(out));
  }

  if (write) {
    std::ofstream rs(fs::path(cfg.output_dir) / "results.csv");
    write_results_csv(rs, outcomes);
  }
  return outcomes;
}

// ---------------------------------------------------------------------------
// Analytic bound verification

struct BoundCheck {
  std::string name;
  double max_ratio;  // left side / right side, or error / tolerance
  bool passed() const { return max_ratio <= 1.0; }
};

struct VerifySummary {
  std::vector<BoundCheck> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed(); });
  }
};

/// ||g_k||_{L1} and ||g_k||_{L2} with g_k = J v_k evaluated by quadrature.
struct IndicatorNorms {
  double l1_g;
  double l2_g;
};

inline IndicatorNorms indicator_norms_by_quadrature(double k) {
  const auto fam = indicator_family(k);
  const double end = fam.profile.support_end();
  const double l1 =
      integrate_pieces([&](double x) { return std::abs(j_transform(fam.profile, x)); }, 0.0, end);
  const double l2sq = integrate_pieces(
      [&](double x) {
        const double g = j_transform(fam.profile, x);
        return g * g;
      },
      0.0, end);
  return {l1, std::sqrt(l2sq)};
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline VerifySummary verify_bounds(std::uint64_t seed, int trials) {
  if (trials < 1) throw std::invalid_argument("verify_bounds: trials must be >= 1");
  const BoundConstants bc = bound_constants();
  VerifySummary sum;

  double l2_prod = 0, l1_prod = 0, young2 = 0, young1 = 0;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const auto v = random_step_profile(rng);
    const double tv = v.total_variation();
    const double jl1 = j_norm_l1(v), jl2 = j_norm_l2(v);
    l2_prod = std::max(l2_prod, v.norm_l2() / (bc.c_l2_2d * std::sqrt(tv) * std::sqrt(jl2)));
    l1_prod = std::max(l1_prod,
                       v.norm_l1() / (bc.c_l1_2d * std::cbrt(tv) * std::pow(jl1, 2.0 / 3.0)));
    young2 = std::max(young2, jl2 / (bc.young_l2 * tv));
    young1 = std::max(young1, jl1 / (bc.young_l1 * tv));
  }
  sum.checks.push_back({"l2_product_bound", l2_prod});
  sum.checks.push_back({"l1_product_bound", l1_prod});
  sum.checks.push_back({"young_l2", young2});
  sum.checks.push_back({"young_l1", young1});

  const std::vector<double> ks{1, 2, 4, 8, 16};
  std::vector<double> v_l2, g_l1, g_l2;
  double indicator_ratio = 0;
  for (double k : ks) {
    const auto fam = indicator_family(k);
    const auto nq = indicator_norms_by_quadrature(k);
    v_l2.push_back(fam.profile.norm_l2());
    g_l1.push_back(nq.l1_g);
    g_l2.push_back(nq.l2_g);
    indicator_ratio = std::max(
        indicator_ratio, fam.profile.norm_l2() /
                             (bc.c_l2_2d * std::sqrt(fam.profile.total_variation() * nq.l2_g)));
  }
  sum.checks.push_back({"indicator_l2_bound", indicator_ratio});
  sum.checks.push_back({"decay_slope_v_l2", std::abs(loglog_slope(ks, v_l2) + 0.5) / 0.02});
  sum.checks.push_back({"decay_slope_g_l1", std::abs(loglog_slope(ks, g_l1) + 1.5) / 0.02});
  sum.checks.push_back({"decay_slope_g_l2", std::abs(loglog_slope(ks, g_l2) + 1.0) / 0.02});
  sum.checks.push_back({"sum_bound_witness", g_l2.back() / 0.1});

  // J(J v) = int_x^1 v for v(r) = (1 - r)^2 on [0, 1).
  auto v = [](double r) { return r < 1.0 ? (1.0 - r) * (1.0 - r) : 0.0; };
  double jj = 0;
  for (double x : {0.0, 0.25, 0.5}) {
    const double twice = j_transform([&](double s) { return j_transform(v, s); }, x);
    const double exact = std::pow(1.0 - x, 3) / 3.0;
    jj = std::max(jj, std::abs(twice - exact) / 1e-6);
  }
  sum.checks.push_back({"j_squared_identity", jj});
  return sum;
}

}  // namespace abeltv
