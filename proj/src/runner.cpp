#include "tclprep/runner.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <semaphore>
#include <sstream>

#include "tclprep/csv.hpp"
#include "tclprep/version.hpp"

namespace tclprep::cli {

namespace {

struct PointResult {
  csvio::Table trajectory;
  csvio::Table coefficients;  // only filled when requested
  double sweep_value = std::numeric_limits<double>::quiet_NaN();
  evolve::JoltMetrics metrics;
  double gamma_inf = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> warnings;
};

csvio::Table trajectory_table(const evolve::Trajectory& t) {
  csvio::Table table;
  table.header = {"t", "p_e", "re_rho01", "im_rho01", "purity", "gamma"};
  table.columns = {t.times,      t.p_excited, t.coherence_re,
                   t.coherence_im, t.purity,    t.gamma};
  return table;
}

csvio::Table coefficient_table(const scenario::Scenario& s) {
  const double dt = s.effective_dt();
  coeff::Walker walker(s.coefficient(), dt / 2.0);
  const Eigen::Index d = s.dim();
  const std::size_t half_steps =
      2 * std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(s.grid.t_max / dt)));
  const std::size_t stride = std::max<std::size_t>(1, half_steps / 2000);
  csvio::Table table;
  table.header = {"t"};
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) {
      const std::string suffix = std::to_string(a) + std::to_string(b);
      table.header.push_back("re_a" + suffix);
      table.header.push_back("im_a" + suffix);
    }
  table.columns.assign(table.header.size(), {});
  for (std::size_t j = 0; j <= half_steps; ++j) {
    if (j % stride == 0 || j == half_steps) {
      table.columns[0].push_back(walker.time());
      const ops::Mat& a = walker.value();
      std::size_t col = 1;
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) {
          table.columns[col++].push_back(a(r, c).real());
          table.columns[col++].push_back(a(r, c).imag());
        }
    }
    if (j < half_steps) walker.advance();
  }
  return table;
}

PointResult execute_point(const RunConfig& cfg, const std::string& sweep_key,
                          const std::string& sweep_value, bool want_coefficients) {
  PointResult result;
  if (!sweep_value.empty()) {
    try {
      result.sweep_value = std::stod(sweep_value);
    } catch (const std::exception&) {
      result.sweep_value = std::numeric_limits<double>::quiet_NaN();
    }
  }
  const scenario::Scenario s = cfg.build_scenario();
  const evolve::Trajectory traj = evolve::integrate(s);
  result.trajectory = trajectory_table(traj);
  result.gamma_inf = traj.gamma_inf;
  result.warnings = traj.warnings;
  if (want_coefficients) result.coefficients = coefficient_table(s);

  // jolt metrics when the decay-rate series qualifies; otherwise a plain peak
  try {
    result.metrics =
        evolve::jolt_metrics(traj.times, traj.gamma, traj.gamma_inf, s.cutoff());
  } catch (const std::invalid_argument&) {
    evolve::JoltMetrics m;
    for (std::size_t i = 0; i < traj.gamma.size(); ++i)
      if (!std::isnan(traj.gamma[i]) && traj.gamma[i] > m.peak_value) {
        m.peak_value = traj.gamma[i];
        m.peak_time = traj.times[i];
      }
    m.settle_time = std::numeric_limits<double>::quiet_NaN();
    result.metrics = m;
    result.warnings.push_back("series does not qualify for jolt metrics (" + sweep_key +
                              "=" + sweep_value + "); reporting the raw peak");
  }

  if (cfg.cutoff_sensitivity) {
    RunConfig doubled = cfg;
    doubled.cutoff_over_omega *= 2.0;
    doubled.dt_omega = 0.0;  // re-derive the finer grid
    const scenario::Scenario s2 = doubled.build_scenario();
    const evolve::Trajectory traj2 = evolve::integrate(s2);
    evolve::JoltMetrics m2;
    try {
      m2 = evolve::jolt_metrics(traj2.times, traj2.gamma, traj2.gamma_inf, s2.cutoff());
    } catch (const std::invalid_argument&) {
      for (std::size_t i = 0; i < traj2.gamma.size(); ++i)
        if (!std::isnan(traj2.gamma[i]) && traj2.gamma[i] > m2.peak_value) {
          m2.peak_value = traj2.gamma[i];
          m2.peak_time = traj2.times[i];
        }
    }
    result.metrics.cutoff_sensitivity = evolve::relative_peak_change(result.metrics, m2);
  }
  return result;
}

}  // namespace

RunArtifacts run(RunConfig config, const RunOptions& options) {
  for (const auto& o : options.overrides) config.apply_override(o);
  config.validate();
  const std::vector<RunConfig> points = config.expand_sweep();

  // fail before touching the filesystem if any scenario is unbuildable
  for (const auto& p : points) p.build_scenario();

  // worker pool; results are written by this thread only
  static std::counting_semaphore<64> slots(
      std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::future<PointResult>> futures;
  futures.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::string value =
        config.sweep_parameter.empty() ? "" : config.sweep_values[i];
    futures.push_back(std::async(std::launch::async, [&, i, value]() {
      slots.acquire();
      struct Release {
        ~Release() { slots.release(); }
      } release;
      return execute_point(points[i], config.sweep_parameter, value,
                           options.dump_coefficients);
    }));
  }
  std::vector<PointResult> results;
  results.reserve(points.size());
  for (auto& f : futures) results.push_back(f.get());

  RunArtifacts artifacts;
  std::filesystem::create_directories(options.output_dir);
  const std::string stem = config.output_stem;

  csvio::Table summary;
  summary.header = {"run",        "sweep_value",        "peak",
                    "peak_time",  "settle_time",        "gamma_inf",
                    "cutoff_sensitivity"};
  summary.columns.assign(summary.header.size(), {});

  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const auto path = options.output_dir / (stem + "_run" + std::to_string(i) + ".csv");
    csvio::write_csv(path, r.trajectory);
    artifacts.trajectory_files.push_back(path);
    if (options.dump_coefficients) {
      const auto cpath =
          options.output_dir / (stem + "_coeffs_run" + std::to_string(i) + ".csv");
      csvio::write_csv(cpath, r.coefficients);
    }
    summary.columns[0].push_back(static_cast<double>(i));
    summary.columns[1].push_back(r.sweep_value);
    summary.columns[2].push_back(r.metrics.peak_value);
    summary.columns[3].push_back(r.metrics.peak_time);
    summary.columns[4].push_back(r.metrics.settle_time);
    summary.columns[5].push_back(r.gamma_inf);
    summary.columns[6].push_back(r.metrics.cutoff_sensitivity);
    for (const auto& w : r.warnings)
      artifacts.warnings.push_back("run " + std::to_string(i) + ": " + w);
  }

  artifacts.summary_file = options.output_dir / (stem + "_summary.csv");
  csvio::write_csv(artifacts.summary_file, summary);

  if (options.dump_alpha) {
    const scenario::Scenario s = points.front().build_scenario();
    const bath::Correlation corr(s.bath_spec);
    const double lam = s.cutoff();
    csvio::Table alpha_table;
    alpha_table.header = {"t", "re", "im"};
    alpha_table.columns.assign(3, {});
    const int n = 2000;
    for (int i = 0; i <= n; ++i) {
      const double t = 50.0 / lam * i / n;
      const auto v = corr.alpha(t);
      alpha_table.columns[0].push_back(t);
      alpha_table.columns[1].push_back(v.real());
      alpha_table.columns[2].push_back(v.imag());
    }
    csvio::write_csv(options.output_dir / (stem + "_alpha.csv"), alpha_table);

    csvio::Table ft_table;
    ft_table.header = {"omega", "alpha_tilde"};
    ft_table.columns.assign(2, {});
    const int m = 1600;
    for (int i = 0; i <= m; ++i) {
      const double w = -2.0 * lam + 4.0 * lam * i / m;
      ft_table.columns[0].push_back(w);
      ft_table.columns[1].push_back(corr.alpha_tilde(w));
    }
    csvio::write_csv(options.output_dir / (stem + "_alpha_tilde.csv"), ft_table);
  }

  // manifest: a valid config echo; re-running it reproduces the same artifacts
  artifacts.manifest_file = options.output_dir / (stem + "_manifest.cfg");
  {
    std::ofstream out(artifacts.manifest_file, std::ios::binary);
    out << "# tclprep " << version << " run manifest\n";
    out << "# grid.dt_effective_omega = "
        << csvio::format_value(points.front().build_scenario().effective_dt() *
                               config.omega)
        << "\n";
    for (const auto& f : artifacts.trajectory_files)
      out << "# file = " << f.filename().string() << "\n";
    out << config.serialize();
    if (!out) throw std::runtime_error("run: failed writing manifest");
  }
  return artifacts;
}

RunArtifacts run(const std::filesystem::path& config_path, const RunOptions& options) {
  return run(RunConfig::from_file(config_path), options);
}

}  // namespace tclprep::cli
