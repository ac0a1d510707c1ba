#include "tclprep/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tclprep/csv.hpp"

namespace tclprep::cli {

namespace {

using Mat = ops::Mat;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  if (value == "inf" || value == "+inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": expected a number, got '" + value + "'");
  }
  if (used != value.size())
    throw std::invalid_argument(key + ": trailing characters in '" + value + "'");
  return v;
}

long parse_long(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": expected an integer, got '" + value + "'");
  }
  if (used != value.size())
    throw std::invalid_argument(key + ": trailing characters in '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument(key + ": expected true/false, got '" + value + "'");
}

std::vector<std::string> parse_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

const std::set<std::string> sweepable_keys = {
    "scenario.kind",          "scenario.omega",
    "scenario.cutoff_over_omega", "scenario.eta",
    "scenario.beta_omega",    "scenario.coupling",
    "scenario.initial_state", "scenario.preparation",
    "scenario.switch_tau_s_lambda", "scenario.freeze_depth_over_cutoff",
    "scenario.flip_target",   "scenario.prep_time_omega",
};

ops::Vec parse_pure_state(const std::string& name, const Mat& h_post) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h_post);
  if (name == "excited") return es.eigenvectors().col(h_post.rows() - 1);
  if (name == "ground") return es.eigenvectors().col(0);
  if (name == "plus") {
    ops::Vec v = es.eigenvectors().col(h_post.rows() - 1) + es.eigenvectors().col(0);
    return v / v.norm();
  }
  throw std::invalid_argument("initial_state: '" + name + "' is not a pure state name");
}

Mat parse_state(const std::string& name, const Mat& h_post) {
  if (name.rfind("mixed:", 0) == 0) {
    const double p = parse_double("initial_state", name.substr(6));
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("initial_state: mixed weight must lie in [0, 1]");
    Eigen::SelfAdjointEigenSolver<Mat> es(h_post);
    const ops::Vec e = es.eigenvectors().col(h_post.rows() - 1);
    const ops::Vec g = es.eigenvectors().col(0);
    return p * ops::projector(e) + (1.0 - p) * ops::projector(g);
  }
  return ops::projector(parse_pure_state(name, h_post));
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "scenario.kind") kind = value;
  else if (key == "scenario.omega") omega = parse_double(key, value);
  else if (key == "scenario.cutoff_over_omega") cutoff_over_omega = parse_double(key, value);
  else if (key == "scenario.eta") eta = parse_double(key, value);
  else if (key == "scenario.beta_omega") beta_omega = parse_double(key, value);
  else if (key == "scenario.coupling") coupling = value;
  else if (key == "scenario.initial_state") initial_state = value;
  else if (key == "scenario.preparation") preparation = value;
  else if (key == "scenario.switch_tau_s_lambda") switch_tau_s_lambda = parse_double(key, value);
  else if (key == "scenario.freeze_depth_over_cutoff") freeze_depth_over_cutoff = parse_double(key, value);
  else if (key == "scenario.flip_target") flip_target = value;
  else if (key == "scenario.prep_time_omega") prep_time_omega = parse_double(key, value);
  else if (key == "grid.t_max_omega") t_max_omega = parse_double(key, value);
  else if (key == "grid.dt_omega") dt_omega = parse_double(key, value);
  else if (key == "grid.store_stride") store_stride = static_cast<int>(parse_long(key, value));
  else if (key == "grid.error_check") error_check = parse_bool(key, value);
  else if (key == "metrics.cutoff_sensitivity") cutoff_sensitivity = parse_bool(key, value);
  else if (key == "sweep.parameter") sweep_parameter = value;
  else if (key == "sweep.values") sweep_values = parse_list(value);
  else if (key == "output.stem") output_stem = value;
  else if (key == "run.seed") seed = parse_long(key, value);
  else throw std::invalid_argument("unknown key '" + key + "'");
}

RunConfig RunConfig::from_string(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string raw;
  int line_no = 0;
  std::set<std::string> seen;
  while (std::getline(ss, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value'", line_no, 1);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const int col = static_cast<int>(line.find_first_not_of(" \t")) + 1;
    if (key.empty()) throw ConfigError("missing key", line_no, col);
    if (!seen.insert(key).second)
      throw ConfigError("duplicate key '" + key + "'", line_no, col);
    try {
      cfg.set(key, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line_no, col);
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

void RunConfig::apply_override(const std::string& key_equals_value) {
  const auto eq = key_equals_value.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("override must be key=value: '" + key_equals_value + "'");
  set(trim(key_equals_value.substr(0, eq)), trim(key_equals_value.substr(eq + 1)));
}

void RunConfig::validate() const {
  const std::set<std::string> kinds = {"factorized", "switched", "equilibrium_prepared",
                                       "nonequilibrium_prepared"};
  if (!kinds.count(kind)) throw std::invalid_argument("scenario.kind: unknown '" + kind + "'");
  const std::set<std::string> couplings = {"sigma_x", "sigma_y", "sigma_z"};
  if (!couplings.count(coupling))
    throw std::invalid_argument("scenario.coupling: unknown '" + coupling + "'");
  const std::set<std::string> preparations = {"freezing", "equilibration", "decoherence"};
  if (!preparations.count(preparation))
    throw std::invalid_argument("scenario.preparation: unknown '" + preparation + "'");
  if (!(omega > 0)) throw std::invalid_argument("scenario.omega must be positive");
  if (!(cutoff_over_omega > 0))
    throw std::invalid_argument("scenario.cutoff_over_omega must be positive");
  if (!(eta >= 0)) throw std::invalid_argument("scenario.eta must be non-negative");
  if (!(beta_omega > 0)) throw std::invalid_argument("scenario.beta_omega must be positive");
  if (switch_tau_s_lambda < 0)
    throw std::invalid_argument("scenario.switch_tau_s_lambda must be non-negative");
  if (!(freeze_depth_over_cutoff > 0))
    throw std::invalid_argument("scenario.freeze_depth_over_cutoff must be positive");
  if (!(prep_time_omega > 0))
    throw std::invalid_argument("scenario.prep_time_omega must be positive");
  if (!(t_max_omega > 0)) throw std::invalid_argument("grid.t_max_omega must be positive");
  if (dt_omega < 0) throw std::invalid_argument("grid.dt_omega must be non-negative");
  if (store_stride < 0) throw std::invalid_argument("grid.store_stride must be non-negative");
  if (!sweep_parameter.empty()) {
    if (!sweepable_keys.count(sweep_parameter))
      throw std::invalid_argument("sweep.parameter: '" + sweep_parameter +
                                  "' is not sweepable");
    if (sweep_values.empty())
      throw std::invalid_argument("sweep.values must be non-empty when sweeping");
  }
  if (output_stem.empty()) throw std::invalid_argument("output.stem must be non-empty");
}

std::string RunConfig::serialize() const {
  std::stringstream out;
  const auto num = [](double v) { return csvio::format_value(v); };
  out << "scenario.kind = " << kind << "\n";
  out << "scenario.omega = " << num(omega) << "\n";
  out << "scenario.cutoff_over_omega = " << num(cutoff_over_omega) << "\n";
  out << "scenario.eta = " << num(eta) << "\n";
  out << "scenario.beta_omega = " << (std::isinf(beta_omega) ? "inf" : num(beta_omega)) << "\n";
  out << "scenario.coupling = " << coupling << "\n";
  out << "scenario.initial_state = " << initial_state << "\n";
  out << "scenario.preparation = " << preparation << "\n";
  out << "scenario.switch_tau_s_lambda = " << num(switch_tau_s_lambda) << "\n";
  out << "scenario.freeze_depth_over_cutoff = " << num(freeze_depth_over_cutoff) << "\n";
  out << "scenario.flip_target = " << flip_target << "\n";
  out << "scenario.prep_time_omega = " << num(prep_time_omega) << "\n";
  out << "grid.t_max_omega = " << num(t_max_omega) << "\n";
  out << "grid.dt_omega = " << num(dt_omega) << "\n";
  out << "grid.store_stride = " << store_stride << "\n";
  out << "grid.error_check = " << (error_check ? "true" : "false") << "\n";
  out << "metrics.cutoff_sensitivity = " << (cutoff_sensitivity ? "true" : "false") << "\n";
  if (!sweep_parameter.empty()) {
    out << "sweep.parameter = " << sweep_parameter << "\n";
    out << "sweep.values = ";
    for (std::size_t i = 0; i < sweep_values.size(); ++i)
      out << (i ? ", " : "") << sweep_values[i];
    out << "\n";
  }
  out << "output.stem = " << output_stem << "\n";
  out << "run.seed = " << seed << "\n";
  return out.str();
}

scenario::Scenario RunConfig::build_scenario() const {
  validate();
  const double lambda = cutoff_over_omega * omega;
  const double beta = std::isinf(beta_omega) ? bath::beta_infinite : beta_omega / omega;
  bath::BathSpec bath{{bath::SpectralDensity::Family::OhmicExpCutoff, eta, lambda}, beta};
  const Mat h_post = 0.5 * omega * ops::sigma_z();
  Mat l;
  if (coupling == "sigma_x") l = ops::sigma_x();
  else if (coupling == "sigma_y") l = ops::sigma_y();
  else l = ops::sigma_z();

  scenario::Grid grid;
  grid.t_max = t_max_omega / omega;
  grid.dt = dt_omega > 0 ? dt_omega / omega : 0.0;
  grid.store_stride = store_stride;
  grid.error_check = error_check;

  if (kind == "factorized")
    return scenario::factorized(h_post, l, parse_state(initial_state, h_post), bath, grid);
  if (kind == "switched") {
    coeff::SwitchOn sw{switch_tau_s_lambda / lambda, {}};
    return scenario::switched(h_post, l, parse_state(initial_state, h_post), bath, sw, grid);
  }
  if (kind == "equilibrium_prepared") {
    if (preparation == "freezing")
      return scenario::prepare_by_freezing(parse_pure_state(initial_state, h_post), bath,
                                           h_post, l, grid,
                                           freeze_depth_over_cutoff * lambda);
    if (preparation == "equilibration")
      return scenario::prepare_by_equilibration(parse_state(initial_state, h_post), bath,
                                                h_post, l, grid)
          .first;
    return scenario::prepare_by_decoherence(l, parse_state(initial_state, h_post), bath, grid);
  }
  // nonequilibrium_prepared: finite-window state flip after equilibration
  return scenario::flip_prepared(parse_pure_state(flip_target, h_post),
                                 prep_time_omega / omega, bath, h_post, l, grid);
}

std::vector<RunConfig> RunConfig::expand_sweep() const {
  validate();
  if (sweep_parameter.empty()) return {*this};
  std::vector<RunConfig> points;
  for (const auto& v : sweep_values) {
    RunConfig p = *this;
    p.sweep_parameter.clear();
    p.sweep_values.clear();
    p.set(sweep_parameter, v);
    p.validate();
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace tclprep::cli
