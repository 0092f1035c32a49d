#include "svlab/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "svlab/error.hpp"
#include "svlab/spde_solver.hpp"

namespace svlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& raw) {
  std::string s = trim(raw);
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(key, "expected a finite number, got '" + s + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key, "expected a nonnegative integer, got '" + s + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + s + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  const std::string s = trim(text);
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

struct KeySpec {
  std::string section;
  Setter set;
};

const std::map<std::string, KeySpec>& key_table() {
  static const std::map<std::string, KeySpec> table = [] {
    std::map<std::string, KeySpec> t;
    auto str = [&](const char* sec, const char* key, std::string ExperimentConfig::*m) {
      t[key] = {sec, [m](ExperimentConfig& c, const std::string& v) { c.*m = unquote(v); }};
    };
    auto num = [&](const char* sec, const char* key, double ExperimentConfig::*m) {
      t[key] = {sec, [m, key](ExperimentConfig& c, const std::string& v) { c.*m = parse_double(key, unquote(v)); }};
    };
    auto count = [&](const char* sec, const char* key, std::size_t ExperimentConfig::*m) {
      t[key] = {sec, [m, key](ExperimentConfig& c, const std::string& v) {
                  c.*m = static_cast<std::size_t>(parse_u64(key, unquote(v)));
                }};
    };
    auto list = [&](const char* sec, const char* key, std::vector<double> ExperimentConfig::*m) {
      t[key] = {sec, [m, key](ExperimentConfig& c, const std::string& v) { c.*m = parse_list(key, unquote(v)); }};
    };
    str("run", "subcommand", &ExperimentConfig::subcommand);
    t["seed"] = {"run", [](ExperimentConfig& c, const std::string& v) { c.seed = parse_u64("seed", unquote(v)); }};
    count("run", "n_paths", &ExperimentConfig::n_paths);
    str("run", "output_dir", &ExperimentConfig::output_dir);
    t["emit_plots"] = {"run", [](ExperimentConfig& c, const std::string& v) {
                         c.emit_plots = parse_bool("emit_plots", unquote(v));
                       }};

    num("solver", "epsilon", &ExperimentConfig::epsilon);
    num("solver", "t_final", &ExperimentConfig::t_final);
    count("solver", "n_steps", &ExperimentConfig::n_steps);
    count("solver", "n_cells", &ExperimentConfig::n_cells);
    num("solver", "half_width", &ExperimentConfig::half_width);
    t["boundary"] = {"solver", [](ExperimentConfig& c, const std::string& v) {
                       const std::string s = unquote(v);
                       if (s == "periodic") {
                         c.boundary = Boundary::periodic;
                       } else if (s == "dirichlet_zero") {
                         c.boundary = Boundary::dirichlet_zero;
                       } else {
                         throw ConfigError("boundary", "expected periodic or dirichlet_zero, got '" + s + "'");
                       }
                     }};
    str("solver", "ic", &ExperimentConfig::ic);
    num("solver", "u_bound", &ExperimentConfig::u_bound);
    count("solver", "saved_rows", &ExperimentConfig::saved_rows);

    str("model", "flux", &ExperimentConfig::flux);
    str("model", "entropy", &ExperimentConfig::entropy);
    str("model", "weight", &ExperimentConfig::weight);
    num("model", "weight_N", &ExperimentConfig::weight_n);
    str("model", "noise", &ExperimentConfig::noise);
    num("model", "noise_K", &ExperimentConfig::noise_k);
    str("model", "kernel", &ExperimentConfig::kernel);

    list("study", "epsilon_list", &ExperimentConfig::epsilon_list);
    list("study", "delta_list", &ExperimentConfig::delta_list);
    list("study", "z_list", &ExperimentConfig::z_list);
    list("study", "time_delta_list", &ExperimentConfig::time_delta_list);
    num("study", "moment_p", &ExperimentConfig::moment_p);
    num("study", "moment_r", &ExperimentConfig::moment_r);
    num("study", "mu_p", &ExperimentConfig::mu_p);

    count("interaction", "levels", &ExperimentConfig::levels);
    count("interaction", "base_steps", &ExperimentConfig::base_steps);
    count("interaction", "shift_cells", &ExperimentConfig::shift_cells);
    count("interaction", "windows", &ExperimentConfig::windows);

    num("lemma", "lattice_half_width", &ExperimentConfig::lattice_half_width);
    num("lemma", "lattice_step", &ExperimentConfig::lattice_step);

    num("weights", "z_max", &ExperimentConfig::z_max);
    num("weights", "radius", &ExperimentConfig::radius);
    return t;
  }();
  return table;
}

void apply(ExperimentConfig& cfg, const std::string& section, const std::string& key, const std::string& value) {
  const auto& table = key_table();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError(key, "unknown key");
  if (!section.empty() && section != it->second.section) {
    throw ConfigError(key, "belongs in section [" + it->second.section + "], found in [" + section + "]");
  }
  it->second.set(cfg, value);
}

std::string list_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_double(v[i]);
  }
  return s;
}

bool is_subcommand(const std::string& s) {
  return std::find(std::begin(kSubcommands), std::end(kSubcommands), s) != std::end(kSubcommands);
}

void check_increasing(const std::vector<double>& v, const char* key) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) throw ConfigError(key, "must be strictly increasing");
  }
}

void check_aligned(const std::vector<double>& v, const GridSpec& grid, const char* key) {
  for (double d : v) {
    if (!grid.is_aligned(d)) throw ConfigError(key, "value " + format_double(d) + " is not a multiple of dx");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

ExperimentConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("<file>", e.message() + " at line " + std::to_string(e.line()));
  }
  ExperimentConfig cfg;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      apply(cfg, "", name, node.data());
      continue;
    }
    if (name == "manifest") continue;
    for (const auto& [key, leaf] : node) apply(cfg, name, key, leaf.data());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  return parse_config(in);
}

void validate_config(const ExperimentConfig& c) {
  if (!c.subcommand.empty() && !is_subcommand(c.subcommand)) {
    throw ConfigError("subcommand", "unknown subcommand '" + c.subcommand + "'");
  }
  if (c.n_paths == 0) throw ConfigError("n_paths", "must be at least 1");
  if (!(c.epsilon > 0.0)) throw ConfigError("epsilon", "must be positive");
  if (!(c.t_final > 0.0)) throw ConfigError("t_final", "must be positive");
  if (c.n_cells < 16) throw ConfigError("n_cells", "must be at least 16");
  if (!(c.half_width > 0.0)) throw ConfigError("half_width", "must be positive");
  std::optional<GridSpec> grid;
  try {
    grid.emplace(c.grid());
  } catch (const InvalidInput& e) {
    throw ConfigError("n_cells", e.what());
  }
  if (!is_known_initial_condition(c.ic)) throw ConfigError("ic", "unknown initial condition '" + c.ic + "'");
  if (!(c.u_bound > 0.0)) throw ConfigError("u_bound", "must be positive");

  if (c.flux != "burgers" && c.flux != "quartic" && c.flux != "zero") {
    throw ConfigError("flux", "expected burgers, quartic or zero, got '" + c.flux + "'");
  }
  if (c.entropy.rfind("power:", 0) == 0) {
    const double p0 = parse_double("entropy", c.entropy.substr(6));
    if (!(p0 >= 2.0)) throw ConfigError("entropy", "power entropy needs p0 >= 2");
  } else if (c.entropy != "same-as-flux" && c.entropy != "linear") {
    throw ConfigError("entropy", "expected same-as-flux, power:p0 or linear, got '" + c.entropy + "'");
  }
  if (c.entropy == "same-as-flux" && c.flux == "zero") {
    throw ConfigError("entropy", "same-as-flux needs a nonzero flux");
  }
  if (c.weight == "power") {
    if (!(c.weight_n > 0.5)) throw ConfigError("weight_N", "power weight needs N > 1/2");
  } else if (c.weight != "constant") {
    throw ConfigError("weight", "expected power or constant, got '" + c.weight + "'");
  }
  if (c.noise != "zero" && c.noise != "additive" && c.noise != "multiplicative") {
    throw ConfigError("noise", "expected zero, additive or multiplicative, got '" + c.noise + "'");
  }
  if (!(c.noise_k >= 0.0)) throw ConfigError("noise_K", "must be nonnegative");
  if (c.kernel != "friedrichs") throw ConfigError("kernel", "only friedrichs is available");

  for (double e : c.epsilon_list) {
    if (!(e > 0.0)) throw ConfigError("epsilon_list", "entries must be positive");
  }
  for (std::size_t i = 1; i < c.epsilon_list.size(); ++i) {
    if (!(c.epsilon_list[i] < c.epsilon_list[i - 1])) throw ConfigError("epsilon_list", "must be strictly decreasing");
  }
  check_increasing(c.delta_list, "delta_list");
  check_aligned(c.delta_list, *grid, "delta_list");
  for (double d : c.delta_list) {
    if (!(d > 0.0)) throw ConfigError("delta_list", "entries must be positive");
  }
  check_increasing(c.z_list, "z_list");
  check_aligned(c.z_list, *grid, "z_list");
  for (double z : c.z_list) {
    if (!(std::abs(z) < 1.0)) throw ConfigError("z_list", "entries must satisfy |z| < 1");
  }
  check_increasing(c.time_delta_list, "time_delta_list");
  for (double d : c.time_delta_list) {
    if (!(d > 0.0) || !(d < c.t_final)) throw ConfigError("time_delta_list", "entries must lie in (0, t_final)");
  }
  if (!(c.moment_p >= 1.0)) throw ConfigError("moment_p", "must be at least 1");
  if (!(c.moment_r >= 1.0)) throw ConfigError("moment_r", "must be at least 1");
  if (!(c.mu_p >= 1.0)) throw ConfigError("mu_p", "must be at least 1");

  if (c.levels < 2) throw ConfigError("levels", "need at least two refinement levels");
  if (c.windows == 0 || c.base_steps % c.windows != 0) throw ConfigError("windows", "must divide base_steps");
  if (!(static_cast<double>(c.shift_cells) * grid->dx() < 1.0)) throw ConfigError("shift_cells", "shift must stay below 1");

  if (!(c.lattice_half_width > 0.0) || !(c.lattice_step > 0.0)) {
    throw ConfigError("lattice_step", "lattice needs a positive half width and step");
  }
  const double nodes = c.lattice_half_width / c.lattice_step;
  if (std::abs(nodes - std::round(nodes)) > 1e-9 * std::max(1.0, nodes)) {
    throw ConfigError("lattice_step", "must divide lattice_half_width");
  }
  if (!(c.z_max > 0.0) || c.z_max > 1.0) throw ConfigError("z_max", "must lie in (0, 1]");
  if (!(c.radius >= c.z_max)) throw ConfigError("radius", "must be at least z_max");
}

std::string to_manifest(const ExperimentConfig& c, const std::vector<std::string>& artifacts) {
  std::ostringstream os;
  os << "[run]\n"
     << "subcommand = " << c.subcommand << "\n"
     << "seed = " << c.seed << "\n"
     << "n_paths = " << c.n_paths << "\n"
     << "output_dir = " << c.output_dir << "\n"
     << "emit_plots = " << (c.emit_plots ? "true" : "false") << "\n\n"
     << "[solver]\n"
     << "epsilon = " << format_double(c.epsilon) << "\n"
     << "t_final = " << format_double(c.t_final) << "\n"
     << "n_steps = " << c.n_steps << "\n"
     << "n_cells = " << c.n_cells << "\n"
     << "half_width = " << format_double(c.half_width) << "\n"
     << "boundary = " << (c.boundary == Boundary::periodic ? "periodic" : "dirichlet_zero") << "\n"
     << "ic = " << c.ic << "\n"
     << "u_bound = " << format_double(c.u_bound) << "\n"
     << "saved_rows = " << c.saved_rows << "\n\n"
     << "[model]\n"
     << "flux = " << c.flux << "\n"
     << "entropy = " << c.entropy << "\n"
     << "weight = " << c.weight << "\n"
     << "weight_N = " << format_double(c.weight_n) << "\n"
     << "noise = " << c.noise << "\n"
     << "noise_K = " << format_double(c.noise_k) << "\n"
     << "kernel = " << c.kernel << "\n\n"
     << "[study]\n"
     << "epsilon_list = " << list_text(c.epsilon_list) << "\n"
     << "delta_list = " << list_text(c.delta_list) << "\n"
     << "z_list = " << list_text(c.z_list) << "\n"
     << "time_delta_list = " << list_text(c.time_delta_list) << "\n"
     << "moment_p = " << format_double(c.moment_p) << "\n"
     << "moment_r = " << format_double(c.moment_r) << "\n"
     << "mu_p = " << format_double(c.mu_p) << "\n\n"
     << "[interaction]\n"
     << "levels = " << c.levels << "\n"
     << "base_steps = " << c.base_steps << "\n"
     << "shift_cells = " << c.shift_cells << "\n"
     << "windows = " << c.windows << "\n\n"
     << "[lemma]\n"
     << "lattice_half_width = " << format_double(c.lattice_half_width) << "\n"
     << "lattice_step = " << format_double(c.lattice_step) << "\n\n"
     << "[weights]\n"
     << "z_max = " << format_double(c.z_max) << "\n"
     << "radius = " << format_double(c.radius) << "\n";
  if (!artifacts.empty()) {
    os << "\n[manifest]\n";
    for (std::size_t i = 0; i < artifacts.size(); ++i) os << "artifact_" << i << " = " << artifacts[i] << "\n";
  }
  return os.str();
}

}  // namespace svlab
