#include "catbranch/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <tuple>

#include "catbranch/errors.hpp"
#include "catbranch/util.hpp"

namespace catbranch {

namespace {

std::vector<double> default_snapshots() {
  std::vector<double> v;
  for (int k = 0; k < 12; ++k) v.push_back(0.505 + 0.5 * k);
  return v;
}

RunConfig base_three_particle() {
  RunConfig cfg;
  cfg.network.n = 3;
  cfg.network.masses = {1.5, 1.0, 1.0};
  cfg.network.external_k = {2.5, 0.0, 0.0};
  cfg.network.coupling_k = RealMatrix(3, 3);
  cfg.network.system_index = 0;
  cfg.cat.d = {-5.0, 6.0, 7.5};
  cfg.cat.sigma = {0.5, 0.5, 0.5};
  cfg.cat.hbar = 1.0;
  cfg.grid = GridSpec{};
  cfg.snapshot_times = default_snapshots();
  return cfg;
}

void set_coupling(RunConfig& cfg, int i, int j, double k) {
  cfg.network.coupling_k(i, j) = k;
  cfg.network.coupling_k(j, i) = k;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& key, const std::string& origin) {
  const char* c = s.c_str();
  char* end = nullptr;
  double v = std::strtod(c, &end);
  if (end == c || *end != '\0' || !std::isfinite(v))
    throw SimError(ErrorCode::ParseError,
                   origin + ": value of '" + key + "' is not a finite number: '" + s + "'");
  return v;
}

long parse_int(const std::string& s, const std::string& key, const std::string& origin) {
  const char* c = s.c_str();
  char* end = nullptr;
  long v = std::strtol(c, &end, 10);
  if (end == c || *end != '\0')
    throw SimError(ErrorCode::ParseError,
                   origin + ": value of '" + key + "' is not an integer: '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s, const std::string& key,
                               const std::string& origin) {
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok, key, origin));
  if (out.empty())
    throw SimError(ErrorCode::ParseError, origin + ": '" + key + "' has no values");
  return out;
}

}  // namespace

std::vector<double> RunConfig::series_times() const {
  if (!(series_dt > 0.0) || !(series_t_max > 0.0))
    throw SimError(ErrorCode::ValidationError, "series step and span must be positive");
  std::vector<double> v;
  long k_last = static_cast<long>(std::floor(series_t_max / series_dt + 1e-9));
  for (long k = 0; k <= k_last; ++k) v.push_back(k * series_dt);
  if (series_t_max - v.back() > 1e-12 * std::max(1.0, series_t_max)) v.push_back(series_t_max);
  return v;
}

std::vector<double> RunConfig::classical_times() const {
  if (!(classical_dt > 0.0) || !(series_t_max > 0.0))
    throw SimError(ErrorCode::ValidationError, "classical step and span must be positive");
  std::vector<double> v;
  long k_last = static_cast<long>(std::floor(series_t_max / classical_dt + 1e-9));
  for (long k = 0; k <= k_last; ++k) v.push_back(k * classical_dt);
  if (series_t_max - v.back() > 1e-12 * std::max(1.0, series_t_max))
    v.push_back(series_t_max);
  return v;
}

std::vector<std::string> preset_names() { return {"weak", "strong", "decoupled"}; }

RunConfig preset_config(const std::string& name) {
  RunConfig cfg = base_three_particle();
  if (name == "weak") {
    set_coupling(cfg, 0, 1, 0.01442);
    set_coupling(cfg, 1, 2, 1.02236);
    set_coupling(cfg, 0, 2, 0.01732);
  } else if (name == "strong") {
    set_coupling(cfg, 0, 1, 0.1442);
    set_coupling(cfg, 1, 2, 1.02236);
    set_coupling(cfg, 0, 2, 0.1732);
  } else if (name == "decoupled") {
    set_coupling(cfg, 0, 1, 0.0);
    set_coupling(cfg, 1, 2, 1.02236);
    set_coupling(cfg, 0, 2, 0.0);
  } else {
    throw SimError(ErrorCode::ParseError, "unknown preset '" + name + "'");
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::string section;
  bool have_preset = false;
  bool any_key = false;

  RunConfig cfg;
  bool have_n = false, have_masses = false, have_d = false;
  std::vector<double> masses, external_k, d, sigma;
  bool have_external = false, have_sigma = false, have_system = false;
  bool have_snapshots = false;
  long n_val = 0, system_val = 1;
  std::vector<std::tuple<int, int, double>> couplings;

  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = origin + ":" + std::to_string(lineno);
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw SimError(ErrorCode::ParseError, where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "network" && section != "cat" && section != "grid" && section != "times")
        throw SimError(ErrorCode::ParseError, where + ": unknown section [" + section + "]");
      continue;
    }

    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw SimError(ErrorCode::ParseError, where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw SimError(ErrorCode::ParseError, where + ": empty key or value");

    if (section.empty()) {
      if (key == "preset") {
        if (any_key || have_preset)
          throw SimError(ErrorCode::ParseError,
                         where + ": 'preset' must be the first setting");
        RunConfig base = preset_config(value);
        cfg = base;
        have_preset = true;
        have_n = have_masses = have_d = true;
        have_external = have_sigma = have_system = have_snapshots = true;
        n_val = base.network.n;
        masses = base.network.masses;
        external_k = base.network.external_k;
        d = base.cat.d;
        sigma = base.cat.sigma;
        system_val = base.network.system_index + 1;
        continue;
      }
      throw SimError(ErrorCode::ParseError,
                     where + ": key '" + key + "' outside any section");
    }
    any_key = true;

    if (section == "network") {
      if (key == "n") {
        n_val = parse_int(value, key, where);
        have_n = true;
      } else if (key == "masses") {
        masses = parse_list(value, key, where);
        have_masses = true;
      } else if (key == "external_k") {
        external_k = parse_list(value, key, where);
        have_external = true;
      } else if (key == "system") {
        system_val = parse_int(value, key, where);
        have_system = true;
      } else if (key.rfind("coupling_", 0) == 0) {
        std::string rest = key.substr(9);
        size_t us = rest.find('_');
        if (us == std::string::npos)
          throw SimError(ErrorCode::ParseError,
                         where + ": coupling key must look like coupling_1_2");
        long i = parse_int(rest.substr(0, us), key, where);
        long j = parse_int(rest.substr(us + 1), key, where);
        couplings.emplace_back(static_cast<int>(i), static_cast<int>(j),
                               parse_double(value, key, where));
      } else {
        throw SimError(ErrorCode::ParseError,
                       where + ": unknown key '" + key + "' in [network]");
      }
    } else if (section == "cat") {
      if (key == "d") {
        d = parse_list(value, key, where);
        have_d = true;
      } else if (key == "sigma") {
        sigma = parse_list(value, key, where);
        have_sigma = true;
      } else if (key == "hbar") {
        cfg.cat.hbar = parse_double(value, key, where);
      } else {
        throw SimError(ErrorCode::ParseError, where + ": unknown key '" + key + "' in [cat]");
      }
    } else if (section == "grid") {
      if (key == "x_min") {
        cfg.grid.x_min = parse_double(value, key, where);
      } else if (key == "x_max") {
        cfg.grid.x_max = parse_double(value, key, where);
      } else if (key == "points") {
        cfg.grid.points = static_cast<int>(parse_int(value, key, where));
      } else {
        throw SimError(ErrorCode::ParseError, where + ": unknown key '" + key + "' in [grid]");
      }
    } else {  // times
      if (key == "snapshots") {
        cfg.snapshot_times = parse_list(value, key, where);
        have_snapshots = true;
      } else if (key == "series_dt") {
        cfg.series_dt = parse_double(value, key, where);
      } else if (key == "series_t_max") {
        cfg.series_t_max = parse_double(value, key, where);
      } else if (key == "classical_dt") {
        cfg.classical_dt = parse_double(value, key, where);
      } else {
        throw SimError(ErrorCode::ParseError, where + ": unknown key '" + key + "' in [times]");
      }
    }
  }

  if (!have_n) throw SimError(ErrorCode::ParseError, origin + ": missing key 'n'");
  if (n_val < 1 || n_val > 30)
    throw SimError(ErrorCode::ParseError, origin + ": 'n' out of range");
  int n = static_cast<int>(n_val);
  if (!have_masses) throw SimError(ErrorCode::ParseError, origin + ": missing key 'masses'");
  if (!have_d) throw SimError(ErrorCode::ParseError, origin + ": missing key 'd'");
  if (static_cast<int>(masses.size()) != n)
    throw SimError(ErrorCode::ParseError, origin + ": 'masses' must list n values");
  if (static_cast<int>(d.size()) != n)
    throw SimError(ErrorCode::ParseError, origin + ": 'd' must list n values");

  if (!have_external) external_k.assign(n, 0.0);
  if (static_cast<int>(external_k.size()) != n)
    throw SimError(ErrorCode::ParseError, origin + ": 'external_k' must list n values");
  if (!have_sigma) sigma.assign(n, 0.5);
  if (sigma.size() == 1 && n > 1) sigma.assign(n, sigma[0]);
  if (static_cast<int>(sigma.size()) != n)
    throw SimError(ErrorCode::ParseError, origin + ": 'sigma' must list 1 or n values");
  if (!have_snapshots && cfg.snapshot_times.empty()) cfg.snapshot_times = default_snapshots();

  cfg.network.n = n;
  cfg.network.masses = masses;
  cfg.network.external_k = external_k;
  cfg.cat.d = d;
  cfg.cat.sigma = sigma;
  if (!have_preset || !couplings.empty() || cfg.network.coupling_k.rows != n) {
    RealMatrix fresh(n, n);
    if (have_preset && cfg.network.coupling_k.rows == n) fresh = cfg.network.coupling_k;
    cfg.network.coupling_k = fresh;
  }
  for (const auto& [i, j, k] : couplings) {
    if (i < 1 || i > n || j < 1 || j > n || i == j)
      throw SimError(ErrorCode::ParseError,
                     origin + ": coupling_" + std::to_string(i) + "_" + std::to_string(j) +
                         " has bad particle indices");
    cfg.network.coupling_k(i - 1, j - 1) = k;
    cfg.network.coupling_k(j - 1, i - 1) = k;
  }
  if (system_val < 1 || system_val > n)
    throw SimError(ErrorCode::ParseError, origin + ": 'system' out of range");
  cfg.network.system_index = static_cast<int>(system_val) - 1;
  (void)have_system;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SimError(ErrorCode::ParseError, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string config_echo(const RunConfig& cfg) {
  std::ostringstream out;
  auto list = [&](const std::vector<double>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) s += ' ';
      s += format_double(v[i]);
    }
    return s;
  };
  int n = cfg.network.n;
  out << "[network]\n";
  out << "n = " << n << "\n";
  out << "masses = " << list(cfg.network.masses) << "\n";
  out << "external_k = " << list(cfg.network.external_k) << "\n";
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (cfg.network.coupling_k(i, j) != 0.0)
        out << "coupling_" << (i + 1) << "_" << (j + 1) << " = "
            << format_double(cfg.network.coupling_k(i, j)) << "\n";
  out << "system = " << (cfg.network.system_index + 1) << "\n";
  out << "[cat]\n";
  out << "d = " << list(cfg.cat.d) << "\n";
  out << "sigma = " << list(cfg.cat.sigma) << "\n";
  out << "hbar = " << format_double(cfg.cat.hbar) << "\n";
  out << "[grid]\n";
  out << "x_min = " << format_double(cfg.grid.x_min) << "\n";
  out << "x_max = " << format_double(cfg.grid.x_max) << "\n";
  out << "points = " << cfg.grid.points << "\n";
  out << "[times]\n";
  out << "snapshots = " << list(cfg.snapshot_times) << "\n";
  out << "series_dt = " << format_double(cfg.series_dt) << "\n";
  out << "series_t_max = " << format_double(cfg.series_t_max) << "\n";
  out << "classical_dt = " << format_double(cfg.classical_dt) << "\n";
  return out.str();
}

std::string extract_config_echo(const std::string& summary_text) {
  const std::string begin = "# --- begin config echo ---\n";
  const std::string end = "# --- end config echo ---";
  size_t b = summary_text.find(begin);
  size_t e = summary_text.find(end);
  if (b == std::string::npos || e == std::string::npos || e < b)
    throw SimError(ErrorCode::ParseError, "summary text has no config echo block");
  b += begin.size();
  return summary_text.substr(b, e - b);
}

bool config_equal(const RunConfig& a, const RunConfig& b) {
  return a.network.n == b.network.n && a.network.masses == b.network.masses &&
         a.network.external_k == b.network.external_k &&
         a.network.coupling_k.a == b.network.coupling_k.a &&
         a.network.system_index == b.network.system_index && a.cat.d == b.cat.d &&
         a.cat.sigma == b.cat.sigma && a.cat.hbar == b.cat.hbar &&
         a.grid.x_min == b.grid.x_min && a.grid.x_max == b.grid.x_max &&
         a.grid.points == b.grid.points && a.snapshot_times == b.snapshot_times &&
         a.series_dt == b.series_dt && a.series_t_max == b.series_t_max &&
         a.classical_dt == b.classical_dt;
}

}  // namespace catbranch
