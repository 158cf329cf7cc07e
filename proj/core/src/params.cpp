#include "rydgate/params.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "rydgate/errors.hpp"
#include "rydgate/units.hpp"

namespace rydgate {

std::pair<Manifold, Manifold> RelativeBlockades::key(Manifold a, Manifold b) {
  return a <= b ? std::pair{a, b} : std::pair{b, a};
}

void RelativeBlockades::set(Manifold a, Manifold b, double value) { entries_[key(a, b)] = value; }

bool RelativeBlockades::contains(Manifold a, Manifold b) const {
  return entries_.contains(key(a, b));
}

double RelativeBlockades::at(Manifold a, Manifold b) const {
  if (auto it = entries_.find(key(a, b)); it != entries_.end()) return it->second;
  if (a == Manifold::n || b == Manifold::n) {
    throw ConfigError("relative blockade b_" + std::string(to_string(a)) + "_" +
                      std::string(to_string(b)) + " is not set");
  }
  return at(Manifold::n, a) * at(Manifold::n, b);
}

int PhysicalSetting::principal_number(Manifold m) const {
  switch (m) {
    case Manifold::n: return n;
    case Manifold::n_plus: return n + 1;
    case Manifold::n_minus: return n - 1;
    case Manifold::n_prime: return n_prime;
    case Manifold::n_dprime: return n_dprime;
  }
  return n;
}

double PhysicalSetting::lifetime_us(Level rydberg_level) const {
  if (auto it = lifetime_overrides_us.find(rydberg_level); it != lifetime_overrides_us.end()) {
    return it->second;
  }
  return tau_n_us;
}

double PhysicalSetting::decay_rate(Level rydberg_level) const {
  return lifetime_us_to_rate(lifetime_us(rydberg_level));
}

void PhysicalSetting::validate() const {
  auto fail = [this](const std::string& key, const std::string& what) {
    throw ConfigError("setting '" + name + "': " + key + " " + what);
  };
  if (n <= 1) fail("n", "must be a principal quantum number > 1");
  if (n_prime <= 0) fail("n_prime", "must be positive");
  if (n_dprime <= 0) fail("n_dprime", "must be positive");
  if (!(std::isfinite(tau_n_us) && tau_n_us > 0.0)) fail("tau_n_us", "must be positive");
  for (const auto& [level, tau] : lifetime_overrides_us) {
    if (!is_rydberg(level)) fail("tau_" + std::string(to_string(level)) + "_us", "is not a Rydberg level");
    if (!(std::isfinite(tau) && tau > 0.0)) {
      fail("tau_" + std::string(to_string(level)) + "_us", "must be positive");
    }
  }
  const std::pair<const char*, double> detunings[] = {
      {"delta_plus_GHz", delta_plus},         {"delta_minus_GHz", delta_minus},
      {"delta_p1_half_GHz", delta_p1_half},   {"delta_p3_half_GHz", delta_p3_half},
      {"delta_pp1_half_GHz", delta_pp1_half}, {"delta_pp3_half_GHz", delta_pp3_half}};
  for (const auto& [key, value] : detunings) {
    if (!std::isfinite(value) || value == 0.0) fail(key, "must be finite and nonzero");
  }
  if (!std::isfinite(b0) || b0 < 0.0) fail("b0_GHz", "must be finite and non-negative");
  if (!std::isfinite(omega_q) || omega_q <= 0.0) fail("omega_q_GHz", "must be positive");
  if (!(p_half_suppression >= 0.0 && std::isfinite(p_half_suppression))) {
    fail("p_half_suppression", "must be finite and non-negative");
  }
  for (auto [key, value] : {std::pair{"decay_branch_g", decay_branch_g},
                            std::pair{"decay_branch_0", decay_branch_0},
                            std::pair{"decay_branch_1", decay_branch_1}}) {
    if (!(value >= 0.0 && value <= 1.0)) fail(key, "must lie in [0, 1]");
  }
  if (std::abs(decay_branch_g + decay_branch_0 + decay_branch_1 - 1.0) > 1e-15) {
    fail("decay_branch_*", "must sum to 1");
  }
  for (Manifold m : kAllManifolds) {
    if (!rel_blockades.contains(Manifold::n, m)) {
      fail("b_n_" + std::string(to_string(m)), "is required");
    }
  }
  for (const auto& [pair, value] : rel_blockades.explicit_entries()) {
    if (!std::isfinite(value)) {
      fail("b_" + std::string(to_string(pair.first)) + "_" + std::string(to_string(pair.second)),
           "must be finite");
    }
  }
}

namespace {

struct TableRow {
  const char* name;
  int n, n_prime, n_dprime;
  double tau_us;
  double plus, minus, p1, p3, pp1, pp3, b0;  // GHz
};

// System parameters for Cs np3/2 single-photon excitation at 300 K.
constexpr TableRow kTable[] = {
    {"S1", 107, 106, 105, 538.0, -5.534, 5.694, -2.961, -3.161, 3.256, 3.051, 1.54},
    {"S2", 141, 138, 137, 969.0, -2.507, 2.562, -1.245, -1.333, 1.495, 1.405, 0.68},
};

constexpr double kCsHyperfineGHz = 9.1926;

PhysicalSetting from_row(const TableRow& row) {
  PhysicalSetting s;
  s.name = row.name;
  s.n = row.n;
  s.n_prime = row.n_prime;
  s.n_dprime = row.n_dprime;
  s.tau_n_us = row.tau_us;
  s.delta_plus = ghz_to_angular(row.plus);
  s.delta_minus = ghz_to_angular(row.minus);
  s.delta_p1_half = ghz_to_angular(row.p1);
  s.delta_p3_half = ghz_to_angular(row.p3);
  s.delta_pp1_half = ghz_to_angular(row.pp1);
  s.delta_pp3_half = ghz_to_angular(row.pp3);
  s.b0 = ghz_to_angular(row.b0);
  s.omega_q = ghz_to_angular(kCsHyperfineGHz);
  s.rel_blockades.set(Manifold::n, Manifold::n, 1.0);
  s.rel_blockades.set(Manifold::n, Manifold::n_prime, 0.85);
  s.rel_blockades.set(Manifold::n, Manifold::n_dprime, 0.80);
  s.rel_blockades.set(Manifold::n, Manifold::n_plus, 1.02);
  s.rel_blockades.set(Manifold::n, Manifold::n_minus, 0.97);
  return s;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError("setting file: key '" + std::string(key) + "' has non-numeric value '" +
                      std::string(text) + "'");
  }
  return value;
}

int parse_int(std::string_view key, std::string_view text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("setting file: key '" + std::string(key) + "' expects an integer, got '" +
                      std::string(text) + "'");
  }
  return value;
}

using Setter = std::function<void(PhysicalSetting&, std::string_view key, std::string_view value)>;

Setter ghz_field(double PhysicalSetting::*field) {
  return [field](PhysicalSetting& s, std::string_view key, std::string_view v) {
    s.*field = ghz_to_angular(parse_double(key, v));
  };
}

Setter double_field(double PhysicalSetting::*field) {
  return [field](PhysicalSetting& s, std::string_view key, std::string_view v) {
    s.*field = parse_double(key, v);
  };
}

Setter int_field(int PhysicalSetting::*field) {
  return [field](PhysicalSetting& s, std::string_view key, std::string_view v) {
    s.*field = parse_int(key, v);
  };
}

const std::map<std::string, Setter, std::less<>>& scalar_setters() {
  static const std::map<std::string, Setter, std::less<>> setters = {
      {"name", [](PhysicalSetting& s, std::string_view, std::string_view v) { s.name = v; }},
      {"n", int_field(&PhysicalSetting::n)},
      {"n_prime", int_field(&PhysicalSetting::n_prime)},
      {"n_dprime", int_field(&PhysicalSetting::n_dprime)},
      {"tau_n_us", double_field(&PhysicalSetting::tau_n_us)},
      {"delta_plus_GHz", ghz_field(&PhysicalSetting::delta_plus)},
      {"delta_minus_GHz", ghz_field(&PhysicalSetting::delta_minus)},
      {"delta_p1_half_GHz", ghz_field(&PhysicalSetting::delta_p1_half)},
      {"delta_p3_half_GHz", ghz_field(&PhysicalSetting::delta_p3_half)},
      {"delta_pp1_half_GHz", ghz_field(&PhysicalSetting::delta_pp1_half)},
      {"delta_pp3_half_GHz", ghz_field(&PhysicalSetting::delta_pp3_half)},
      {"b0_GHz", ghz_field(&PhysicalSetting::b0)},
      {"omega_q_GHz", ghz_field(&PhysicalSetting::omega_q)},
      {"p_half_suppression", double_field(&PhysicalSetting::p_half_suppression)},
      {"decay_branch_g", double_field(&PhysicalSetting::decay_branch_g)},
      {"decay_branch_0", double_field(&PhysicalSetting::decay_branch_0)},
      {"decay_branch_1", double_field(&PhysicalSetting::decay_branch_1)},
  };
  return setters;
}

// b_<m1>_<m2>, e.g. b_n_nprime or b_nprime_ndprime.
bool apply_blockade_key(PhysicalSetting& s, std::string_view key, std::string_view value) {
  if (!key.starts_with("b_")) return false;
  const auto rest = key.substr(2);
  for (std::size_t split = rest.find('_'); split != std::string_view::npos;
       split = rest.find('_', split + 1)) {
    auto a = manifold_from_string(rest.substr(0, split));
    auto b = manifold_from_string(rest.substr(split + 1));
    if (a && b) {
      s.rel_blockades.set(*a, *b, parse_double(key, value));
      return true;
    }
  }
  return false;
}

// tau_<level>_us, e.g. tau_r_plus_us.
bool apply_lifetime_key(PhysicalSetting& s, std::string_view key, std::string_view value) {
  if (!key.starts_with("tau_") || !key.ends_with("_us")) return false;
  auto level = level_from_string(key.substr(4, key.size() - 7));
  if (!level || !is_rydberg(*level)) return false;
  s.lifetime_overrides_us[*level] = parse_double(key, value);
  return true;
}

}  // namespace

std::vector<std::string> builtin_setting_names() {
  std::vector<std::string> names;
  for (const auto& row : kTable) names.emplace_back(row.name);
  return names;
}

PhysicalSetting load_setting(std::string_view name) {
  for (const auto& row : kTable) {
    if (name == row.name) {
      PhysicalSetting s = from_row(row);
      s.validate();
      return s;
    }
  }
  std::string available;
  for (const auto& n : builtin_setting_names()) available += (available.empty() ? "" : ", ") + n;
  throw ConfigError("unknown setting '" + std::string(name) + "' (available: " + available + ")");
}

PhysicalSetting parse_setting_text(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> assignments;
  std::optional<std::string> base;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("setting file line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    std::string key{trim(line.substr(0, eq))};
    std::string value{trim(line.substr(eq + 1))};
    if (key.empty() || value.empty()) {
      throw ConfigError("setting file line " + std::to_string(line_no) + ": empty key or value");
    }
    if (key == "base") {
      base = value;
    } else {
      assignments.emplace_back(std::move(key), std::move(value));
    }
  }
  if (!base) throw ConfigError("setting file: missing required key 'base'");

  PhysicalSetting s = load_setting(*base);
  const auto& setters = scalar_setters();
  for (const auto& [key, value] : assignments) {
    if (auto it = setters.find(key); it != setters.end()) {
      it->second(s, key, value);
    } else if (!apply_blockade_key(s, key, value) && !apply_lifetime_key(s, key, value)) {
      throw ConfigError("setting file: unknown key '" + key + "'");
    }
  }
  s.validate();
  return s;
}

PhysicalSetting load_setting_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open setting file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_setting_text(buffer.str());
}

}  // namespace rydgate
