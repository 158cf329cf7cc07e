#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rydgate/levels.hpp"

namespace rydgate {

// Relative blockade b(m1, m2) in units of the target-pair shift B0. Only
// explicitly set pairs are stored; lookups of pairs not involving the target
// manifold fall back to b(n, m1) * b(n, m2).
class RelativeBlockades {
 public:
  void set(Manifold a, Manifold b, double value);
  bool contains(Manifold a, Manifold b) const;
  double at(Manifold a, Manifold b) const;
  const std::map<std::pair<Manifold, Manifold>, double>& explicit_entries() const {
    return entries_;
  }

  bool operator==(const RelativeBlockades&) const = default;

 private:
  static std::pair<Manifold, Manifold> key(Manifold a, Manifold b);
  std::map<std::pair<Manifold, Manifold>, double> entries_;
};

// Physical parameters of one single-photon excitation scheme. Frequencies are
// stored as angular frequencies (rad/ns), lifetimes in microseconds.
struct PhysicalSetting {
  std::string name;

  int n = 0;
  int n_prime = 0;
  int n_dprime = 0;

  double tau_n_us = 0.0;

  double delta_plus = 0.0;
  double delta_minus = 0.0;
  double delta_p1_half = 0.0;
  double delta_p3_half = 0.0;
  double delta_pp1_half = 0.0;
  double delta_pp3_half = 0.0;

  double b0 = 0.0;
  RelativeBlockades rel_blockades;

  double p_half_suppression = 1.0 / 300.0;
  double omega_q = 0.0;

  double decay_branch_g = 7.0 / 8.0;
  double decay_branch_0 = 1.0 / 16.0;
  double decay_branch_1 = 1.0 / 16.0;

  // Per-level lifetime overrides (microseconds). Levels without an override
  // use tau_n_us.
  std::map<Level, double> lifetime_overrides_us;

  int principal_number(Manifold m) const;
  double lifetime_us(Level rydberg_level) const;
  // Decay rate in 1/ns.
  double decay_rate(Level rydberg_level) const;
  double relative_blockade(Manifold a, Manifold b) const { return rel_blockades.at(a, b); }

  // Throws ConfigError naming the first violated invariant.
  void validate() const;

  bool operator==(const PhysicalSetting&) const = default;
};

std::vector<std::string> builtin_setting_names();

PhysicalSetting load_setting(std::string_view name);

// Key-value override format:
//
//   # comment
//   base = S2
//   b0_GHz = 0.5
//
// Frequencies are linear frequencies in GHz; lifetimes in microseconds.
PhysicalSetting parse_setting_text(std::string_view text);
PhysicalSetting load_setting_file(const std::filesystem::path& path);

}  // namespace rydgate
