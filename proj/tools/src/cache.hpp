#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "rydgate/gate.hpp"

namespace rydgate::cli {

struct CachedOptimum {
  double lambda_target = 0.0;  // rad/ns
  double scale_target = 1.0;
  double scale_control = 1.0;
  double objective = 0.0;
  bool no_progress = false;
};

// Sidecar JSON file of optimizer results keyed by
// (setting, tau_t, pulse kind, tau_c rule). Not thread-safe; callers
// serialize access.
class OptimumCache {
 public:
  explicit OptimumCache(std::filesystem::path path);

  static std::string key(const std::string& setting, double tau_t, PulseKind kind, double tau_c_ratio);

  std::optional<CachedOptimum> find(const std::string& key) const;
  void store(const std::string& key, const CachedOptimum& value);
  void save() const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::filesystem::path path_;
  std::map<std::string, CachedOptimum> entries_;
};

void apply(const CachedOptimum& opt, SequenceSpec& spec);

}  // namespace rydgate::cli
