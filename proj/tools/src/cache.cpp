#include "cache.hpp"

#include <fstream>
#include <json.hpp>

#include "csv.hpp"
#include "rydgate/errors.hpp"

namespace rydgate::cli {

OptimumCache::OptimumCache(std::filesystem::path path) : path_(std::move(path)) {
  if (!std::filesystem::exists(path_)) return;
  std::ifstream in(path_);
  nlohmann::json j;
  try {
    in >> j;
    for (const auto& [k, v] : j.at("entries").items()) {
      entries_[k] = {v.at("lambda_target").get<double>(), v.at("scale_target").get<double>(),
                     v.at("scale_control").get<double>(), v.at("objective").get<double>(),
                     v.value("no_progress", false)};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("corrupt optimizer cache " + path_.string() + ": " + e.what());
  }
}

std::string OptimumCache::key(const std::string& setting, double tau_t, PulseKind kind,
                              double tau_c_ratio) {
  return setting + "|tau_t=" + format_number(tau_t) + "|" + std::string(to_string(kind)) +
         "|tau_c_ratio=" + format_number(tau_c_ratio);
}

std::optional<CachedOptimum> OptimumCache::find(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void OptimumCache::store(const std::string& key, const CachedOptimum& value) { entries_[key] = value; }

void OptimumCache::save() const {
  nlohmann::json j;
  j["version"] = 1;
  auto& e = j["entries"];
  e = nlohmann::json::object();
  for (const auto& [k, v] : entries_) {
    e[k] = {{"lambda_target", v.lambda_target},
            {"scale_target", v.scale_target},
            {"scale_control", v.scale_control},
            {"objective", v.objective},
            {"no_progress", v.no_progress}};
  }
  const auto tmp = std::filesystem::path(path_.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path_);
}

void apply(const CachedOptimum& opt, SequenceSpec& spec) {
  spec.lambda_target = opt.lambda_target;
  spec.amp_scales = {opt.scale_control, opt.scale_target, opt.scale_control};
}

}  // namespace rydgate::cli
