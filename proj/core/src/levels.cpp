#include "rydgate/levels.hpp"

namespace rydgate {

namespace {
constexpr std::array<std::string_view, kLevelCount> kLevelNames = {
    "g", "q0", "q1", "r_target", "r_plus", "r_minus", "r_p1h", "r_p3h", "r_pp1h", "r_pp3h"};
constexpr std::array<std::string_view, 5> kManifoldNames = {"n", "nplus", "nminus", "nprime",
                                                            "ndprime"};
}  // namespace

std::string_view to_string(Level l) { return kLevelNames[index_of(l)]; }

std::optional<Level> level_from_string(std::string_view s) {
  for (Level l : kAllLevels) {
    if (to_string(l) == s) return l;
  }
  return std::nullopt;
}

std::optional<Manifold> manifold_of(Level l) {
  switch (l) {
    case Level::r_target: return Manifold::n;
    case Level::r_plus: return Manifold::n_plus;
    case Level::r_minus: return Manifold::n_minus;
    case Level::r_p1h:
    case Level::r_p3h: return Manifold::n_prime;
    case Level::r_pp1h:
    case Level::r_pp3h: return Manifold::n_dprime;
    default: return std::nullopt;
  }
}

std::string_view to_string(Manifold m) { return kManifoldNames[static_cast<std::size_t>(m)]; }

std::optional<Manifold> manifold_from_string(std::string_view s) {
  for (Manifold m : kAllManifolds) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

}  // namespace rydgate
