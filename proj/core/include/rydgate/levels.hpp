#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace rydgate {

// Single-atom level set. The enumerator order is the basis order used for
// every matrix and state vector in the library.
enum class Level : std::size_t {
  g = 0,     // auxiliary sink for decay
  q0,        // qubit |0>
  q1,        // qubit |1> (the mapped |1'> state)
  r_target,  // n p3/2
  r_plus,    // (n+1) p3/2
  r_minus,   // (n-1) p3/2
  r_p1h,     // n' p1/2
  r_p3h,     // n' p3/2
  r_pp1h,    // n'' p1/2
  r_pp3h,    // n'' p3/2
};

inline constexpr std::size_t kLevelCount = 10;
inline constexpr std::size_t kCompositeDim = kLevelCount * kLevelCount;

inline constexpr std::array<Level, kLevelCount> kAllLevels = {
    Level::g,      Level::q0,    Level::q1,    Level::r_target, Level::r_plus,
    Level::r_minus, Level::r_p1h, Level::r_p3h, Level::r_pp1h,  Level::r_pp3h};

inline constexpr std::array<Level, 7> kRydbergLevels = {
    Level::r_target, Level::r_plus, Level::r_minus, Level::r_p1h,
    Level::r_p3h,    Level::r_pp1h, Level::r_pp3h};

constexpr std::size_t index_of(Level l) { return static_cast<std::size_t>(l); }

constexpr bool is_rydberg(Level l) { return index_of(l) >= index_of(Level::r_target); }

std::string_view to_string(Level l);
std::optional<Level> level_from_string(std::string_view s);

// Rydberg manifolds grouped by principal quantum number; relative blockades
// are tabulated per manifold pair.
enum class Manifold : std::size_t { n = 0, n_plus, n_minus, n_prime, n_dprime };

inline constexpr std::array<Manifold, 5> kAllManifolds = {
    Manifold::n, Manifold::n_plus, Manifold::n_minus, Manifold::n_prime, Manifold::n_dprime};

std::optional<Manifold> manifold_of(Level l);
std::string_view to_string(Manifold m);
std::optional<Manifold> manifold_from_string(std::string_view s);

// Index of a composite basis state |control, target>.
constexpr std::size_t composite_index(Level control, Level target) {
  return index_of(control) * kLevelCount + index_of(target);
}

}  // namespace rydgate
