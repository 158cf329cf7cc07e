#pragma once

#include <numbers>

// Internal units: time in ns, angular frequency in rad/ns, hbar = 1.
// Tabulated frequencies are linear frequencies f = omega / 2pi in GHz.
namespace rydgate {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double ghz_to_angular(double f_ghz) { return kTwoPi * f_ghz; }
constexpr double angular_to_ghz(double omega) { return omega / kTwoPi; }

constexpr double mhz_to_angular(double f_mhz) { return kTwoPi * f_mhz * 1e-3; }
constexpr double angular_to_mhz(double omega) { return omega / kTwoPi * 1e3; }

// Lifetime in microseconds to decay rate in 1/ns.
double lifetime_us_to_rate(double tau_us);

}  // namespace rydgate
