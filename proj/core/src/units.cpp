#include "rydgate/units.hpp"

#include "rydgate/errors.hpp"

namespace rydgate {

double lifetime_us_to_rate(double tau_us) {
  if (!(tau_us > 0.0)) throw ConfigError("lifetime must be positive");
  return 1.0 / (tau_us * 1e3);
}

}  // namespace rydgate
