#include "loopy/rng.hpp"

#include <cmath>
#include <numbers>

namespace loopy {

double GaussianRng::uniform01() {
  // 53-bit mantissa from the top bits of the 64-bit word.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianRng::normal(double mean, double stddev) {
  if (have_spare_) {
    have_spare_ = false;
    return mean + stddev * spare_;
  }
  double u1 = uniform01();
  double u2 = uniform01();
  if (u1 < 1e-300) u1 = 1e-300;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  have_spare_ = true;
  return mean + stddev * r * std::cos(phi);
}

}  // namespace loopy
