#pragma once

#include <cstdint>
#include <random>

namespace loopy {

/// Seeded Gaussian source: mt19937_64 driving an explicit Box-Muller
/// transform. std::normal_distribution is implementation-defined, so runs
/// would not reproduce across standard libraries; this construction does.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

  /// Algorithm name recorded in run metadata.
  static const char* name() { return "mt19937_64/box-muller"; }

  double uniform01();                 // in [0, 1)
  double normal(double mean, double stddev);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace loopy
