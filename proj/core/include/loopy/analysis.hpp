#pragma once

#include <optional>
#include <span>
#include <vector>

#include "loopy/geometry.hpp"
#include "loopy/types.hpp"

namespace loopy {

/// When a run counts as settled: the largest |Qdot| entry must stay below
/// deriv_tol for hold_steps consecutive steps, within max_steps.
struct SteadyStateCriterion {
  double deriv_tol = 1e-6;
  long hold_steps = 1000;
  long max_steps = 200000;

  void validate() const {
    if (!(deriv_tol > 0.0)) throw ConfigError("deriv_tol must be > 0");
    if (hold_steps < 1) throw ConfigError("hold_steps must be >= 1");
    if (max_steps < 1) throw ConfigError("max_steps must be >= 1");
  }
};

/// Derived observables of one configuration.
struct ShapeSummary {
  int lobe_count = 0;
  double amplitude = 0.0;
  bool valid = false;   // closure projection succeeded and no self-intersection
  JointAngles angles;   // projected when valid, raw otherwise
};

/// First index of a window where the finite-difference |Qdot| stays below
/// deriv_tol for hold_steps consecutive inter-sample gaps.
std::optional<std::size_t> detect_steady_state(std::span<const MorphogenState> trajectory,
                                               const SteadyStateCriterion& criterion);

/// Streaming counterpart used inside run loops, fed the exact derivative
/// magnitude of each step.
class SteadyStateDetector {
 public:
  explicit SteadyStateDetector(const SteadyStateCriterion& criterion)
      : criterion_(criterion) {}

  /// Feed max|Qdot| of step `index`; returns the window start when detection fires.
  std::optional<long> update(long index, double max_abs_derivative) {
    if (max_abs_derivative < criterion_.deriv_tol) {
      if (held_ == 0) window_start_ = index;
      if (++held_ >= criterion_.hold_steps) return window_start_;
    } else {
      held_ = 0;
    }
    return std::nullopt;
  }

  void reset() { held_ = 0; }

 private:
  SteadyStateCriterion criterion_;
  long held_ = 0;
  long window_start_ = 0;
};

inline constexpr double kLobeAmplitudeFloor = 1e-3;
inline constexpr double kLobeProminenceFraction = 0.05;

/// Number of circular local maxima whose prominence exceeds
/// kLobeProminenceFraction * amplitude. Constant or near-flat fields
/// (amplitude below kLobeAmplitudeFloor) count zero lobes.
int count_lobes(std::span<const double> q_act);

/// Half peak-to-peak: (max - min) / 2.
double amplitude(std::span<const double> q_act);

/// L2 distance between the two polygons' piecewise-constant turning
/// functions, minimized over all N cyclic relabelings and the optimal
/// constant orientation offset. Zero for identical shapes up to cell
/// relabeling and rotation.
double turning_distance(const JointAngles& a, const JointAngles& b);

/// Projects the commanded angles, reconstructs the polygon, and summarizes
/// lobe structure and validity.
ShapeSummary summarize_shape(const MorphogenState& state, double cell_length,
                             double projection_tol = kProjectionTol,
                             int projection_max_iter = kProjectionMaxIter);

}  // namespace loopy
