#include "loopy/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace loopy {

std::optional<std::size_t> detect_steady_state(std::span<const MorphogenState> trajectory,
                                               const SteadyStateCriterion& criterion) {
  criterion.validate();
  if (trajectory.empty()) throw AnalysisError("detect_steady_state: empty trajectory");
  long held = 0;
  std::size_t window_start = 0;
  const std::size_t gaps = trajectory.size() - 1;
  for (std::size_t k = 0; k < gaps && static_cast<long>(k) < criterion.max_steps; ++k) {
    const MorphogenState& a = trajectory[k];
    const MorphogenState& b = trajectory[k + 1];
    const double dt = b.t - a.t;
    if (!(dt > 0.0)) throw AnalysisError("detect_steady_state: non-increasing time");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      m = std::max(m, std::fabs(b.q_pas[i] - a.q_pas[i]));
      m = std::max(m, std::fabs(b.q_act[i] - a.q_act[i]));
      m = std::max(m, std::fabs(b.q_inh[i] - a.q_inh[i]));
    }
    m /= dt;
    if (m < criterion.deriv_tol) {
      if (held == 0) window_start = k;
      if (++held >= criterion.hold_steps) return window_start;
    } else {
      held = 0;
    }
  }
  return std::nullopt;
}

double amplitude(std::span<const double> q_act) {
  if (q_act.empty()) throw AnalysisError("amplitude: empty array");
  const auto [mn, mx] = std::minmax_element(q_act.begin(), q_act.end());
  return (*mx - *mn) / 2.0;
}

namespace {

// Topographic prominence of a circular peak: walk both ways until terrain
// higher than the peak (or a full lap), track the lowest point seen, and
// take the higher of the two bases.
double circular_prominence(std::span<const double> q, std::size_t peak) {
  const std::size_t n = q.size();
  double bases[2];
  for (int dir = 0; dir < 2; ++dir) {
    double low = q[peak];
    std::size_t i = peak;
    for (std::size_t steps = 0; steps < n; ++steps) {
      i = dir == 0 ? (i + 1) % n : (i + n - 1) % n;
      if (q[i] > q[peak]) break;
      low = std::min(low, q[i]);
    }
    bases[dir] = low;
  }
  return q[peak] - std::max(bases[0], bases[1]);
}

}  // namespace

int count_lobes(std::span<const double> q_act) {
  const std::size_t n = q_act.size();
  if (n < 3) throw AnalysisError("count_lobes needs at least 3 cells");
  const double amp = amplitude(q_act);
  if (amp < kLobeAmplitudeFloor) return 0;

  int lobes = 0;
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t prev = (m + n - 1) % n;
    if (q_act[m] == q_act[prev]) continue;  // count each plateau once, at its left edge
    // nearest distinct values on either side
    std::size_t r = (m + 1) % n;
    while (q_act[r] == q_act[m]) r = (r + 1) % n;
    if (!(q_act[m] > q_act[prev] && q_act[m] > q_act[r])) continue;
    if (circular_prominence(q_act, m) > kLobeProminenceFraction * amp) ++lobes;
  }
  return lobes;
}

double turning_distance(const JointAngles& a, const JointAngles& b) {
  const std::size_t n = a.size();
  if (n == 0 || b.size() != n)
    throw AnalysisError("turning_distance: angle arrays must have equal nonzero length");

  // Turning function samples: H_j = theta_1 + ... + theta_j on [j/N,(j+1)/N).
  std::vector<double> ha(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) ha[j] = ha[j - 1] + a.theta[j];

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> hb(n);
  for (std::size_t shift = 0; shift < n; ++shift) {
    hb[0] = 0.0;
    for (std::size_t j = 1; j < n; ++j)
      hb[j] = hb[j - 1] + b.theta[(shift + j) % n];
    // optimal constant orientation offset is the mean difference
    double mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) mean += ha[j] - hb[j];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = ha[j] - hb[j] - mean;
      ss += d * d;
    }
    best = std::min(best, ss / static_cast<double>(n));
  }
  return std::sqrt(best);
}

ShapeSummary summarize_shape(const MorphogenState& state, double cell_length,
                             double projection_tol, int projection_max_iter) {
  ShapeSummary s;
  s.lobe_count = count_lobes(state.q_act);
  s.amplitude = amplitude(state.q_act);
  const JointAngles commanded = angles_from_morphogens(state);
  try {
    s.angles = project_to_closure(commanded, cell_length, projection_tol,
                                  projection_max_iter);
    const PolygonGeometry geom = reconstruct_polygon(s.angles, cell_length);
    s.valid = !geom.self_intersects;
  } catch (const ProjectionFailed&) {
    s.angles = commanded;
    s.valid = false;
  }
  return s;
}

}  // namespace loopy
