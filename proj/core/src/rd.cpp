#include "loopy/rd.hpp"

#include <cmath>
#include <numbers>

#include "loopy/rng.hpp"

namespace loopy {

double Derivatives::max_abs() const {
  double m = 0.0;
  for (const auto* arr : {&q_pas, &q_act, &q_inh})
    for (double v : *arr) m = std::max(m, std::fabs(v));
  return m;
}

std::vector<double> ring_laplacian(std::span<const double> values, double cell_length) {
  const std::size_t n = values.size();
  if (n < 3) throw ConfigError("ring_laplacian needs at least 3 cells");
  if (!(cell_length > 0.0)) throw ConfigError("cell_length must be > 0");
  std::vector<double> out(n);
  const double inv = 1.0 / (2.0 * cell_length);
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t prev = (m + n - 1) % n;
    const std::size_t next = (m + 1) % n;
    out[m] = (values[prev] - 2.0 * values[m] + values[next]) * inv;
  }
  return out;
}

Derivatives reaction_terms(const MorphogenState& state, const ReactionParams& params) {
  const std::size_t n = state.size();
  Derivatives d;
  d.q_pas.assign(n, 0.0);
  d.q_act.resize(n);
  d.q_inh.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double qa = state.q_act[m];
    const double qi = state.q_inh[m];
    d.q_act[m] = qa - qa * qa * qa - qi + params.alpha;
    d.q_inh[m] = params.beta * (qa - qi);
  }
  return d;
}

void derivatives_into(const MorphogenState& state, const ReactionParams& params,
                      const RingSpec& spec, Derivatives& out) {
  const std::size_t n = state.size();
  if (n < 3) throw ConfigError("derivatives need at least 3 cells");
  out.q_pas.resize(n);
  out.q_act.resize(n);
  out.q_inh.resize(n);
  const double inv = 1.0 / (2.0 * spec.cell_length);
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t prev = (m + n - 1) % n;
    const std::size_t next = (m + 1) % n;
    const double lp = (state.q_pas[prev] - 2.0 * state.q_pas[m] + state.q_pas[next]) * inv;
    const double la = (state.q_act[prev] - 2.0 * state.q_act[m] + state.q_act[next]) * inv;
    const double li = (state.q_inh[prev] - 2.0 * state.q_inh[m] + state.q_inh[next]) * inv;
    const double qa = state.q_act[m];
    const double qi = state.q_inh[m];
    const double ra = qa - qa * qa * qa - qi + params.alpha;
    const double ri = params.beta * (qa - qi);
    out.q_pas[m] = 0.0 + params.gamma_pas * lp;
    out.q_act[m] = ra + params.gamma_act * la;
    out.q_inh[m] = ri + params.gamma_inh * li;
  }
}

Derivatives derivatives(const MorphogenState& state, const ReactionParams& params,
                        const RingSpec& spec) {
  Derivatives d;
  derivatives_into(state, params, spec, d);
  return d;
}

MorphogenState step(const MorphogenState& state, const ReactionParams& params,
                    const RingSpec& spec, double divergence_bound) {
  const double dt = resolved_dt(spec, params);
  const Derivatives d = derivatives(state, params, spec);
  MorphogenState next;
  const std::size_t n = state.size();
  next.q_pas.resize(n);
  next.q_act.resize(n);
  next.q_inh.resize(n);
  next.t = state.t + dt;
  for (std::size_t m = 0; m < n; ++m) {
    next.q_pas[m] = state.q_pas[m] + d.q_pas[m] * dt;
    next.q_act[m] = state.q_act[m] + d.q_act[m] * dt;
    next.q_inh[m] = state.q_inh[m] + d.q_inh[m] * dt;
  }
  const long step_index = static_cast<long>(std::llround(state.t / dt));
  for (const auto* arr : {&next.q_pas, &next.q_act, &next.q_inh})
    for (double v : *arr)
      if (!std::isfinite(v) || std::fabs(v) > divergence_bound)
        throw DynamicsDiverged("morphogen dynamics diverged", step_index);
  return next;
}

std::vector<double> regular_polygon_angles(int n_cells) {
  return std::vector<double>(static_cast<std::size_t>(n_cells),
                             2.0 * std::numbers::pi / n_cells);
}

MorphogenState init_state(const RingSpec& spec, std::span<const double> initial_angles,
                          double noise_sigma, std::uint64_t seed) {
  spec.validate();
  if (initial_angles.size() != static_cast<std::size_t>(spec.n_cells))
    throw ConfigError("initial_angles length must equal n_cells");
  if (noise_sigma < 0.0) throw ConfigError("noise_sigma must be >= 0");
  MorphogenState s;
  s.q_pas.assign(initial_angles.begin(), initial_angles.end());
  s.q_act.resize(initial_angles.size());
  s.q_inh.assign(initial_angles.size(), 0.0);
  GaussianRng rng(seed);
  for (double& v : s.q_act) v = noise_sigma > 0.0 ? rng.normal(0.0, noise_sigma) : 0.0;
  s.t = 0.0;
  return s;
}

}  // namespace loopy
