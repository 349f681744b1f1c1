#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace loopy {

inline constexpr const char* kVersion = "0.1.0";

/// Configuration is malformed or inconsistent (bad field, length mismatch, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// The explicit integration left the admissible region (non-finite or huge values).
class DynamicsDiverged : public std::runtime_error {
 public:
  DynamicsDiverged(const std::string& what, long step)
      : std::runtime_error(what), step(step) {}
  long step;
};

/// Closure projection did not reach the requested tolerance.
class ProjectionFailed : public std::runtime_error {
 public:
  ProjectionFailed(const std::string& what, double residual)
      : std::runtime_error(what), residual(residual) {}
  double residual;
};

class AnalysisError : public std::runtime_error {
 public:
  explicit AnalysisError(const std::string& what) : std::runtime_error(what) {}
};

struct ReactionParams;

/// Discretization of the ring: cell count, control-volume size, time step.
/// dt <= 0 means "derive a stable step from the parameters" (see stable_dt).
struct RingSpec {
  int n_cells = 36;
  double cell_length = 1.0;
  double dt = 0.0;

  void validate() const {
    if (n_cells < 8) throw ConfigError("n_cells must be >= 8, got " + std::to_string(n_cells));
    if (!(cell_length > 0.0)) throw ConfigError("cell_length must be > 0");
    if (!std::isfinite(dt)) throw ConfigError("dt must be finite");
  }
};

/// Reaction and diffusion coefficients. gamma_inh is stored; the diffusion
/// ratio lambda = gamma_inh / gamma_act is always derived from it.
struct ReactionParams {
  double alpha = 0.001;
  double beta = 225.0;
  double gamma_pas = 50.0;
  double gamma_act = 1.0;
  double gamma_inh = 50.0;

  double lambda() const { return gamma_inh / gamma_act; }

  /// Re-derives gamma_inh so that lambda() == value exactly.
  void set_lambda(double value) { gamma_inh = value * gamma_act; }

  /// Changes gamma_act while preserving the current diffusion ratio,
  /// the convention used when ramping gamma_act at fixed lambda.
  void set_gamma_act_keep_ratio(double value) {
    const double ratio = lambda();
    gamma_act = value;
    gamma_inh = ratio * value;
  }

  double max_gamma() const {
    return std::max(gamma_pas, std::max(gamma_act, gamma_inh));
  }

  void validate() const {
    if (alpha < 0 || beta < 0 || gamma_pas < 0 || gamma_act < 0 || gamma_inh < 0)
      throw ConfigError("reaction parameters must be >= 0");
  }
};

/// Largest explicit-Euler step that keeps both the stiffest diffusion mode
/// (rate 2*gamma/s with the 1/(2s) stencil) and the inhibition rate beta
/// inside the stability region, with a 0.5 safety factor. Always satisfies
/// dt <= cell_length / max(gamma).
inline double stable_dt(const RingSpec& spec, const ReactionParams& params) {
  const double stiffness =
      2.0 * params.max_gamma() / spec.cell_length + params.beta + 1.0;
  return 0.5 * 2.0 / stiffness;
}

inline double resolved_dt(const RingSpec& spec, const ReactionParams& params) {
  return spec.dt > 0.0 ? spec.dt : stable_dt(spec, params);
}

/// Morphogen quantities of all N cells at one instant.
struct MorphogenState {
  std::vector<double> q_pas;
  std::vector<double> q_act;
  std::vector<double> q_inh;
  double t = 0.0;

  std::size_t size() const { return q_pas.size(); }

  void validate(const RingSpec& spec) const {
    const auto n = static_cast<std::size_t>(spec.n_cells);
    if (q_pas.size() != n || q_act.size() != n || q_inh.size() != n)
      throw ConfigError("morphogen arrays must all have length n_cells");
    for (const auto* arr : {&q_pas, &q_act, &q_inh})
      for (double v : *arr)
        if (!std::isfinite(v)) throw ConfigError("morphogen state contains non-finite values");
  }
};

}  // namespace loopy
