#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "loopy/types.hpp"

namespace loopy {

/// Time derivatives of all three morphogen fields.
struct Derivatives {
  std::vector<double> q_pas;
  std::vector<double> q_act;
  std::vector<double> q_inh;

  double max_abs() const;
};

/// Discrete ring Laplacian (v_{m-1} - 2 v_m + v_{m+1}) / (2 s) with periodic
/// indices. Note the 1/(2s) divisor: this is the published discretization,
/// not the conventional 1/s^2.
std::vector<double> ring_laplacian(std::span<const double> values, double cell_length);

/// Reaction contributions only (no diffusion). The passive morphogen has none;
/// activator: q - q^3 - q_inh + alpha; inhibitor: beta * (q_act - q_inh).
Derivatives reaction_terms(const MorphogenState& state, const ReactionParams& params);

/// Full right-hand side: diffusion plus reaction.
Derivatives derivatives(const MorphogenState& state, const ReactionParams& params,
                        const RingSpec& spec);

/// Allocation-free variant for hot loops; out buffers are resized as needed.
void derivatives_into(const MorphogenState& state, const ReactionParams& params,
                      const RingSpec& spec, Derivatives& out);

inline constexpr double kDefaultDivergenceBound = 1e6;

/// One explicit Euler step: Q_{t+dt} = Qdot * dt + Q_t. The input state is
/// untouched; each cell reads only itself and its two neighbors.
/// Throws DynamicsDiverged when the new state is non-finite or exceeds the bound.
MorphogenState step(const MorphogenState& state, const ReactionParams& params,
                    const RingSpec& spec, double divergence_bound = kDefaultDivergenceBound);

/// Regular-polygon joint configuration, 2*pi/N per cell.
std::vector<double> regular_polygon_angles(int n_cells);

/// q_pas takes the starting joint configuration, q_act is seeded zero-mean
/// Gaussian noise, q_inh starts at zero.
MorphogenState init_state(const RingSpec& spec, std::span<const double> initial_angles,
                          double noise_sigma, std::uint64_t seed);

}  // namespace loopy
