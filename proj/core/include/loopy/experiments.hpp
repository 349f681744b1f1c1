#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loopy/analysis.hpp"
#include "loopy/types.hpp"

namespace loopy {

/// Applies a named parameter. "gamma_act" preserves the current diffusion
/// ratio (the ramp convention); "lambda" re-derives gamma_inh.
void apply_parameter(ReactionParams& params, const std::string& name, double value);

bool is_parameter_name(const std::string& name);

struct Axis {
  std::string name;
  std::vector<double> values;
};

struct SweepConfig {
  Axis axis1;
  Axis axis2;
  ReactionParams fixed;
  int trials = 10;
  RingSpec spec;
  SteadyStateCriterion criterion;
  double noise_sigma = 0.001;
  std::uint64_t base_seed = 0;
  int threads = 1;
  long sample_stride = 100;

  void validate() const;
};

struct TrajectorySegment {
  std::string param;
  double value = 0.0;
  long max_steps = 0;  // 0: use the criterion's horizon
};

struct TrajectorySchedule {
  std::vector<TrajectorySegment> segments;
  bool reverse = false;

  /// Segment list with the mirrored return path appended when reverse is set
  /// (the turning point itself is not repeated).
  std::vector<TrajectorySegment> expanded() const;
};

struct RecordSample {
  long step = 0;       // global step index
  double t = 0.0;
  int segment = 0;
  std::vector<double> theta;  // commanded angles q_pas + q_act
  std::vector<double> q_pas;
  std::vector<double> q_act;
  std::vector<double> q_inh;
  ShapeSummary summary;
  double turning_from_first_stable = 0.0;  // NaN before the first stable shape
};

struct SegmentResult {
  ReactionParams params;
  long start_step = 0;
  long end_step = 0;
  long steady_step = -1;  // global step where the steady window starts, -1 if not reached
  bool diverged = false;
};

/// Full provenance and time series of one trial or trajectory run.
struct ExperimentRecord {
  std::uint64_t seed = 0;
  ReactionParams initial_params;
  RingSpec spec;
  SteadyStateCriterion criterion;
  double noise_sigma = 0.0;
  long sample_stride = 0;
  std::string generator;
  std::string version;

  std::vector<RecordSample> samples;
  std::vector<SegmentResult> segments;
  std::optional<std::size_t> first_stable_sample;  // index into samples
  bool diverged = false;
  long divergence_step = -1;
};

struct TrialResult {
  ShapeSummary summary;   // at steady state (or horizon / last finite state)
  ExperimentRecord record;
};

/// Initializes from the regular polygon plus seeded activator noise and runs
/// until steady or the horizon. Deterministic per seed; divergence is
/// captured in the record, not thrown.
TrialResult run_trial(const ReactionParams& params, const RingSpec& spec,
                      std::uint64_t seed, const SteadyStateCriterion& criterion,
                      double noise_sigma = 0.001, long sample_stride = 100);

struct SweepCell {
  double axis1_value = 0.0;
  double axis2_value = 0.0;
  double frac_2lobe = 0.0;
  double frac_3lobe = 0.0;
  double frac_4plus = 0.0;
  double frac_invalid = 0.0;
  double frac_other = 0.0;   // valid with 0 or 1 lobes
  double mean_amplitude = 0.0;  // over valid trials
  std::vector<int> trial_lobes;      // per trial, -1 when invalid
  std::vector<bool> trial_valid;
  std::vector<double> trial_amplitudes;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // row-major: axis1 outer, axis2 inner
};

/// Trials run independently (optionally across threads); aggregation order is
/// fixed by (grid point, trial index), so results do not depend on threads.
SweepResult run_sweep(const SweepConfig& config);

ExperimentRecord run_trajectory(const TrajectorySchedule& schedule,
                                const ReactionParams& params, const RingSpec& spec,
                                std::uint64_t seed, const SteadyStateCriterion& criterion,
                                double noise_sigma = 0.001, long sample_stride = 100);

struct HysteresisReport {
  int initial_lobes = 0;
  int final_lobes = 0;
  double turning_distance_initial_final = 0.0;
  std::vector<bool> segment_transition;  // lobe count changed during segment
  bool lobe_count_restored = false;
};

HysteresisReport hysteresis_report(const ExperimentRecord& record);

}  // namespace loopy
