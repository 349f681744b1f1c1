#include "loopy/experiments.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "loopy/rd.hpp"
#include "loopy/rng.hpp"

namespace loopy {

void apply_parameter(ReactionParams& params, const std::string& name, double value) {
  if (name == "alpha") params.alpha = value;
  else if (name == "beta") params.beta = value;
  else if (name == "gamma_pas") params.gamma_pas = value;
  else if (name == "gamma_act") params.set_gamma_act_keep_ratio(value);
  else if (name == "gamma_inh") params.gamma_inh = value;
  else if (name == "lambda") params.set_lambda(value);
  else throw ConfigError("unknown parameter name: " + name);
}

bool is_parameter_name(const std::string& name) {
  return name == "alpha" || name == "beta" || name == "gamma_pas" ||
         name == "gamma_act" || name == "gamma_inh" || name == "lambda";
}

void SweepConfig::validate() const {
  spec.validate();
  fixed.validate();
  criterion.validate();
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (noise_sigma < 0) throw ConfigError("noise_sigma must be >= 0");
  for (const Axis* axis : {&axis1, &axis2}) {
    if (!is_parameter_name(axis->name)) throw ConfigError("unknown axis parameter: " + axis->name);
    if (axis->values.empty()) throw ConfigError("axis grid must be nonempty");
    for (std::size_t i = 1; i < axis->values.size(); ++i)
      if (!(axis->values[i] > axis->values[i - 1]))
        throw ConfigError("axis grid must be strictly increasing");
  }
}

std::vector<TrajectorySegment> TrajectorySchedule::expanded() const {
  std::vector<TrajectorySegment> out = segments;
  if (reverse && segments.size() > 1)
    for (std::size_t i = segments.size() - 1; i-- > 0;) out.push_back(segments[i]);
  return out;
}

namespace {

// Shared engine: runs a list of parameter segments from a fresh seeded state,
// continuing the morphogen state across segment boundaries.
ExperimentRecord run_segments(const std::vector<TrajectorySegment>& segments,
                              const ReactionParams& base_params, const RingSpec& spec,
                              std::uint64_t seed, const SteadyStateCriterion& criterion,
                              double noise_sigma, long sample_stride) {
  spec.validate();
  base_params.validate();
  criterion.validate();
  if (sample_stride < 1) throw ConfigError("sample_stride must be >= 1");

  ExperimentRecord rec;
  rec.seed = seed;
  rec.initial_params = base_params;
  rec.spec = spec;
  rec.criterion = criterion;
  rec.noise_sigma = noise_sigma;
  rec.sample_stride = sample_stride;
  rec.generator = GaussianRng::name();
  rec.version = kVersion;

  const auto start_angles = regular_polygon_angles(spec.n_cells);
  MorphogenState state = init_state(spec, start_angles, noise_sigma, seed);

  Derivatives d;
  const std::size_t n = state.size();
  long global_step = 0;

  auto push_sample = [&](int segment_index) {
    RecordSample s;
    s.step = global_step;
    s.t = state.t;
    s.segment = segment_index;
    s.theta.resize(n);
    for (std::size_t m = 0; m < n; ++m) s.theta[m] = state.q_pas[m] + state.q_act[m];
    s.q_pas = state.q_pas;
    s.q_act = state.q_act;
    s.q_inh = state.q_inh;
    s.summary = summarize_shape(state, spec.cell_length);
    s.turning_from_first_stable = std::numeric_limits<double>::quiet_NaN();
    rec.samples.push_back(std::move(s));
  };

  ReactionParams params = base_params;
  for (std::size_t si = 0; si < segments.size() && !rec.diverged; ++si) {
    if (!segments[si].param.empty())
      apply_parameter(params, segments[si].param, segments[si].value);
    const double dt = resolved_dt(spec, params);
    const long horizon =
        segments[si].max_steps > 0 ? segments[si].max_steps : criterion.max_steps;

    SegmentResult seg;
    seg.params = params;
    seg.start_step = global_step;
    SteadyStateDetector detector(criterion);

    for (long k = 0; k < horizon; ++k) {
      // skip when the previous segment already recorded this boundary step
      if (global_step % sample_stride == 0 &&
          (rec.samples.empty() || rec.samples.back().step != global_step))
        push_sample(static_cast<int>(si));
      derivatives_into(state, params, spec, d);
      bool bad = false;
      for (std::size_t m = 0; m < n; ++m) {
        state.q_pas[m] += d.q_pas[m] * dt;
        state.q_act[m] += d.q_act[m] * dt;
        state.q_inh[m] += d.q_inh[m] * dt;
        if (!std::isfinite(state.q_act[m]) || std::fabs(state.q_act[m]) > kDefaultDivergenceBound ||
            !std::isfinite(state.q_inh[m]) || std::fabs(state.q_inh[m]) > kDefaultDivergenceBound ||
            !std::isfinite(state.q_pas[m]) || std::fabs(state.q_pas[m]) > kDefaultDivergenceBound)
          bad = true;
      }
      state.t += dt;
      ++global_step;
      if (bad) {
        rec.diverged = true;
        rec.divergence_step = global_step - 1;
        seg.diverged = true;
        break;
      }
      if (auto steady = detector.update(global_step, d.max_abs())) {
        seg.steady_step = *steady;
        break;
      }
    }
    seg.end_step = global_step;
    if (!rec.diverged) {
      // state at segment end (steady or horizon), unless just sampled
      if (rec.samples.empty() || rec.samples.back().step != global_step)
        push_sample(static_cast<int>(si));
      if (seg.steady_step >= 0 && !rec.first_stable_sample)
        rec.first_stable_sample = rec.samples.size() - 1;
    }
    rec.segments.push_back(seg);
  }

  for (auto& s : rec.samples)
    s.turning_from_first_stable = std::numeric_limits<double>::quiet_NaN();
  if (rec.first_stable_sample) {
    const JointAngles& ref = rec.samples[*rec.first_stable_sample].summary.angles;
    for (std::size_t i = *rec.first_stable_sample; i < rec.samples.size(); ++i)
      rec.samples[i].turning_from_first_stable =
          turning_distance(rec.samples[i].summary.angles, ref);
  }
  return rec;
}

ShapeSummary final_summary(const ExperimentRecord& rec) {
  ShapeSummary s;
  if (!rec.samples.empty()) s = rec.samples.back().summary;
  if (rec.diverged) s.valid = false;
  return s;
}

}  // namespace

TrialResult run_trial(const ReactionParams& params, const RingSpec& spec,
                      std::uint64_t seed, const SteadyStateCriterion& criterion,
                      double noise_sigma, long sample_stride) {
  const std::vector<TrajectorySegment> single{{std::string(), 0.0, 0}};
  TrialResult r;
  r.record = run_segments(single, params, spec, seed, criterion, noise_sigma, sample_stride);
  r.summary = final_summary(r.record);
  return r;
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  const std::size_t n1 = config.axis1.values.size();
  const std::size_t n2 = config.axis2.values.size();
  const std::size_t trials = static_cast<std::size_t>(config.trials);
  const std::size_t total = n1 * n2 * trials;

  std::vector<ShapeSummary> summaries(total);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t job = cursor.fetch_add(1);
      if (job >= total) return;
      const std::size_t trial = job % trials;
      const std::size_t point = job / trials;
      const std::size_t j = point % n2;
      const std::size_t i = point / n2;
      ReactionParams p = config.fixed;
      apply_parameter(p, config.axis1.name, config.axis1.values[i]);
      apply_parameter(p, config.axis2.name, config.axis2.values[j]);
      summaries[job] = run_trial(p, config.spec, config.base_seed + trial,
                                 config.criterion, config.noise_sigma,
                                 config.sample_stride)
                           .summary;
    }
  };
  const int nthreads = std::max(1, config.threads);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepResult result;
  result.cells.reserve(n1 * n2);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      SweepCell cell;
      cell.axis1_value = config.axis1.values[i];
      cell.axis2_value = config.axis2.values[j];
      double amp_sum = 0.0;
      std::size_t valid_count = 0;
      for (std::size_t trial = 0; trial < trials; ++trial) {
        const ShapeSummary& s = summaries[(i * n2 + j) * trials + trial];
        cell.trial_valid.push_back(s.valid);
        cell.trial_lobes.push_back(s.valid ? s.lobe_count : -1);
        cell.trial_amplitudes.push_back(s.amplitude);
        if (!s.valid) {
          cell.frac_invalid += 1.0;
          continue;
        }
        valid_count += 1;
        amp_sum += s.amplitude;
        if (s.lobe_count == 2) cell.frac_2lobe += 1.0;
        else if (s.lobe_count == 3) cell.frac_3lobe += 1.0;
        else if (s.lobe_count >= 4) cell.frac_4plus += 1.0;
        else cell.frac_other += 1.0;
      }
      const double nt = static_cast<double>(trials);
      cell.frac_2lobe /= nt;
      cell.frac_3lobe /= nt;
      cell.frac_4plus /= nt;
      cell.frac_invalid /= nt;
      cell.frac_other /= nt;
      cell.mean_amplitude = valid_count > 0 ? amp_sum / static_cast<double>(valid_count) : 0.0;
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

ExperimentRecord run_trajectory(const TrajectorySchedule& schedule,
                                const ReactionParams& params, const RingSpec& spec,
                                std::uint64_t seed, const SteadyStateCriterion& criterion,
                                double noise_sigma, long sample_stride) {
  const auto segments = schedule.expanded();
  if (segments.empty()) throw ConfigError("trajectory schedule is empty");
  for (const auto& s : segments)
    if (!s.param.empty() && !is_parameter_name(s.param))
      throw ConfigError("unknown parameter name: " + s.param);
  return run_segments(segments, params, spec, seed, criterion, noise_sigma, sample_stride);
}

HysteresisReport hysteresis_report(const ExperimentRecord& record) {
  HysteresisReport rep;
  if (record.samples.empty()) throw AnalysisError("hysteresis_report: empty record");

  const std::size_t first =
      record.first_stable_sample ? *record.first_stable_sample : 0;
  const RecordSample& initial = record.samples[first];
  const RecordSample& final_sample = record.samples.back();
  rep.initial_lobes = initial.summary.lobe_count;
  rep.final_lobes = final_sample.summary.lobe_count;
  rep.turning_distance_initial_final =
      turning_distance(initial.summary.angles, final_sample.summary.angles);
  rep.lobe_count_restored = rep.initial_lobes == rep.final_lobes;

  // A segment transitions when the settled lobe count at its end differs
  // from the settled count at the end of the previous segment.
  int prev_lobes = rep.initial_lobes;
  for (std::size_t si = 0; si < record.segments.size(); ++si) {
    int end_lobes = prev_lobes;
    for (auto it = record.samples.rbegin(); it != record.samples.rend(); ++it) {
      if (it->segment == static_cast<int>(si)) {
        end_lobes = it->summary.lobe_count;
        break;
      }
    }
    rep.segment_transition.push_back(end_lobes != prev_lobes);
    prev_lobes = end_lobes;
  }
  return rep;
}

}  // namespace loopy
