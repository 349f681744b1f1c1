#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "config.hpp"
#include "csv.hpp"
#include "loopy/rd.hpp"
#include "manifest.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;
using namespace loopy;
using namespace loopy::io;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitIo = 4;

std::string default_out_dir() {
  const char* env = std::getenv("LOOPY_OUT_DIR");
  return env && *env ? env : ".";
}

std::string fd(double v) { return format_double(v); }

void write_angles_csv(const std::string& path, const ExperimentRecord& rec) {
  CsvWriter csv(path);
  std::vector<std::string> header{"step", "t", "segment"};
  const std::size_t n = static_cast<std::size_t>(rec.spec.n_cells);
  for (std::size_t m = 0; m < n; ++m) header.push_back("theta_" + std::to_string(m));
  csv.row(header);
  for (const RecordSample& s : rec.samples) {
    std::vector<std::string> row{std::to_string(s.step), fd(s.t), std::to_string(s.segment)};
    for (double v : s.theta) row.push_back(fd(v));
    csv.row(row);
  }
}

void write_morphogens_csv(const std::string& path, const ExperimentRecord& rec) {
  CsvWriter csv(path);
  std::vector<std::string> header{"step", "t", "segment"};
  const std::size_t n = static_cast<std::size_t>(rec.spec.n_cells);
  for (const char* field : {"q_pas_", "q_act_", "q_inh_"})
    for (std::size_t m = 0; m < n; ++m) header.push_back(field + std::to_string(m));
  csv.row(header);
  for (const RecordSample& s : rec.samples) {
    std::vector<std::string> row{std::to_string(s.step), fd(s.t), std::to_string(s.segment)};
    for (const auto* arr : {&s.q_pas, &s.q_act, &s.q_inh})
      for (double v : *arr) row.push_back(fd(v));
    csv.row(row);
  }
}

void write_turning_csv(const std::string& path, const ExperimentRecord& rec) {
  CsvWriter csv(path);
  csv.row({"step", "t", "segment", "turning_distance"});
  for (const RecordSample& s : rec.samples)
    csv.row({std::to_string(s.step), fd(s.t), std::to_string(s.segment),
             fd(s.turning_from_first_stable)});
}

json summary_json(const ShapeSummary& s) {
  json j;
  j["lobe_count"] = s.lobe_count;
  j["amplitude"] = s.amplitude;
  j["valid"] = s.valid;
  j["angles"] = s.angles.theta;
  return j;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << content;
}

void write_shape_svg(const std::string& path, const JointAngles& angles, double cell_length) {
  write_text(path, render_shape(reconstruct_polygon(angles, cell_length)));
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir = default_out_dir();
  std::optional<long> seed;
  int threads = 1;
  std::optional<int> trials;
};

RunConfig load(const CommonOpts& opts) {
  RunConfig cfg = opts.config_path.empty() ? parse_config(default_config_json())
                                           : load_config(opts.config_path);
  if (opts.seed) {
    cfg.seed = static_cast<std::uint64_t>(*opts.seed);
    cfg.echo["seed"] = cfg.seed;
    if (cfg.sweep) cfg.sweep->base_seed = cfg.seed;
  }
  if (opts.trials && cfg.sweep) {
    cfg.sweep->trials = *opts.trials;
    cfg.echo["sweep"]["trials"] = *opts.trials;
  }
  if (cfg.sweep) cfg.sweep->threads = opts.threads;
  return cfg;
}

int cmd_simulate(const CommonOpts& opts) {
  RunConfig cfg = load(opts);
  fs::create_directories(opts.out_dir);
  const TrialResult r =
      run_trial(cfg.params, cfg.spec, cfg.seed, cfg.criterion, cfg.noise_sigma,
                cfg.sample_stride);

  write_angles_csv(opts.out_dir + "/angles.csv", r.record);
  write_morphogens_csv(opts.out_dir + "/morphogens.csv", r.record);
  json summary = summary_json(r.summary);
  summary["seed"] = r.record.seed;
  summary["generator"] = r.record.generator;
  summary["version"] = r.record.version;
  summary["diverged"] = r.record.diverged;
  summary["divergence_step"] = r.record.divergence_step;
  summary["steady_step"] =
      r.record.segments.empty() ? -1 : r.record.segments.front().steady_step;
  summary["cell_length"] = cfg.spec.cell_length;
  write_text(opts.out_dir + "/summary.json", summary.dump(2) + "\n");
  write_shape_svg(opts.out_dir + "/shape.svg", r.summary.angles, cfg.spec.cell_length);
  write_manifest(opts.out_dir, "simulate", cfg.echo,
                 {"angles.csv", "morphogens.csv", "summary.json", "shape.svg"});
  return r.record.diverged ? kExitDiverged : kExitOk;
}

int cmd_sweep(const CommonOpts& opts) {
  RunConfig cfg = load(opts);
  if (!cfg.sweep) throw ConfigError("config field 'sweep': missing required field");
  fs::create_directories(opts.out_dir);
  const SweepResult result = run_sweep(*cfg.sweep);

  {
    CsvWriter csv(opts.out_dir + "/sweep.csv");
    csv.row({cfg.sweep->axis1.name, cfg.sweep->axis2.name, "frac_2lobe", "frac_3lobe",
             "frac_4plus", "frac_invalid", "frac_other", "mean_amplitude"});
    for (const SweepCell& c : result.cells)
      csv.row({fd(c.axis1_value), fd(c.axis2_value), fd(c.frac_2lobe), fd(c.frac_3lobe),
               fd(c.frac_4plus), fd(c.frac_invalid), fd(c.frac_other),
               fd(c.mean_amplitude)});
  }
  write_text(opts.out_dir + "/map.svg",
             render_sweep_map(result, cfg.sweep->axis1.name, cfg.sweep->axis2.name));
  write_manifest(opts.out_dir, "sweep", cfg.echo, {"sweep.csv", "map.svg"});
  return kExitOk;
}

int cmd_trajectory(const CommonOpts& opts) {
  RunConfig cfg = load(opts);
  if (!cfg.trajectory) throw ConfigError("config field 'trajectory': missing required field");
  fs::create_directories(opts.out_dir);
  const ExperimentRecord rec =
      run_trajectory(*cfg.trajectory, cfg.params, cfg.spec, cfg.seed, cfg.criterion,
                     cfg.noise_sigma, cfg.sample_stride);

  write_angles_csv(opts.out_dir + "/angles.csv", rec);
  write_morphogens_csv(opts.out_dir + "/morphogens.csv", rec);
  write_turning_csv(opts.out_dir + "/turning.csv", rec);

  const HysteresisReport rep = hysteresis_report(rec);
  json hyst;
  hyst["initial_lobes"] = rep.initial_lobes;
  hyst["final_lobes"] = rep.final_lobes;
  hyst["turning_distance_initial_final"] = rep.turning_distance_initial_final;
  hyst["lobe_count_restored"] = rep.lobe_count_restored;
  hyst["segment_transition"] = rep.segment_transition;
  hyst["diverged"] = rec.diverged;
  write_text(opts.out_dir + "/hysteresis.json", hyst.dump(2) + "\n");

  std::vector<std::string> outputs{"angles.csv", "morphogens.csv", "turning.csv",
                                   "hysteresis.json"};
  // key frame at the settled shape of every steady segment
  for (std::size_t si = 0; si < rec.segments.size(); ++si) {
    if (rec.segments[si].steady_step < 0) continue;
    for (auto it = rec.samples.rbegin(); it != rec.samples.rend(); ++it) {
      if (it->segment == static_cast<int>(si)) {
        const std::string name = "shape_segment_" + std::to_string(si) + ".svg";
        write_shape_svg(opts.out_dir + "/" + name, it->summary.angles,
                        cfg.spec.cell_length);
        outputs.push_back(name);
        break;
      }
    }
  }
  write_manifest(opts.out_dir, "trajectory", cfg.echo, outputs);
  return rec.diverged ? kExitDiverged : kExitOk;
}

int cmd_render(const std::string& in_path, const CommonOpts& opts) {
  std::ifstream in(in_path);
  if (!in) throw ConfigError("cannot open shape file: " + in_path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("shape file is not valid JSON: ") + e.what());
  }
  if (!doc.contains("angles") || !doc["angles"].is_array())
    throw ConfigError("config field 'angles': missing required field");
  JointAngles angles;
  for (const auto& v : doc["angles"]) {
    if (!v.is_number()) throw ConfigError("config field 'angles': expected numbers");
    angles.theta.push_back(v.get<double>());
  }
  const double cell_length =
      doc.contains("cell_length") ? doc["cell_length"].get<double>() : 1.0;
  fs::create_directories(opts.out_dir);
  write_shape_svg(opts.out_dir + "/shape.svg", angles, cell_length);
  return kExitOk;
}

int cmd_analyze(const std::string& in_path, const CommonOpts& opts) {
  RunConfig cfg = load(opts);
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw ConfigError("cannot open time series: " + in_path);
  const auto rows = read_csv(in);
  if (rows.size() < 2) throw ConfigError("time series has no samples: " + in_path);
  const auto& header = rows.front();
  const std::size_t n = static_cast<std::size_t>(cfg.spec.n_cells);
  if (header.size() != 3 + 3 * n)
    throw ConfigError("time series column count does not match ring.n_cells");

  fs::create_directories(opts.out_dir);
  CsvWriter csv(opts.out_dir + "/metrics.csv");
  csv.row({"step", "t", "segment", "lobe_count", "amplitude", "valid",
           "turning_from_first"});
  std::optional<JointAngles> first;
  ShapeSummary last;
  for (std::size_t ri = 1; ri < rows.size(); ++ri) {
    const auto& row = rows[ri];
    MorphogenState state;
    state.q_pas.resize(n);
    state.q_act.resize(n);
    state.q_inh.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
      state.q_pas[m] = std::stod(row[3 + m]);
      state.q_act[m] = std::stod(row[3 + n + m]);
      state.q_inh[m] = std::stod(row[3 + 2 * n + m]);
    }
    const ShapeSummary s = summarize_shape(state, cfg.spec.cell_length);
    if (!first) first = s.angles;
    csv.row({row[0], row[1], row[2], std::to_string(s.lobe_count), fd(s.amplitude),
             s.valid ? "true" : "false", fd(turning_distance(s.angles, *first))});
    last = s;
  }
  write_text(opts.out_dir + "/summary.json", summary_json(last).dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loopy: ring reaction-diffusion morphogenesis simulator"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string in_path;

  auto add_common = [&](CLI::App* sub, bool with_in = false) {
    sub->add_option("--config", opts.config_path, "JSON config file");
    sub->add_option("--out", opts.out_dir, "output directory (default $LOOPY_OUT_DIR or .)");
    sub->add_option("--seed", opts.seed, "override base seed");
    sub->add_option("--threads", opts.threads, "worker threads (outputs do not depend on this)");
    sub->add_option("--trials", opts.trials, "override sweep trials");
    if (with_in) sub->add_option("--in", in_path, "input file")->required();
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run one trial to steady state");
  CLI::App* sweep = app.add_subcommand("sweep", "parameter-space sweep over two axes");
  CLI::App* trajectory = app.add_subcommand("trajectory", "step-ramp parameter schedule");
  CLI::App* render = app.add_subcommand("render", "render a saved shape to SVG");
  CLI::App* analyze = app.add_subcommand("analyze", "recompute metrics from a morphogen time series");
  add_common(simulate);
  add_common(sweep);
  add_common(trajectory);
  add_common(render, true);
  add_common(analyze, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(opts);
    if (sweep->parsed()) return cmd_sweep(opts);
    if (trajectory->parsed()) return cmd_trajectory(opts);
    if (render->parsed()) return cmd_render(in_path, opts);
    if (analyze->parsed()) return cmd_analyze(in_path, opts);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DynamicsDiverged& e) {
    std::cerr << "error: " << e.what() << " (step " << e.step << ")\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
