#include "config.hpp"

#include <fstream>

namespace loopy::io {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw ConfigError("config field '" + path + "': " + why);
}

const json* find(const json& obj, const std::string& dotted, const std::string& key) {
  if (!obj.is_object()) fail(dotted.empty() ? key : dotted, "expected an object");
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::string join(const std::string& a, const std::string& b) {
  return a.empty() ? b : a + "." + b;
}

double num_or(const json& obj, const std::string& prefix, const std::string& key,
              double fallback) {
  const json* v = find(obj, prefix, key);
  if (!v) return fallback;
  if (!v->is_number()) fail(join(prefix, key), "expected a number");
  return v->get<double>();
}

long int_or(const json& obj, const std::string& prefix, const std::string& key,
            long fallback) {
  const json* v = find(obj, prefix, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) fail(join(prefix, key), "expected an integer");
  return v->get<long>();
}

std::string str_required(const json& obj, const std::string& prefix, const std::string& key) {
  const json* v = find(obj, prefix, key);
  if (!v) fail(join(prefix, key), "missing required field");
  if (!v->is_string()) fail(join(prefix, key), "expected a string");
  return v->get<std::string>();
}

std::vector<double> num_array_required(const json& obj, const std::string& prefix,
                                       const std::string& key) {
  const json* v = find(obj, prefix, key);
  if (!v) fail(join(prefix, key), "missing required field");
  if (!v->is_array() || v->empty()) fail(join(prefix, key), "expected a nonempty array");
  std::vector<double> out;
  for (const auto& e : *v) {
    if (!e.is_number()) fail(join(prefix, key), "expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

json empty_object() { return json::object(); }

// Unknown keys are configuration mistakes (usually a field at the wrong
// nesting level); ignoring them silently changes the run.
void reject_unknown(const json& obj, const std::string& prefix,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) return;
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) fail(join(prefix, key), "unknown field");
  }
}

}  // namespace

json default_config_json() {
  json c;
  c["ring"] = {{"n_cells", 36}, {"cell_length", 1.0}, {"dt", 0.0}};
  c["params"] = {{"alpha", 0.001}, {"beta", 225.0}, {"gamma_pas", 50.0},
                 {"gamma_act", 1.0}, {"lambda", 50.0}};
  c["init"] = {{"noise_sigma", 0.001}};
  c["criterion"] = {{"deriv_tol", 1e-6}, {"hold_steps", 1000}, {"max_steps", 200000}};
  c["seed"] = 0;
  c["sample_stride"] = 100;
  c["sweep"] = {
      {"axis1", {{"name", "lambda"},
                 {"values", {100.0, 200.0, 300.0, 400.0, 500.0, 600.0, 700.0, 800.0, 900.0, 1000.0}}}},
      {"axis2", {{"name", "gamma_act"},
                 {"values", {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0}}}},
      {"trials", 10}};
  c["trajectory"] = {
      {"segments", json::array()},
      {"reverse", true}};
  for (double g : {0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8})
    c["trajectory"]["segments"].push_back({{"param", "gamma_act"}, {"value", g}, {"max_steps", 0}});
  return c;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
  RunConfig cfg;

  reject_unknown(doc, "", {"ring", "params", "init", "criterion", "seed", "sample_stride",
                           "sweep", "trajectory"});

  const json ring = doc.contains("ring") ? doc.at("ring") : empty_object();
  reject_unknown(ring, "ring", {"n_cells", "cell_length", "dt"});
  cfg.spec.n_cells = static_cast<int>(int_or(ring, "ring", "n_cells", 36));
  cfg.spec.cell_length = num_or(ring, "ring", "cell_length", 1.0);
  cfg.spec.dt = num_or(ring, "ring", "dt", 0.0);
  cfg.spec.validate();

  const json params = doc.contains("params") ? doc.at("params") : empty_object();
  reject_unknown(params, "params",
                 {"alpha", "beta", "gamma_pas", "gamma_act", "gamma_inh", "lambda"});
  cfg.params.alpha = num_or(params, "params", "alpha", 0.001);
  cfg.params.beta = num_or(params, "params", "beta", 225.0);
  cfg.params.gamma_pas = num_or(params, "params", "gamma_pas", 50.0);
  cfg.params.gamma_act = num_or(params, "params", "gamma_act", 1.0);
  if (params.is_object() && params.contains("gamma_inh")) {
    if (params.contains("lambda"))
      fail("params.lambda", "give either lambda or gamma_inh, not both");
    cfg.params.gamma_inh = num_or(params, "params", "gamma_inh", 50.0);
  } else {
    cfg.params.set_lambda(num_or(params, "params", "lambda", 50.0));
  }
  cfg.params.validate();

  const json init = doc.contains("init") ? doc.at("init") : empty_object();
  reject_unknown(init, "init", {"noise_sigma"});
  cfg.noise_sigma = num_or(init, "init", "noise_sigma", 0.001);
  if (cfg.noise_sigma < 0) fail("init.noise_sigma", "must be >= 0");

  const json crit = doc.contains("criterion") ? doc.at("criterion") : empty_object();
  reject_unknown(crit, "criterion", {"deriv_tol", "hold_steps", "max_steps"});
  cfg.criterion.deriv_tol = num_or(crit, "criterion", "deriv_tol", 1e-6);
  cfg.criterion.hold_steps = int_or(crit, "criterion", "hold_steps", 1000);
  cfg.criterion.max_steps = int_or(crit, "criterion", "max_steps", 200000);
  cfg.criterion.validate();

  cfg.seed = static_cast<std::uint64_t>(int_or(doc, "", "seed", 0));
  cfg.sample_stride = int_or(doc, "", "sample_stride", 100);
  if (cfg.sample_stride < 1) fail("sample_stride", "must be >= 1");

  if (doc.contains("sweep")) {
    const json& sw = doc.at("sweep");
    reject_unknown(sw, "sweep", {"axis1", "axis2", "trials"});
    SweepConfig sweep;
    const json* a1 = find(sw, "sweep", "axis1");
    const json* a2 = find(sw, "sweep", "axis2");
    if (!a1) fail("sweep.axis1", "missing required field");
    if (!a2) fail("sweep.axis2", "missing required field");
    reject_unknown(*a1, "sweep.axis1", {"name", "values"});
    reject_unknown(*a2, "sweep.axis2", {"name", "values"});
    sweep.axis1.name = str_required(*a1, "sweep.axis1", "name");
    sweep.axis1.values = num_array_required(*a1, "sweep.axis1", "values");
    sweep.axis2.name = str_required(*a2, "sweep.axis2", "name");
    sweep.axis2.values = num_array_required(*a2, "sweep.axis2", "values");
    sweep.trials = static_cast<int>(int_or(sw, "sweep", "trials", 10));
    sweep.fixed = cfg.params;
    sweep.spec = cfg.spec;
    sweep.criterion = cfg.criterion;
    sweep.noise_sigma = cfg.noise_sigma;
    sweep.base_seed = cfg.seed;
    sweep.sample_stride = cfg.sample_stride;
    sweep.validate();
    cfg.sweep = std::move(sweep);
  }

  if (doc.contains("trajectory")) {
    const json& tr = doc.at("trajectory");
    reject_unknown(tr, "trajectory", {"segments", "reverse"});
    TrajectorySchedule sched;
    const json* segs = find(tr, "trajectory", "segments");
    if (!segs) fail("trajectory.segments", "missing required field");
    if (!segs->is_array() || segs->empty())
      fail("trajectory.segments", "expected a nonempty array");
    std::size_t idx = 0;
    for (const auto& s : *segs) {
      const std::string prefix = "trajectory.segments[" + std::to_string(idx++) + "]";
      TrajectorySegment seg;
      reject_unknown(s, prefix, {"param", "value", "max_steps"});
      seg.param = str_required(s, prefix, "param");
      if (!is_parameter_name(seg.param)) fail(prefix + ".param", "unknown parameter name");
      const json* v = find(s, prefix, "value");
      if (!v) fail(prefix + ".value", "missing required field");
      if (!v->is_number()) fail(prefix + ".value", "expected a number");
      seg.value = v->get<double>();
      seg.max_steps = int_or(s, prefix, "max_steps", 0);
      sched.segments.push_back(seg);
    }
    const json* rev = find(tr, "trajectory", "reverse");
    if (rev) {
      if (!rev->is_boolean()) fail("trajectory.reverse", "expected a boolean");
      sched.reverse = rev->get<bool>();
    }
    cfg.trajectory = std::move(sched);
  }

  // normalized echo: identical parse -> identical run
  json echo;
  echo["ring"] = {{"n_cells", cfg.spec.n_cells},
                  {"cell_length", cfg.spec.cell_length},
                  {"dt", cfg.spec.dt}};
  echo["params"] = {{"alpha", cfg.params.alpha}, {"beta", cfg.params.beta},
                    {"gamma_pas", cfg.params.gamma_pas},
                    {"gamma_act", cfg.params.gamma_act},
                    {"gamma_inh", cfg.params.gamma_inh}};
  echo["init"] = {{"noise_sigma", cfg.noise_sigma}};
  echo["criterion"] = {{"deriv_tol", cfg.criterion.deriv_tol},
                       {"hold_steps", cfg.criterion.hold_steps},
                       {"max_steps", cfg.criterion.max_steps}};
  echo["seed"] = cfg.seed;
  echo["sample_stride"] = cfg.sample_stride;
  if (cfg.sweep) {
    echo["sweep"] = {{"axis1", {{"name", cfg.sweep->axis1.name}, {"values", cfg.sweep->axis1.values}}},
                     {"axis2", {{"name", cfg.sweep->axis2.name}, {"values", cfg.sweep->axis2.values}}},
                     {"trials", cfg.sweep->trials}};
  }
  if (cfg.trajectory) {
    json segs = json::array();
    for (const auto& s : cfg.trajectory->segments)
      segs.push_back({{"param", s.param}, {"value", s.value}, {"max_steps", s.max_steps}});
    echo["trajectory"] = {{"segments", segs}, {"reverse", cfg.trajectory->reverse}};
  }
  cfg.echo = std::move(echo);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace loopy::io
