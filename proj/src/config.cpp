#include "vqcfd/config.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "text_util.hpp"

namespace vqcfd {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string> &v) {
  std::string out;
  for (const auto &s : v)
    out += (out.empty() ? "" : "; ") + s;
  return out;
}

// Reads one JSON object, recording type/range problems and unknown keys.
class Section {
public:
  Section(const json *obj, std::string path, std::vector<std::string> &errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (obj_ && !obj_->is_object()) {
      fail("", "must be an object");
      obj_ = nullptr;
    }
  }

  bool has(const std::string &key) const { return obj_ && obj_->contains(key); }

  double number(const std::string &key, double fallback, double lo, bool lo_open,
                double hi = std::numeric_limits<double>::infinity()) {
    const json *v = get(key);
    if (!v)
      return fallback;
    if (!v->is_number()) {
      fail(key, "must be a number");
      return fallback;
    }
    const double x = v->get<double>();
    if (!std::isfinite(x) || (lo_open ? !(x > lo) : !(x >= lo)) || x > hi) {
      fail(key, "out of range (" + detail::fmt_double(x) + ")");
      return fallback;
    }
    return x;
  }

  long long integer(const std::string &key, long long fallback, long long lo, long long hi) {
    const json *v = get(key);
    if (!v)
      return fallback;
    if (!v->is_number_integer()) {
      fail(key, "must be an integer");
      return fallback;
    }
    const long long x = v->get<long long>();
    if (x < lo || x > hi) {
      fail(key, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      return fallback;
    }
    return x;
  }

  bool boolean(const std::string &key, bool fallback) {
    const json *v = get(key);
    if (!v)
      return fallback;
    if (!v->is_boolean()) {
      fail(key, "must be true or false");
      return fallback;
    }
    return v->get<bool>();
  }

  std::string string(const std::string &key, const std::string &fallback,
                     const std::vector<std::string> &choices = {}) {
    const json *v = get(key);
    if (!v)
      return fallback;
    if (!v->is_string()) {
      fail(key, "must be a string");
      return fallback;
    }
    auto s = v->get<std::string>();
    if (!choices.empty() && std::find(choices.begin(), choices.end(), s) == choices.end()) {
      std::string opts;
      for (const auto &c : choices)
        opts += (opts.empty() ? "" : ", ") + c;
      fail(key, "must be one of " + opts);
      return fallback;
    }
    return s;
  }

  bool required(const std::string &key) {
    if (has(key))
      return true;
    fail(key, "is required");
    return false;
  }

  Section child(const std::string &key) { return Section(get(key), name(key), errors_); }

  /// Flags keys that were never read.
  void finish() {
    if (!obj_)
      return;
    for (auto it = obj_->begin(); it != obj_->end(); ++it)
      if (!seen_.count(it.key()))
        fail(it.key(), "unknown key");
  }

private:
  const json *get(const std::string &key) {
    seen_.insert(key);
    if (!obj_ || !obj_->contains(key))
      return nullptr;
    return &obj_->at(key);
  }
  std::string name(const std::string &key) const {
    return path_.empty() ? key : (key.empty() ? path_ : path_ + "." + key);
  }
  void fail(const std::string &key, const std::string &what) {
    errors_.push_back(name(key) + " " + what);
  }

  const json *obj_;
  std::string path_;
  std::vector<std::string> &errors_;
  std::set<std::string> seen_;
};

FieldSpec read_field(Section s, json &resolved) {
  FieldSpec f;
  f.type = s.string("type", "hump", {"hump", "sine", "constant", "csv"});
  resolved = {{"type", f.type}};
  if (f.type == "hump") {
    f.amplitude = s.number("amplitude", 1.0, -1e300, false);
    f.position = s.number("position", 0.5, -1e300, false);
    f.t0 = s.number("t0", 1.0, 0.0, true);
    if (s.has("nu"))
      f.nu = s.number("nu", 1.0, 0.0, true);
    resolved["amplitude"] = f.amplitude;
    resolved["position"] = f.position;
    resolved["t0"] = f.t0;
    if (f.nu)
      resolved["nu"] = *f.nu;
  } else if (f.type == "sine") {
    f.amplitude = s.number("amplitude", 1.0, -1e300, false);
    f.mode = static_cast<int>(s.integer("mode", 1, 0, 1 << 20));
    resolved["amplitude"] = f.amplitude;
    resolved["mode"] = f.mode;
  } else if (f.type == "constant") {
    f.value = s.number("value", 0.0, -1e300, false);
    resolved["value"] = f.value;
  } else if (s.required("path")) {
    f.path = s.string("path", "");
    resolved["path"] = f.path;
  }
  s.finish();
  return f;
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid config: " + join(problems)), problems_(std::move(problems)) {}

GridFunction make_field(const FieldSpec &spec, const Grid &grid, double physics_nu,
                        const std::string &tag) {
  if (spec.type == "hump") {
    const double nu = spec.nu.value_or(physics_nu);
    if (!(nu > 0.0))
      throw std::invalid_argument("hump field needs a positive viscosity");
    const GridFunction f = analytic_hump(spec.amplitude, spec.position, nu, spec.t0, grid);
    return GridFunction(grid, f.values(), tag);
  }
  std::vector<double> v(grid.size());
  if (spec.type == "sine") {
    for (std::size_t k = 0; k < v.size(); ++k)
      v[k] = spec.amplitude *
             std::sin(2.0 * std::numbers::pi * spec.mode * grid.point(k) / grid.length());
    return GridFunction(grid, std::move(v), tag);
  }
  if (spec.type == "constant") {
    v.assign(grid.size(), spec.value);
    return GridFunction(grid, std::move(v), tag);
  }
  if (spec.type == "csv") {
    const GridFunction f = read_csv(spec.path);
    if (f.size() != grid.size())
      throw std::invalid_argument("field file " + spec.path + " has " + std::to_string(f.size()) +
                                  " points, grid has " + std::to_string(grid.size()));
    return GridFunction(grid, f.values(), tag);
  }
  throw std::invalid_argument("unknown field type '" + spec.type + "'");
}

RunConfig parse_run_config(const std::string &text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError({std::string("not valid JSON: ") + e.what()});
  }
  std::vector<std::string> errors;
  RunConfig c;
  Section top(&doc, "", errors);
  json &r = c.resolved;

  Section grid = top.child("grid");
  c.length = grid.number("length", 1.0, 0.0, true);
  c.n_qubits = static_cast<int>(grid.integer("n_qubits", 5, 2, 16));
  grid.finish();
  r["grid"] = {{"length", c.length}, {"n_qubits", c.n_qubits}};

  auto &e = c.evolution;
  Section phys = top.child("physics");
  e.nu = phys.number("nu", 0.01, 0.0, false);
  e.tau = phys.number("tau", 0.01, 0.0, true);
  e.steps = static_cast<int>(phys.integer("steps", 10, 0, 1000000));
  e.nonlinear = phys.boolean("nonlinear", true);
  e.allow_unstable = phys.boolean("allow_unstable", false);
  phys.finish();
  r["physics"] = {{"nu", e.nu},
                  {"tau", e.tau},
                  {"steps", e.steps},
                  {"nonlinear", e.nonlinear},
                  {"allow_unstable", e.allow_unstable}};

  if (top.has("initial"))
    c.initial = read_field(top.child("initial"), r["initial"]);
  else {
    c.initial = FieldSpec{};
    c.initial.amplitude = 0.1;
    c.initial.t0 = 0.5;
    r["initial"] = {{"type", "hump"}, {"amplitude", 0.1}, {"position", 0.5}, {"t0", 0.5}};
  }

  Section ans = top.child("ansatz");
  e.depth = static_cast<int>(ans.integer("depth", 0, 0, 1 << 16));
  ans.finish();
  r["ansatz"] = {{"depth", e.depth}};

  Section opt = top.child("optimizer");
  const std::string method =
      opt.string("method", "gradient_descent", {"gradient_descent", "lbfgs", "compass"});
  e.optimizer.kind = parse_optimizer(method);
  e.optimizer.max_iters = static_cast<int>(opt.integer("max_iters", 2000, 1, 100000000));
  e.optimizer.tol = opt.number("tol", 1e-14, 0.0, true);
  e.optimizer.grad_tol = opt.number("grad_tol", 1e-11, 0.0, false);
  e.optimizer.patience = static_cast<int>(opt.integer("patience", 3, 1, 1000000));
  e.optimizer.step = opt.number("step", 0.5, 0.0, true);
  e.restarts = static_cast<int>(opt.integer("restarts", 3, 0, 1000));
  e.warm_start = opt.boolean("warm_start", true);
  e.acceptance_ceiling = opt.number("acceptance_ceiling", 1e-8, 0.0, true);
  e.record_trace = opt.boolean("record_trace", false);
  opt.finish();
  r["optimizer"] = {{"method", method},
                    {"max_iters", e.optimizer.max_iters},
                    {"tol", e.optimizer.tol},
                    {"grad_tol", e.optimizer.grad_tol},
                    {"patience", e.optimizer.patience},
                    {"step", e.optimizer.step},
                    {"restarts", e.restarts},
                    {"warm_start", e.warm_start},
                    {"acceptance_ceiling", e.acceptance_ceiling},
                    {"record_trace", e.record_trace}};

  Section be = top.child("backend");
  const std::string backend = be.string("type", "direct", {"direct", "circuit"});
  e.backend = parse_backend(backend);
  const long long shots = be.integer("shots", 0, 0, 1LL << 40);
  be.finish();
  r["backend"] = {{"type", backend}, {"shots", shots}};

  const long long seed = top.integer("seed", 1, 0, std::numeric_limits<long long>::max());
  e.seed = static_cast<std::uint64_t>(seed);
  e.shots = shots > 0 ? ShotModel{ShotModel::Mode::sampled, shots, e.seed} : ShotModel::exact();
  r["seed"] = seed;

  Section adj = top.child("adjoint");
  const std::string disc = adj.string("discretization", "consistent", {"consistent", "literal"});
  c.discretization = parse_adjoint_discretization(disc);
  r["adjoint"] = {{"discretization", disc}};
  if (adj.has("terminal"))
    c.terminal = read_field(adj.child("terminal"), r["adjoint"]["terminal"]);
  if (adj.has("source"))
    c.source = read_field(adj.child("source"), r["adjoint"]["source"]);
  adj.finish();

  Section out = top.child("output");
  c.out_dir = out.string("dir", "out");
  c.write_fields = out.boolean("fields", true);
  out.finish();
  r["output"] = {{"dir", c.out_dir}, {"fields", c.write_fields}};

  top.finish();
  if (!errors.empty())
    throw ConfigError(std::move(errors));
  return c;
}

RunConfig load_run_config(const std::string &path) {
  std::string text;
  try {
    text = detail::read_file(path);
  } catch (const std::exception &e) {
    throw ConfigError({e.what()});
  }
  return parse_run_config(text);
}

std::string config_schema_text() {
  return R"(Run configuration (JSON object; every key optional unless noted)
  grid.length          > 0, domain length [length]               default 1
  grid.n_qubits        integer 2..16, 2^N grid points             default 5
  physics.nu           >= 0, kinematic viscosity [length^2/time]  default 0.01
  physics.tau          > 0, Euler time step [time]                default 0.01
  physics.steps        integer >= 0                               default 10
  physics.nonlinear    bool, include the u du/dx term             default true
  physics.allow_unstable bool, skip the 10x stability hard error  default false
  initial              field (below)                              default hump 0.1 @ 0.5, t0 0.5
  ansatz.depth         integer >= 0, 0 = 2^N                      default 0
  optimizer.method     gradient_descent | lbfgs | compass         default gradient_descent
  optimizer.max_iters  integer >= 1                               default 2000
  optimizer.tol        > 0, stop when improvement < tol           default 1e-14
  optimizer.grad_tol   >= 0, stop when |grad|_inf <= grad_tol     default 1e-11
  optimizer.patience   integer >= 1                               default 3
  optimizer.step       > 0, initial step                          default 0.5
  optimizer.restarts   integer >= 0                               default 3
  optimizer.warm_start bool                                       default true
  optimizer.acceptance_ceiling > 0, max residual per step         default 1e-8
  optimizer.record_trace bool, write per-iteration traces         default false
  backend.type         direct | circuit                           default direct
  backend.shots        integer >= 0, 0 = exact                    default 0
  seed                 integer >= 0                               default 1
  adjoint.discretization consistent | literal                     default consistent
  adjoint.terminal     field, adjoint state at the final time     default zero
  adjoint.source       field, constant source S                   default zero
  output.dir           string                                     default "out"
  output.fields        bool, per-point columns in trajectories    default true
Fields:
  {"type":"hump","amplitude":Z [velocity*length],"position":x0 [length],"t0":t [time],"nu":nu}
  {"type":"sine","amplitude":a [velocity],"mode":m}
  {"type":"constant","value":c [velocity]}
  {"type":"csv","path":"file with x,f header"}
)";
}

} // namespace vqcfd
