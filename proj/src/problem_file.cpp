#include "sweep/problem_file.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <memory>
#include <sstream>

#include "json.hpp"

#include "sweep/errors.hpp"
#include "sweep/types.hpp"

namespace sweep {
namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void allow_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || item.key() == k;
    if (!known) fail(where, "unknown key '" + item.key() + "'");
  }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing required key '") + key + "'");
  return *it;
}

double read_real(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  fail(where, "expected a number");
}

json write_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

std::size_t read_count(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail(where, "expected a nonnegative integer");
  }
  return v.get<std::size_t>();
}

bool read_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) fail(where, "expected true or false");
  return v.get<bool>();
}

std::string read_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

std::vector<double> read_list(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(read_real(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

json write_list(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(write_real(x));
  return out;
}

RealRows read_rows(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected a row-major array of rows");
  RealRows out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(read_list(v[i], where + "[" + std::to_string(i) + "]"));
    if (out.back().size() != out.front().size()) fail(where, "ragged rows");
  }
  return out;
}

json write_rows(const RealRows& rows) {
  json out = json::array();
  for (const auto& r : rows) out.push_back(write_list(r));
  return out;
}

SignalChannel read_channel(const json& v, const std::string& where) {
  const std::string type = read_string(require(v, where, "type"), where + ".type");
  if (type == "sine") {
    allow_keys(v, where, {"type", "amplitude", "frequency", "offset"});
    SineChannel c;
    if (v.contains("amplitude")) c.amplitude = read_real(v["amplitude"], where + ".amplitude");
    if (v.contains("frequency")) c.frequency = read_real(v["frequency"], where + ".frequency");
    if (v.contains("offset")) c.offset = read_real(v["offset"], where + ".offset");
    return c;
  }
  if (type == "sign_of_sine") {
    allow_keys(v, where, {"type", "frequency"});
    SignOfSineChannel c;
    if (v.contains("frequency")) c.frequency = read_real(v["frequency"], where + ".frequency");
    return c;
  }
  if (type == "constant") {
    allow_keys(v, where, {"type", "value"});
    return ConstantChannel{read_real(require(v, where, "value"), where + ".value")};
  }
  if (type == "piecewise_linear") {
    allow_keys(v, where, {"type", "knots"});
    PiecewiseLinearChannel c;
    for (const auto& row : read_rows(require(v, where, "knots"), where + ".knots")) {
      if (row.size() != 2) fail(where + ".knots", "each knot is [time, value]");
      c.knots.emplace_back(row[0], row[1]);
    }
    return c;
  }
  fail(where + ".type", "unknown signal type '" + type + "'");
}

json write_channel(const SignalChannel& channel) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SineChannel>) {
          return {{"type", "sine"}, {"amplitude", c.amplitude},
                  {"frequency", c.frequency}, {"offset", c.offset}};
        } else if constexpr (std::is_same_v<T, SignOfSineChannel>) {
          return {{"type", "sign_of_sine"}, {"frequency", c.frequency}};
        } else if constexpr (std::is_same_v<T, ConstantChannel>) {
          return {{"type", "constant"}, {"value", c.value}};
        } else {
          RealRows knots;
          for (const auto& [t, y] : c.knots) knots.push_back({t, y});
          return {{"type", "piecewise_linear"}, {"knots", write_rows(knots)}};
        }
      },
      channel);
}

SetConfig read_set(const json& v) {
  const std::string where = "set";
  allow_keys(v, where, {"type", "normal", "offset", "lower", "upper", "center",
                        "radius", "P", "C", "G", "F", "velocity", "projector",
                        "lag_fraction"});
  SetConfig s;
  s.type = read_string(require(v, where, "type"), "set.type");
  if (v.contains("normal")) s.normal = read_list(v["normal"], "set.normal");
  if (v.contains("offset")) s.offset = read_real(v["offset"], "set.offset");
  if (v.contains("lower")) s.lower = read_list(v["lower"], "set.lower");
  if (v.contains("upper")) s.upper = read_list(v["upper"], "set.upper");
  if (v.contains("center")) s.center = read_list(v["center"], "set.center");
  if (v.contains("radius")) s.radius = read_real(v["radius"], "set.radius");
  if (v.contains("P")) s.P = read_rows(v["P"], "set.P");
  if (v.contains("C")) s.C = read_rows(v["C"], "set.C");
  if (v.contains("G")) s.G = read_rows(v["G"], "set.G");
  if (v.contains("F")) s.F = read_list(v["F"], "set.F");
  if (v.contains("velocity")) s.velocity = read_list(v["velocity"], "set.velocity");
  if (v.contains("projector")) s.projector = read_string(v["projector"], "set.projector");
  if (v.contains("lag_fraction")) {
    s.lag_fraction = read_real(v["lag_fraction"], "set.lag_fraction");
  }
  if (s.type != "halfspace" && s.type != "box" && s.type != "ball" &&
      s.type != "orthant" && s.type != "polyhedron") {
    fail("set.type", "unknown set type '" + s.type + "'");
  }
  if (s.projector != "exact" && s.projector != "outside_lagging") {
    fail("set.projector", "expected \"exact\" or \"outside_lagging\"");
  }
  return s;
}

json write_set(const SetConfig& s) {
  json v = {{"type", s.type}, {"offset", s.offset}, {"radius", s.radius},
            {"projector", s.projector}, {"lag_fraction", s.lag_fraction}};
  auto put_list = [&v](const char* key, const std::vector<double>& xs) {
    if (!xs.empty()) v[key] = write_list(xs);
  };
  auto put_rows = [&v](const char* key, const RealRows& rows) {
    if (!rows.empty()) v[key] = write_rows(rows);
  };
  put_list("normal", s.normal);
  put_list("lower", s.lower);
  put_list("upper", s.upper);
  put_list("center", s.center);
  put_rows("P", s.P);
  put_rows("C", s.C);
  put_rows("G", s.G);
  put_list("F", s.F);
  put_list("velocity", s.velocity);
  return v;
}

DriftConfig read_drift(const json& v) {
  allow_keys(v, "drift", {"matrix", "offset", "input_matrix", "gamma"});
  DriftConfig d;
  if (v.contains("matrix")) d.matrix = read_rows(v["matrix"], "drift.matrix");
  if (v.contains("offset")) d.offset = read_list(v["offset"], "drift.offset");
  if (v.contains("input_matrix")) {
    d.input_matrix = read_rows(v["input_matrix"], "drift.input_matrix");
  }
  if (v.contains("gamma")) d.gamma = read_real(v["gamma"], "drift.gamma");
  return d;
}

LcsConfig read_lcs(const json& v) {
  allow_keys(v, "lcs", {"A", "B", "C", "E", "F", "G", "P", "gamma",
                        "discontinuous_input"});
  LcsConfig l;
  l.A = read_rows(require(v, "lcs", "A"), "lcs.A");
  l.B = read_rows(require(v, "lcs", "B"), "lcs.B");
  l.C = read_rows(require(v, "lcs", "C"), "lcs.C");
  if (v.contains("E")) l.E = read_rows(v["E"], "lcs.E");
  if (v.contains("F")) l.F = read_list(v["F"], "lcs.F");
  if (v.contains("G")) l.G = read_rows(v["G"], "lcs.G");
  if (v.contains("P")) l.P = read_rows(v["P"], "lcs.P");
  if (v.contains("gamma")) l.gamma = read_real(v["gamma"], "lcs.gamma");
  if (v.contains("discontinuous_input")) {
    l.discontinuous_input = read_bool(v["discontinuous_input"], "lcs.discontinuous_input");
  }
  return l;
}

json write_lcs(const LcsConfig& l) {
  json v = {{"A", write_rows(l.A)}, {"B", write_rows(l.B)}, {"C", write_rows(l.C)},
            {"gamma", l.gamma}, {"discontinuous_input", l.discontinuous_input}};
  if (!l.E.empty()) v["E"] = write_rows(l.E);
  if (!l.F.empty()) v["F"] = write_list(l.F);
  if (!l.G.empty()) v["G"] = write_rows(l.G);
  if (l.P) v["P"] = write_rows(*l.P);
  return v;
}

// ---------------------------------------------------------------------------

Matrix to_matrix(const RealRows& rows, Eigen::Index r_default, Eigen::Index c_default,
                 const std::string& name) {
  if (rows.empty()) return Matrix::Zero(r_default, c_default);
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  if (!m.allFinite()) fail(name, "entries must be finite");
  return m;
}

Vector to_vector(const std::vector<double>& xs) {
  return Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

void check_size(const std::vector<double>& xs, std::size_t d, const std::string& name) {
  if (xs.size() != d) {
    fail(name, "expected " + std::to_string(d) + " entries, got " +
                   std::to_string(xs.size()));
  }
}

SetDescriptor build_set(const SetConfig& s, std::size_t d, const Signal& u) {
  const bool closed_form = s.type != "polyhedron";
  if (!closed_form && (!s.velocity.empty() || s.projector != "exact")) {
    fail("set", "velocity and outside_lagging apply to closed-form sets only");
  }

  std::optional<SetDescriptor> base;
  if (s.type == "halfspace") {
    check_size(s.normal, d, "set.normal");
    base = SetDescriptor::halfspace(to_vector(s.normal), s.offset);
  } else if (s.type == "box") {
    check_size(s.lower, d, "set.lower");
    check_size(s.upper, d, "set.upper");
    base = SetDescriptor::box(to_vector(s.lower), to_vector(s.upper));
  } else if (s.type == "ball") {
    check_size(s.center, d, "set.center");
    base = SetDescriptor::ball(to_vector(s.center), s.radius);
  } else if (s.type == "orthant") {
    base = SetDescriptor::nonnegative_orthant();
  } else {
    const auto n = static_cast<Eigen::Index>(d);
    const Matrix C = to_matrix(s.C, 0, n, "set.C");
    const Eigen::Index m = C.rows();
    const Matrix P = s.P.empty() ? Matrix(Matrix::Identity(n, n))
                                 : to_matrix(s.P, n, n, "set.P");
    const Matrix G = to_matrix(s.G, m, static_cast<Eigen::Index>(u.dim()), "set.G");
    const Vector F = s.F.empty() ? Vector(Vector::Zero(m)) : to_vector(s.F);
    return SetDescriptor::metric_polyhedron(
        std::make_shared<const MetricPolyhedron>(P, C, G, F, u));
  }

  if (!s.velocity.empty()) {
    check_size(s.velocity, d, "set.velocity");
    base = SetDescriptor::translating(*base, to_vector(s.velocity));
  }
  if (s.projector == "outside_lagging") return outside_lagging(*base, s.lag_fraction);
  return *base;
}

Perturbation build_drift(const std::optional<DriftConfig>& cfg, std::size_t d,
                         const Signal& u) {
  if (!cfg) return Perturbation::zero();
  const auto n = static_cast<Eigen::Index>(d);
  const auto p = static_cast<Eigen::Index>(u.dim());
  const Matrix M = to_matrix(cfg->matrix, n, n, "drift.matrix");
  const Matrix E = to_matrix(cfg->input_matrix, n, p, "drift.input_matrix");
  if (M.rows() != n || M.cols() != n) fail("drift.matrix", "must be d x d");
  if (E.rows() != n || E.cols() != p) fail("drift.input_matrix", "must be d x dim(u)");
  if (!cfg->offset.empty()) check_size(cfg->offset, d, "drift.offset");
  const Vector c = cfg->offset.empty() ? Vector(Vector::Zero(n)) : to_vector(cfg->offset);
  if (!(cfg->gamma > 0.0)) fail("drift.gamma", "must be positive");

  const double lh = spectral_norm(M);
  const double tail = c.norm() + spectral_norm(E) * u.sup_norm();
  Perturbation pert;
  pert.gamma = cfg->gamma;
  pert.lipschitz_h = lh;
  pert.h = [lh, tail](const Point& x) { return lh * x.norm() + tail; };
  pert.f = [M, c, E, u](double t, const Point& x) -> Vector {
    Vector v = M * x + c;
    if (E.cols() > 0) v += E * u(t);
    return v;
  };
  return pert;
}

RunOptions run_options(const SolverConfig& s) {
  RunOptions o;
  o.quadrature_subintervals = s.quadrature_subintervals;
  o.max_proj_iters = s.max_proj_iters;
  o.check_every = s.check_every;
  o.warm_start = s.warm_start;
  return o;
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  allow_keys(root, "problem", {"kind", "horizon", "initial_state", "schedule",
                               "solver", "signal", "set", "drift", "lcs"});
  ProblemFile f;
  f.kind = read_string(require(root, "problem", "kind"), "kind");
  if (f.kind != "sweeping" && f.kind != "lcs") {
    fail("kind", "expected \"sweeping\" or \"lcs\", got \"" + f.kind + "\"");
  }
  if (root.contains("horizon")) f.horizon = read_real(root["horizon"], "horizon");
  f.initial_state = read_list(require(root, "problem", "initial_state"), "initial_state");

  const json& sched = require(root, "problem", "schedule");
  allow_keys(sched, "schedule", {"n", "eps_exponent", "eta_exponent"});
  f.schedule.n = read_count(require(sched, "schedule", "n"), "schedule.n");
  if (sched.contains("eps_exponent")) {
    f.schedule.eps_exponent = read_real(sched["eps_exponent"], "schedule.eps_exponent");
  }
  if (sched.contains("eta_exponent")) {
    f.schedule.eta_exponent = read_real(sched["eta_exponent"], "schedule.eta_exponent");
  }

  if (root.contains("solver")) {
    const json& s = root["solver"];
    allow_keys(s, "solver", {"quadrature_subintervals", "max_proj_iters",
                             "check_every", "warm_start"});
    if (s.contains("quadrature_subintervals")) {
      f.solver.quadrature_subintervals =
          read_count(s["quadrature_subintervals"], "solver.quadrature_subintervals");
    }
    if (s.contains("max_proj_iters")) {
      f.solver.max_proj_iters = read_count(s["max_proj_iters"], "solver.max_proj_iters");
    }
    if (s.contains("check_every")) {
      f.solver.check_every = read_count(s["check_every"], "solver.check_every");
    }
    if (s.contains("warm_start")) {
      f.solver.warm_start = read_bool(s["warm_start"], "solver.warm_start");
    }
  }

  if (root.contains("signal")) {
    const json& sig = root["signal"];
    if (!sig.is_array()) fail("signal", "expected an array of channels");
    for (std::size_t i = 0; i < sig.size(); ++i) {
      f.signal.push_back(read_channel(sig[i], "signal[" + std::to_string(i) + "]"));
    }
  }

  if (f.kind == "sweeping") {
    if (root.contains("lcs")) fail("lcs", "not allowed in a sweeping problem");
    f.set = read_set(require(root, "problem", "set"));
    if (root.contains("drift")) f.drift = read_drift(root["drift"]);
  } else {
    if (root.contains("set") || root.contains("drift")) {
      fail("problem", "set and drift are not allowed in an lcs problem");
    }
    f.lcs = read_lcs(require(root, "problem", "lcs"));
  }
  return f;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_problem(text.str());
}

std::string serialize_problem(const ProblemFile& f) {
  json root;
  root["kind"] = f.kind;
  root["horizon"] = f.horizon;
  root["initial_state"] = write_list(f.initial_state);
  root["schedule"] = {{"n", f.schedule.n},
                      {"eps_exponent", f.schedule.eps_exponent},
                      {"eta_exponent", f.schedule.eta_exponent}};
  root["solver"] = {{"quadrature_subintervals", f.solver.quadrature_subintervals},
                    {"max_proj_iters", f.solver.max_proj_iters},
                    {"check_every", f.solver.check_every},
                    {"warm_start", f.solver.warm_start}};
  json sig = json::array();
  for (const auto& c : f.signal) sig.push_back(write_channel(c));
  root["signal"] = sig;
  if (f.set) root["set"] = write_set(*f.set);
  if (f.drift) {
    json d = {{"gamma", f.drift->gamma}};
    if (!f.drift->matrix.empty()) d["matrix"] = write_rows(f.drift->matrix);
    if (!f.drift->offset.empty()) d["offset"] = write_list(f.drift->offset);
    if (!f.drift->input_matrix.empty()) {
      d["input_matrix"] = write_rows(f.drift->input_matrix);
    }
    root["drift"] = d;
  }
  if (f.lcs) root["lcs"] = write_lcs(*f.lcs);
  return root.dump(2) + "\n";
}

Schedule BuiltProblem::schedule() const {
  return make_schedule(n, study.horizon, study.eps_exponent, study.eta_exponent);
}

BuiltProblem build_lcs_problem(const LCSystem& system, double horizon,
                               const ScheduleConfig& schedule,
                               const RunOptions& options, double gamma) {
  SweepingReformulation reform = lcs_to_sweeping(system, gamma);
  StudyProblem study{reform.set,  reform.perturbation,   reform.z0,
                     horizon,     schedule.eps_exponent, schedule.eta_exponent,
                     options};
  BuiltProblem built{std::move(study), schedule.n, system, std::move(reform)};
  built.schedule();  // surfaces InadmissibleExponents before any run
  return built;
}

BuiltProblem build_problem(const ProblemFile& f) {
  if (f.initial_state.empty()) fail("initial_state", "must not be empty");
  const std::size_t d = f.initial_state.size();
  Signal u;
  try {
    u = Signal(f.signal);
  } catch (const SweepError& e) {
    fail("signal", e.what());
  }

  if (f.kind == "lcs") {
    const LcsConfig& l = *f.lcs;
    const auto n = static_cast<Eigen::Index>(d);
    const auto p = static_cast<Eigen::Index>(u.dim());
    LCSystem sys;
    sys.A = to_matrix(l.A, n, n, "lcs.A");
    sys.B = to_matrix(l.B, n, 0, "lcs.B");
    sys.C = to_matrix(l.C, 0, n, "lcs.C");
    const Eigen::Index m = sys.C.rows();
    sys.E = to_matrix(l.E, n, p, "lcs.E");
    sys.G = to_matrix(l.G, m, p, "lcs.G");
    sys.F = l.F.empty() ? Vector(Vector::Zero(m)) : to_vector(l.F);
    if (l.P) sys.P = to_matrix(*l.P, n, n, "lcs.P");
    sys.u = u;
    sys.x0 = to_vector(f.initial_state);
    sys.discontinuous_input = l.discontinuous_input;
    return build_lcs_problem(sys, f.horizon, f.schedule, run_options(f.solver),
                             l.gamma);
  }

  StudyProblem study{build_set(*f.set, d, u),
                     build_drift(f.drift, d, u),
                     to_vector(f.initial_state),
                     f.horizon,
                     f.schedule.eps_exponent,
                     f.schedule.eta_exponent,
                     run_options(f.solver)};
  BuiltProblem built{std::move(study), f.schedule.n, std::nullopt, std::nullopt};
  built.schedule();
  return built;
}

}  // namespace sweep
