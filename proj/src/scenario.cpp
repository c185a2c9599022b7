#include "lindyn/scenario.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace lindyn {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  fail(ErrorCode::ConfigInvalid, where + ": " + what);
}

enum class PType { Int, Number, Bool, String, Array, Object, Any };

struct ParamSpec {
  const char* key;
  PType type;
};

const std::map<std::string, std::vector<ParamSpec>>& schemas() {
  static const std::map<std::string, std::vector<ParamSpec>> s = {
      {"classify", {{"horizon", PType::Int}, {"perseguido", PType::Bool}}},
      {"bounds", {}},
      {"shadow",
       {{"delta", PType::Number},
        {"n0", PType::Int},
        {"n1", PType::Int},
        {"method", PType::String},
        {"seed", PType::Any},
        {"bounded", PType::Bool}}},
      {"linf",
       {{"N", PType::Array}, {"samples", PType::Int}, {"scan_radii", PType::Array}, {"scan_trials", PType::Int}}},
      {"expansivity", {{"N", PType::Array}, {"m_max", PType::Int}, {"horizon", PType::Int}}},
      {"hypercyclic", {{"targets", PType::Int}, {"support", PType::Int}, {"eps", PType::Number}, {"step_budget", PType::Int}}},
      {"conjugacy",
       {{"beta", PType::Object},
        {"map", PType::Object},
        {"p", PType::Array},
        {"box_radius", PType::Number},
        {"tol", PType::Number},
        {"test_points", PType::Int},
        {"radius", PType::Number},
        {"car", PType::Bool},
        {"car_trials", PType::Int},
        {"car_len", PType::Int}}},
      {"homoclinic", {{"horizon", PType::Int}, {"tol", PType::Number}, {"x", PType::Any}, {"n", PType::Array}}},
      {"suite", {{"seed", PType::Int}, {"size", PType::Int}}},
  };
  return s;
}

bool type_ok(const Json& v, PType t) {
  switch (t) {
    case PType::Int: return v.is_number_integer();
    case PType::Number: return v.is_number();
    case PType::Bool: return v.is_boolean();
    case PType::String: return v.is_string();
    case PType::Array: return v.is_array();
    case PType::Object: return v.is_object();
    case PType::Any: return true;
  }
  return false;
}

// Read access to one task's parameter table with location-tagged errors.
class Params {
 public:
  Params(const Json& table, std::string where) : t_(table), where_(std::move(where)) {}
  bool has(const char* k) const { return t_.contains(k); }
  const Json& raw(const char* k) const { return t_.at(k); }
  std::string at(const char* k) const { return where_ + "." + k; }

  long integer(const char* k, long def, long lo, long hi) const {
    if (!has(k)) return def;
    const long v = t_[k].get<long>();
    if (v < lo || v > hi) bad(at(k), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }
  double real(const char* k, double def, bool positive = true) const {
    if (!has(k)) return def;
    const double v = t_[k].get<double>();
    if (!std::isfinite(v) || (positive && !(v > 0.0))) bad(at(k), "must be a positive finite number");
    return v;
  }
  bool flag(const char* k, bool def) const { return has(k) ? t_[k].get<bool>() : def; }
  std::string text(const char* k, const std::string& def) const { return has(k) ? t_[k].get<std::string>() : def; }
  std::vector<int> ints(const char* k, std::vector<int> def, int lo, int hi) const {
    if (!has(k)) return def;
    std::vector<int> out;
    for (std::size_t i = 0; i < t_[k].size(); ++i) {
      const Json& v = t_[k][i];
      const std::string w = at(k) + "[" + std::to_string(i) + "]";
      if (!v.is_number_integer()) bad(w, "expected an integer");
      const long x = v.get<long>();
      if (x < lo || x > hi) bad(w, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      out.push_back(static_cast<int>(x));
    }
    return out;
  }
  std::vector<double> reals(const char* k, std::vector<double> def) const {
    if (!has(k)) return def;
    std::vector<double> out;
    for (std::size_t i = 0; i < t_[k].size(); ++i) {
      const Json& v = t_[k][i];
      if (!v.is_number()) bad(at(k) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v.get<double>());
    }
    return out;
  }

 private:
  const Json& t_;
  std::string where_;
};

struct Context {
  const Scenario& s;
  LinOp op;
  std::optional<Splitting> split_cache;

  const Splitting& split() {
    if (!split_cache) {
      if (s.splitting_desc) {
        split_cache = splitting_from_json(*s.splitting_desc, op, "$.splitting");
      } else if (op.is_dense()) {
        split_cache = spectral_split(op);
      } else {
        fail(ErrorCode::InvalidArgument, "sequence operators need an explicit splitting");
      }
    }
    return *split_cache;
  }
};

Json task_classify(Context& c, const Params& p) {
  const int horizon = static_cast<int>(p.integer("horizon", 64, 1, 10000));
  Json j = Json::object();
  j["operator"] = to_json(operator_report(c.op));
  if (p.flag("perseguido", false)) {
    if (c.op.kind() != OpKind::Composition || c.op.factors().size() != 2)
      bad(p.at("perseguido"), "needs an operator composed of exactly two factors R∘W");
    j["hyperbolicity"] = to_json(perseguido_check(c.op.factors()[1], c.op.factors()[0], c.split()));
  } else {
    j["hyperbolicity"] = to_json(classify(c.op, c.split(), horizon));
  }
  return j;
}

Json task_bounds(Context& c, const Params&) { return to_json(shad_bounds(c.op, c.split())); }

template <class V>
Json shadow_run(Context& c, const Params& p, const V& seed) {
  const double delta = p.real("delta", 1e-4);
  const long n0 = p.integer("n0", 0, -100000, 100000);
  const long n1 = p.integer("n1", 50, n0 + 1, n0 + 100000);
  const std::string method = p.text("method", "series");
  if (method != "series" && method != "contraction" && method != "window")
    bad(p.at("method"), "method must be series, contraction or window");
  const bool bounded = p.flag("bounded", method == "series");
  PseudoOrbit<V> po = bounded ? generate_bounded_pseudo_orbit(c.op, c.split(), seed, n0, n1, delta, c.s.rng_seed)
                              : generate_pseudo_orbit(c.op, seed, n0, n1, delta, c.s.rng_seed);
  ShadowResult<V> r;
  if (method == "series") {
    r = shadow_splitting_series(c.op, c.split(), po);
  } else if (method == "contraction") {
    r = shadow_contraction(c.op, po);
  } else {
    if constexpr (std::is_same_v<V, DenseVector>) {
      r = shadow_window_solve(c.op, po);
    } else {
      bad(p.at("method"), "window solving needs a dense operator");
    }
  }
  Json j{{"method", shadow_method_name(r.method)},
         {"delta", number(delta)},
         {"measured_defect", number(po.measured_defect)},
         {"points", po.size()},
         {"sup_error", number(r.sup_error)},
         {"constant_used", number(r.constant_used)},
         {"error_over_delta", number(r.sup_error / delta)},
         {"orbit_residual", number(r.orbit_residual)},
         {"shadow_seed", vector_to_json(r.shadow_seed)}};
  return j;
}

Json task_shadow(Context& c, const Params& p) {
  if (c.op.is_dense()) {
    DenseVector seed = DenseVector::basis(c.op.dim(), 0, c.op.tag());
    if (p.has("seed")) {
      seed = dense_vector_from_json(p.raw("seed"), c.op.tag(), p.at("seed"));
      if (seed.dim() != c.op.dim()) bad(p.at("seed"), "seed dimension does not match the operator");
    }
    return shadow_run(c, p, seed);
  }
  SparseBiSeq seed = SparseBiSeq::basis(0, c.op.tag());
  if (p.has("seed")) seed = sequence_from_json(p.raw("seed"), c.op.tag(), p.at("seed"));
  return shadow_run(c, p, seed);
}

Json task_linf(Context& c, const Params& p) {
  const auto Ns = p.ints("N", {8, 16, 32, 64}, 1, 256);
  const int samples = static_cast<int>(p.integer("samples", 64, 1, 4096));
  Json rows = Json::array();
  bool est_monotone = true, margin_decreasing = true;
  double prev_est = -kInf, prev_margin = kInf;
  for (int N : Ns) {
    const WindowedLinf w{c.op, N};
    const double est = shad_estimate_linf(w, samples, c.s.rng_seed).estimate;
    const double margin = linf_injectivity_margin(w);
    est_monotone = est_monotone && est >= prev_est;
    margin_decreasing = margin_decreasing && margin < prev_margin;
    prev_est = est;
    prev_margin = margin;
    rows.push_back(Json{{"N", N}, {"estimate", number(est)}, {"margin", number(margin)}});
  }
  Json j{{"table", rows}, {"estimate_nondecreasing", est_monotone}, {"margin_decreasing", margin_decreasing}};
  if (p.has("scan_radii")) {
    const auto radii = p.reals("scan_radii", {});
    const int trials = static_cast<int>(p.integer("scan_trials", 10, 1, 1000));
    j["robustness_scan"] = to_json(shadowing_robustness_scan(c.op, radii, trials, c.s.rng_seed));
  }
  return j;
}

Json task_expansivity(Context& c, const Params& p) {
  const int m_max = static_cast<int>(p.integer("m_max", 8, 1, 1000));
  Json j = Json::object();
  j["eigen_verdict"] = expansive_verdict_name(expansive_eigen_test(c.op));
  if (c.op.is_dense()) {
    j["window_growth"] = to_json(central_window_growth(c.op, p.ints("N", {0, 1, 2, 4, 8}, 0, 256)));
    j["uniform"] = to_json(uniform_expansivity_search(c.op, m_max, default_samples(c.op.dim(), c.op.tag(), c.s.rng_seed)));
  } else {
    j["uniform"] = to_json(uniform_expansivity_search(c.op, m_max, default_sequence_samples(c.op.tag(), c.s.rng_seed)));
  }
  try {
    const auto cert = ecs_certificate(c.op, c.split(), static_cast<int>(p.integer("horizon", 50, 1, 10000)));
    j["ecs_certificate"] = cert ? Json{{"c", number(cert->c)}, {"beta", number(cert->beta)}, {"horizon", cert->horizon}}
                                : Json(nullptr);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    j["ecs_certificate"] = nullptr;
    j["ecs_note"] = e.what();
  }
  return j;
}

Json task_hypercyclic(Context& c, const Params& p) {
  if (c.op.is_dense()) return Json{{"adjoint_obstruction", to_json(adjoint_eigen_obstruction(c.op))}};
  if (c.op.kind() != OpKind::BackwardScaled) fail(ErrorCode::KindMismatch, "hypercyclic witness needs a backward_scaled operator");
  const Scalar f = c.op.shift_form().weight.right;
  if (f.imag() != 0.0) fail(ErrorCode::BadFactor, "factor must be real");
  if (c.op.tag() != NormTag::L2) fail(ErrorCode::KindMismatch, "the criterion witness works in l2");
  const CriterionData cd = rolewicz_criterion(f.real());
  const int count = static_cast<int>(p.integer("targets", 3, 1, 64));
  const long support = p.integer("support", 4, 1, 256);
  const double eps = p.real("eps", 1e-6);
  const long budget = p.integer("step_budget", 1000, 1, 1000000);
  std::mt19937_64 rng(c.s.rng_seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<SparseBiSeq> targets;
  for (int t = 0; t < count; ++t) {
    SparseBiSeq y(NormTag::L2);
    for (long k = 0; k < support; ++k) y.set(k, u(rng));
    targets.push_back(y);
  }
  const WitnessResult w = criterion_witness(cd, targets, eps, budget);
  Json tj = Json::array();
  for (const auto& y : targets) tj.push_back(vector_to_json(y));
  return Json{{"factor", number(f.real())}, {"eps", number(eps)}, {"targets", tj}, {"witness", to_json(w)}};
}

Point point_from(const Json& j, int d, const std::string& where) {
  CVector v = cvector_from_json(j, where);
  if (v.size() != d) bad(where, "expected " + std::to_string(d) + " coordinates");
  return v;
}

LipschitzPerturbation beta_from(const Json& b, int d, NormTag tag, const std::string& where) {
  const std::string kind = b.value("kind", "");
  if (kind == "zero") return LipschitzPerturbation::zero(d);
  if (kind == "constant") {
    if (!b.contains("value")) bad(where, "missing \"value\"");
    return LipschitzPerturbation::constant(point_from(b["value"], d, where + ".value"), tag);
  }
  if (kind == "bump") {
    if (!b.contains("center") || !b.contains("direction")) bad(where, "bump needs center and direction");
    const Point center = point_from(b["center"], d, where + ".center");
    const Point dir = point_from(b["direction"], d, where + ".direction");
    if (b.contains("radius")) {
      if (!b["radius"].is_number() || !(b["radius"].get<double>() > 0.0)) bad(where + ".radius", "must be positive");
      return LipschitzPerturbation::bump(center, dir, b["radius"].get<double>(), tag);
    }
    if (!b.contains("sup") || !b.contains("lip") || !b["sup"].is_number() || !b["lip"].is_number())
      bad(where, "bump needs radius, or sup and lip");
    const double sup = b["sup"].get<double>(), lip = b["lip"].get<double>();
    if (!(sup > 0.0 && lip > 0.0)) bad(where, "sup and lip must be positive");
    if (norm(dir, tag) == 0.0) bad(where + ".direction", "direction is zero");
    return LipschitzPerturbation::bump_with_bounds(center, dir, sup, lip, tag);
  }
  bad(where + ".kind", "perturbation kind must be zero, constant or bump");
}

MapRule map_from(const Json& m, const std::string& where) {
  if (m.value("kind", "") != "diag_poly") bad(where + ".kind", "map kind must be diag_poly");
  auto coeffs = [&](const char* k) {
    if (!m.contains(k) || !m[k].is_array()) bad(where, std::string("missing array \"") + k + "\"");
    std::vector<double> v;
    for (std::size_t i = 0; i < m[k].size(); ++i) {
      if (!m[k][i].is_number()) bad(where + "." + k + "[" + std::to_string(i) + "]", "expected a number");
      v.push_back(m[k][i].get<double>());
    }
    return v;
  };
  const auto lin = coeffs("linear"), quad = coeffs("quadratic"), cub = coeffs("cubic");
  if (lin.empty() || quad.size() != lin.size() || cub.size() != lin.size() || lin.size() > kMaxDim)
    bad(where, "coefficient arrays must share a length between 1 and 32");
  return MapRule::diag_poly(lin, quad, cub);
}

Json task_conjugacy(Context& c, const Params& p) {
  const double tol = p.real("tol", 1e-8);
  const int npts = static_cast<int>(p.integer("test_points", 100, 1, 100000));
  Json j = Json::object();
  if (p.has("map")) {
    const MapRule F = map_from(p.raw("map"), p.at("map"));
    const Point fp = p.has("p") ? point_from(p.raw("p"), F.dim, p.at("p")) : Point(Point::Zero(F.dim));
    const NormTag tag = c.op.tag();
    const auto gh = grobman_hartman_local(F, fp, p.real("box_radius", 1.0), tol, tag, npts);
    j["grobman_hartman"] = Json{{"box_radius", number(gh.box_radius)},
                                {"linearization_radius", number(gh.linearization_radius)},
                                {"alpha_sup", number(gh.alpha_sup)},
                                {"alpha_lip", number(gh.alpha_lip)},
                                {"contraction_factor", number(gh.field.contraction_factor())},
                                {"picard_depth", gh.field.picard_depth()},
                                {"residual", number(gh.residual)},
                                {"shrink_steps", gh.shrink_steps}};
  } else if (p.has("beta")) {
    if (!c.op.is_dense()) fail(ErrorCode::KindMismatch, "conjugacy needs a dense operator");
    const auto beta = beta_from(p.raw("beta"), c.op.dim(), c.op.tag(), p.at("beta"));
    const ConjugacyField f = conjugacy_solve(c.op, c.split(), beta, tol);
    const auto pts = stability_test_points(c.op.dim(), npts, p.real("radius", 2.0));
    double hmax = 0.0, ratio = 0.0;
    for (const Point& x : pts) {
      hmax = std::max(hmax, norm(f.h(x), c.op.tag()));
      for (double r : f.trace(x).ratios) ratio = std::max(ratio, r);
    }
    const ConjugacyField fi = inverse_conjugacy(c.op, c.split(), beta);
    j["conjugacy"] = Json{{"gamma_bound", number(f.kernel().gamma_bound)},
                          {"contraction_factor", number(f.contraction_factor())},
                          {"picard_depth", f.picard_depth()},
                          {"max_observed_ratio", number(ratio)},
                          {"h_max", number(hmax)},
                          {"h_bound", number(f.kernel().gamma_bound * beta.sup_norm)},
                          {"residual", number(conjugacy_residual(f, pts))},
                          {"inverse_residual", number(inverse_residual(f, fi, pts))},
                          {"test_points", npts}};
  }
  if (p.flag("car", false)) {
    j["car"] = to_json(car_verify(c.op, static_cast<int>(p.integer("car_trials", 20, 0, 100000)),
                                  static_cast<int>(p.integer("car_len", 100, 1, 100000)), c.s.rng_seed));
  }
  if (j.empty()) bad(p.at("beta"), "conjugacy needs beta, map, or car");
  return j;
}

template <class V>
Json homoclinic_vector(Context& c, const Params& p, const V& x, int horizon, double tol) {
  Json j{{"evidence", to_json(is_homoclinic(c.op, x, horizon, tol))}};
  Json rows = Json::array();
  for (int n : p.ints("n", {5, 10, 15}, 0, 10000)) {
    const auto a = hhat_approximate(c.op, c.split(), x, n, std::max(horizon, 60), tol);
    rows.push_back(Json{{"n", n},
                        {"error_S", number(a.error_S)},
                        {"error_U", number(a.error_U)},
                        {"first_member", a.first_member},
                        {"second_member", a.second_member}});
  }
  j["hhat"] = rows;
  return j;
}

Json task_homoclinic(Context& c, const Params& p) {
  const int horizon = static_cast<int>(p.integer("horizon", 40, 1, 10000));
  const double tol = p.real("tol", 1e-9);
  Json j{{"trivial_H", to_json(hyperbolic_iff_trivial_H(c.op, c.split(), horizon, tol))}};
  if (p.has("x")) {
    if (c.op.is_dense()) {
      const DenseVector x = dense_vector_from_json(p.raw("x"), c.op.tag(), p.at("x"));
      if (x.dim() != c.op.dim()) bad(p.at("x"), "dimension does not match the operator");
      j["x"] = homoclinic_vector(c, p, x, horizon, tol);
    } else {
      j["x"] = homoclinic_vector(c, p, sequence_from_json(p.raw("x"), c.op.tag(), p.at("x")), horizon, tol);
    }
  }
  return j;
}

Json task_suite(Context& c, const Params& p) {
  const auto seed = static_cast<std::uint64_t>(p.integer("seed", static_cast<long>(c.s.rng_seed), 0, LONG_MAX));
  return to_json(run_suite(seed, static_cast<int>(p.integer("size", 100, 0, 10000))));
}

using TaskFn = Json (*)(Context&, const Params&);

const std::map<std::string, TaskFn>& task_table() {
  static const std::map<std::string, TaskFn> t = {
      {"classify", task_classify},     {"shadow", task_shadow},         {"bounds", task_bounds},
      {"linf", task_linf},             {"expansivity", task_expansivity}, {"hypercyclic", task_hypercyclic},
      {"conjugacy", task_conjugacy},   {"homoclinic", task_homoclinic}, {"suite", task_suite},
  };
  return t;
}

}  // namespace

const char* tool_version() { return "lindyn 0.1.0"; }

const std::vector<std::string>& task_tags() {
  static const std::vector<std::string> tags = {"classify", "shadow",    "bounds",     "linf", "expansivity",
                                                "hypercyclic", "conjugacy", "homoclinic", "suite"};
  return tags;
}

Scenario parse_scenario(const Json& j) {
  if (!j.is_object()) bad("$", "expected an object");
  static const std::vector<std::string> known = {"name", "operator", "splitting", "tasks", "parameters", "rng_seed", "description"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) bad("$." + it.key(), "unknown field");
  Scenario s;
  if (!j.contains("name") || !j["name"].is_string()) bad("$.name", "expected a string");
  s.name = j["name"].get<std::string>();
  if (!j.contains("operator")) bad("$.operator", "missing");
  s.operator_desc = j["operator"];
  const LinOp op = operator_from_json(s.operator_desc, "$.operator");
  if (j.contains("splitting")) {
    check_splitting_json(j["splitting"], "$.splitting");
    if (!op.is_dense() && j["splitting"]["kind"] == "spectral")
      bad("$.splitting.kind", "spectral splittings need a dense operator");
    s.splitting_desc = j["splitting"];
  }
  if (!j.contains("tasks") || !j["tasks"].is_array()) bad("$.tasks", "expected an array of task tags");
  for (std::size_t i = 0; i < j["tasks"].size(); ++i) {
    const Json& t = j["tasks"][i];
    const std::string w = "$.tasks[" + std::to_string(i) + "]";
    if (!t.is_string()) bad(w, "expected a task tag");
    const std::string tag = t.get<std::string>();
    if (!schemas().count(tag)) bad(w, "unknown task \"" + tag + "\"");
    s.tasks.push_back(tag);
  }
  if (j.contains("parameters")) {
    const Json& params = j["parameters"];
    if (!params.is_object()) bad("$.parameters", "expected an object keyed by task tag");
    for (auto it = params.begin(); it != params.end(); ++it) {
      const std::string w = "$.parameters." + it.key();
      auto sc = schemas().find(it.key());
      if (sc == schemas().end()) bad(w, "unknown task");
      if (!it.value().is_object()) bad(w, "expected an object");
      for (auto kv = it.value().begin(); kv != it.value().end(); ++kv) {
        const std::string kw = w + "." + kv.key();
        if (kv.key() == "expect_error") {
          if (!kv.value().is_string()) bad(kw, "expected an error name");
          continue;
        }
        auto spec = std::find_if(sc->second.begin(), sc->second.end(),
                                 [&](const ParamSpec& ps) { return kv.key() == ps.key; });
        if (spec == sc->second.end()) bad(kw, "unknown parameter");
        if (!type_ok(kv.value(), spec->type)) bad(kw, "wrong type");
      }
    }
    s.parameters = params;
  }
  if (j.contains("rng_seed")) {
    if (!j["rng_seed"].is_number_unsigned()) bad("$.rng_seed", "expected a nonnegative integer");
    s.rng_seed = j["rng_seed"].get<std::uint64_t>();
  }
  return s;
}

Scenario parse_scenario_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    bad("$", std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(j);
}

ScenarioRun run_scenario(const Scenario& s) {
  ScenarioRun run;
  Context ctx{s, operator_from_json(s.operator_desc, "$.operator"), std::nullopt};
  Json tasks = Json::array();
  for (const std::string& tag : s.tasks) {
    static const Json empty = Json::object();
    const Json& table = s.parameters.contains(tag) ? s.parameters[tag] : empty;
    const Params params(table, "$.parameters." + tag);
    const std::string expected = table.value("expect_error", "");
    Json entry{{"task", tag}};
    const auto t0 = std::chrono::steady_clock::now();
    std::optional<Error> err;
    Json result;
    try {
      result = task_table().at(tag)(ctx, params);
    } catch (const Error& e) {
      err = e;
    } catch (const std::exception& e) {
      err = Error(ErrorCode::Internal, e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!err && expected.empty()) {
      entry["status"] = "ok";
      entry["result"] = result;
    } else if (err && err->code() != ErrorCode::ConfigInvalid && expected == error_name(err->code())) {
      entry["status"] = "expected_error";
      entry["error"] = Json{{"code", error_name(err->code())}, {"message", err->detail()}};
    } else {
      entry["status"] = "error";
      if (err) {
        entry["error"] = Json{{"code", error_name(err->code())}, {"message", err->detail()}};
      } else {
        entry["error"] = Json{{"code", "UNEXPECTED_SUCCESS"}, {"message", "expected " + expected}};
        entry["result"] = result;
      }
      ++run.failed_tasks;
    }
    entry["wall_clock_s"] = secs;
    tasks.push_back(entry);
  }
  run.report = Json{{"scenario", s.name},
                    {"tool_version", tool_version()},
                    {"rng_seed", s.rng_seed},
                    {"operator", operator_to_json(ctx.op)},
                    {"tasks", tasks},
                    {"failed_tasks", run.failed_tasks}};
  return run;
}

ScenarioRun run_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    if (auto b = bundled_scenario(path)) return run_scenario(parse_scenario_text(*b));
    fail(ErrorCode::IoError, "cannot read " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return run_scenario(parse_scenario_text(ss.str()));
}

std::optional<std::string> bundled_scenario(const std::string& name) {
  for (const auto& [n, text] : bundled_scenarios())
    if (n == name) return text;
  return std::nullopt;
}

}  // namespace lindyn
