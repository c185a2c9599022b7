#include "lindyn/serialize.hpp"

namespace lindyn {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  fail(ErrorCode::ConfigInvalid, where + ": " + what);
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing \"") + key + "\"");
  return *it;
}

double real_from(const Json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) bad(where, "expected a finite number");
  return x;
}

long integer_from(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<long>();
}

std::string string_from(const Json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

NormTag tag_from(const Json& j, const std::string& where) {
  try {
    return parse_norm_tag(string_from(j, where));
  } catch (const Error&) {
    bad(where, "norm must be \"l1\", \"l2\" or \"linf\"");
  }
}

}  // namespace

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Scalar scalar_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return real_from(j, where);
  if (j.is_array() && j.size() == 2) return {real_from(j[0], where + "[0]"), real_from(j[1], where + "[1]")};
  bad(where, "expected a number or [re, im]");
}

Json scalar_to_json(Scalar z) { return Json::array({number(z.real()), number(z.imag())}); }

LinOp operator_from_json(const Json& j, const std::string& where, std::optional<NormTag> inherited) {
  if (!j.is_object()) bad(where, "expected an operator object");
  NormTag tag = inherited.value_or(NormTag::L2);
  if (j.contains("norm")) tag = tag_from(j["norm"], where + ".norm");
  const std::string kind = string_from(member(j, "kind", where), where + ".kind");
  try {
    if (kind == "dense") {
      const Json& m = member(j, "matrix", where);
      const std::string mw = where + ".matrix";
      if (!m.is_array() || m.empty()) bad(mw, "expected a nonempty array of rows");
      const auto d = static_cast<Eigen::Index>(m.size());
      if (d > kMaxDim) bad(mw, "dimension exceeds " + std::to_string(kMaxDim));
      CMatrix M(d, d);
      for (Eigen::Index r = 0; r < d; ++r) {
        const Json& row = m[static_cast<std::size_t>(r)];
        const std::string rw = mw + "[" + std::to_string(r) + "]";
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) bad(rw, "row length must equal the row count");
        for (Eigen::Index c = 0; c < d; ++c)
          M(r, c) = scalar_from_json(row[static_cast<std::size_t>(c)], rw + "[" + std::to_string(c) + "]");
      }
      return LinOp::dense(M, tag);
    }
    if (kind == "diag") {
      const Json& rule = member(j, "rule", where);
      const std::string rw = where + ".rule";
      if (rule.contains("neg_and_zero") || rule.contains("pos"))
        return LinOp::diagonal(PiecewiseWeight::by_sign(scalar_from_json(member(rule, "neg_and_zero", rw), rw + ".neg_and_zero"),
                                                        scalar_from_json(member(rule, "pos", rw), rw + ".pos")),
                               tag);
      if (rule.contains("constant"))
        return LinOp::diagonal(PiecewiseWeight::constant(scalar_from_json(rule["constant"], rw + ".constant")), tag);
      if (rule.contains("table")) {
        const Json& t = rule["table"];
        if (!t.is_object()) bad(rw + ".table", "expected an object from index to weight");
        std::map<long, Scalar> entries;
        for (auto it = t.begin(); it != t.end(); ++it) {
          const std::string kw = rw + ".table." + it.key();
          long k = 0;
          try {
            std::size_t used = 0;
            k = std::stol(it.key(), &used);
            if (used != it.key().size()) throw std::invalid_argument("trailing");
          } catch (const std::exception&) {
            bad(kw, "table keys must be integers");
          }
          entries[k] = scalar_from_json(it.value(), kw);
        }
        PiecewiseWeight w = PiecewiseWeight::from_table(entries, scalar_from_json(member(rule, "default", rw), rw + ".default"));
        if (rule.contains("pos_default")) w.right = scalar_from_json(rule["pos_default"], rw + ".pos_default");
        return LinOp::diagonal(w, tag);
      }
      bad(rw, "expected neg_and_zero/pos, constant, or table/default");
    }
    if (kind == "shift") return LinOp::shift(integer_from(member(j, "offset", where), where + ".offset"), tag);
    if (kind == "backward_scaled") {
      const Scalar c = scalar_from_json(member(j, "factor", where), where + ".factor");
      if (c == Scalar(0.0)) bad(where + ".factor", "factor must be nonzero");
      return LinOp::backward_scaled(c, tag);
    }
    if (kind == "compose") {
      const Json& fs = member(j, "factors", where);
      if (!fs.is_array() || fs.empty()) bad(where + ".factors", "expected a nonempty array");
      std::vector<LinOp> factors;
      for (std::size_t i = 0; i < fs.size(); ++i)
        factors.push_back(operator_from_json(fs[i], where + ".factors[" + std::to_string(i) + "]", tag));
      return LinOp::compose(factors);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    bad(where, e.what());
  }
  bad(where + ".kind", "unknown operator kind \"" + kind + "\"");
}

Json operator_to_json(const LinOp& op) {
  Json j;
  j["kind"] = op_kind_name(op.kind());
  switch (op.kind()) {
    case OpKind::Dense: {
      Json rows = Json::array();
      const CMatrix& m = op.matrix();
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m(r, c)));
        rows.push_back(row);
      }
      j["matrix"] = rows;
      break;
    }
    case OpKind::Diagonal: {
      const PiecewiseWeight& w = op.shift_form().weight;
      if (w.table.empty() && w.left == w.right) {
        j["rule"] = {{"constant", scalar_to_json(w.left)}};
      } else if (w.lo == 1 && w.table.empty()) {
        j["rule"] = {{"neg_and_zero", scalar_to_json(w.left)}, {"pos", scalar_to_json(w.right)}};
      } else {
        Json t = Json::object();
        for (long k = w.lo; k < w.hi(); ++k) t[std::to_string(k)] = scalar_to_json(w(k));
        j["rule"] = {{"table", t}, {"default", scalar_to_json(w.left)}};
        if (w.left != w.right) j["rule"]["pos_default"] = scalar_to_json(w.right);
      }
      break;
    }
    case OpKind::Shift: j["offset"] = op.shift_form().offset; break;
    case OpKind::BackwardScaled: j["factor"] = scalar_to_json(op.shift_form().weight.right); break;
    case OpKind::Composition: {
      Json fs = Json::array();
      for (const LinOp& f : op.factors()) fs.push_back(operator_to_json(f));
      j["factors"] = fs;
      break;
    }
  }
  j["norm"] = norm_tag_name(op.tag());
  return j;
}

void check_splitting_json(const Json& j, const std::string& where) {
  const std::string kind = string_from(member(j, "kind", where), where + ".kind");
  if (kind == "spectral") {
    if (j.contains("gap") && !(real_from(j["gap"], where + ".gap") > 0.0)) bad(where + ".gap", "gap must be positive");
    return;
  }
  if (kind == "coordinate") {
    if (j.contains("s_indices")) {
      const Json& s = j["s_indices"];
      if (!s.is_array()) bad(where + ".s_indices", "expected an array of indices");
      for (std::size_t i = 0; i < s.size(); ++i) integer_from(s[i], where + ".s_indices[" + std::to_string(i) + "]");
      return;
    }
    const Json& c = member(j, "cutoff", where);
    if (c.is_string()) {
      if (c.get<std::string>() != "all") bad(where + ".cutoff", "cutoff must be an integer or \"all\"");
      return;
    }
    integer_from(c, where + ".cutoff");
    return;
  }
  bad(where + ".kind", "unknown splitting kind \"" + kind + "\"");
}

Splitting splitting_from_json(const Json& j, const LinOp& op, const std::string& where) {
  check_splitting_json(j, where);
  const std::string kind = j["kind"].get<std::string>();
  const NormTag tag = op.tag();
  if (kind == "spectral") {
    if (!op.is_dense()) bad(where, "spectral splittings need a dense operator");
    return spectral_split(op, j.contains("gap") ? j["gap"].get<double>() : 1e-6);
  }
  const bool all = j.contains("cutoff") && j["cutoff"].is_string();
  if (!op.is_dense()) {
    if (j.contains("s_indices")) bad(where + ".s_indices", "s_indices apply to dense operators only");
    return all ? coordinate_split_all(tag) : coordinate_split(j["cutoff"].get<long>(), tag);
  }
  const int d = op.dim();
  if (all) return coordinate_split_all_dense(d, tag);
  std::vector<int> idx;
  if (j.contains("s_indices")) {
    for (const Json& v : j["s_indices"]) {
      const long k = v.get<long>();
      if (k < 0 || k >= d) bad(where + ".s_indices", "index out of range");
      idx.push_back(static_cast<int>(k));
    }
  } else {
    const long c = j["cutoff"].get<long>();
    for (int k = 0; k < d && k <= c; ++k) idx.push_back(k);
  }
  return coordinate_split_dense(d, idx, tag);
}

CVector cvector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) bad(where, "expected a nonempty array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = scalar_from_json(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

DenseVector dense_vector_from_json(const Json& j, NormTag tag, const std::string& where) {
  return DenseVector(cvector_from_json(j, where), tag);
}

SparseBiSeq sequence_from_json(const Json& j, NormTag tag, const std::string& where) {
  const Json& e = member(j, "entries", where);
  const std::string ew = where + ".entries";
  if (!e.is_array()) bad(ew, "expected an array of [k, re, im]");
  SparseBiSeq s(tag);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::string iw = ew + "[" + std::to_string(i) + "]";
    if (!e[i].is_array() || (e[i].size() != 2 && e[i].size() != 3)) bad(iw, "expected [k, re] or [k, re, im]");
    const long k = integer_from(e[i][0], iw + "[0]");
    const double re = real_from(e[i][1], iw + "[1]");
    const double im = e[i].size() == 3 ? real_from(e[i][2], iw + "[2]") : 0.0;
    s.add(k, Scalar(re, im));
  }
  return s;
}

Json vector_to_json(const CVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(scalar_to_json(v(i)));
  return a;
}

Json vector_to_json(const DenseVector& v) { return vector_to_json(v.coords); }

Json vector_to_json(const SparseBiSeq& v) {
  Json a = Json::array();
  for (const auto& [k, z] : v.entries()) a.push_back(Json::array({k, number(z.real()), number(z.imag())}));
  return Json{{"entries", a}};
}

Json vector_to_json(const AnyVector& v) {
  return std::visit([](const auto& x) { return vector_to_json(x); }, v);
}

Json to_json(const OperatorReport& r) {
  Json j{{"op_norm", number(r.op_norm)}};
  j["inv_norm"] = r.inv_norm ? number(*r.inv_norm) : Json(nullptr);
  j["spectral_radius_estimate"] = number(r.spectral_radius_estimate);
  j["gelfand_iterations"] = r.gelfand_iterations;
  return j;
}

Json to_json(const HyperbolicityReport& r) {
  Json j{{"class", hyp_class_name(r.cls)},
         {"r_S", number(r.r_S)},
         {"r_U_inv", number(r.r_U_inv)},
         {"invariance",
          {{"LS_in_S", r.invariance.LS_in_S},
           {"Linv_U_in_U", r.invariance.Linv_U_in_U},
           {"S_in_LS", r.invariance.S_in_LS},
           {"LU_in_U", r.invariance.LU_in_U}}}};
  j["witness"] = r.witness ? vector_to_json(*r.witness) : Json(nullptr);
  j["circle_gap"] = number(r.circle_gap);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const ShadBounds& b) {
  return Json{{"upper", number(b.upper)},         {"lower", number(b.lower)},
              {"lower_exact", b.lower_exact},     {"proj_S_norm", number(b.proj_S_norm)},
              {"series_A", number(b.series_A)},   {"proj_U_norm", number(b.proj_U_norm)},
              {"series_B", number(b.series_B)}};
}

Json to_json(const WitnessResult& w) {
  Json support = Json::array();
  for (const auto& [k, v] : w.seed.entries()) support.push_back(k);
  Json errs = Json::array();
  for (double e : w.visit_errors) errs.push_back(number(e));
  return Json{{"seed_support", support},
              {"seed", vector_to_json(w.seed)},
              {"visit_times", w.visit_times},
              {"visit_errors", errs},
              {"gap", w.gap}};
}

Json to_json(const AdjointCertificate& c) {
  return Json{{"eigenvalue", scalar_to_json(c.eigenvalue)},
              {"functional", vector_to_json(c.functional)},
              {"modulus", modulus_kind_name(c.kind)},
              {"residual", number(c.residual)},
              {"replay_ok", c.replay_ok}};
}

Json to_json(const CarReport& r) {
  return Json{{"gamma", number(r.gamma)},
              {"max_ratio", number(r.max_ratio)},
              {"violations", r.violations},
              {"trials", r.trials},
              {"shadow_sup_error", number(r.shadow_sup_error)},
              {"shadow_delta", number(r.shadow_delta)},
              {"shadow_ok", r.shadow_ok}};
}

Json to_json(const TrivialHVerdict& v) {
  Json j{{"verdict", v.hyperbolic_consistent ? "Hyperbolic-consistent" : "Not-hyperbolic"},
         {"class", hyp_class_name(v.cls)}};
  j["witness"] = v.witness ? vector_to_json(*v.witness) : Json(nullptr);
  Json fd = Json::array(), bd = Json::array();
  for (double x : v.forward_decay) fd.push_back(number(x));
  for (double x : v.backward_decay) bd.push_back(number(x));
  j["forward_decay"] = fd;
  j["backward_decay"] = bd;
  j["search_bound"] = v.search_bound;
  j["basis_checked"] = v.basis_checked;
  j["note"] = v.note;
  return j;
}

Json to_json(const ScanTable& t) {
  Json rows = Json::array();
  for (const ScanRow& r : t.rows)
    rows.push_back(Json{{"radius", number(r.radius)}, {"trial", r.trial}, {"pass", r.pass}, {"estimate", number(r.estimate)}});
  return Json{{"original_upper", number(t.original_upper)}, {"certified_margin", number(t.certified_margin)}, {"rows", rows}};
}

Json to_json(const std::vector<GrowthPoint>& g) {
  Json rows = Json::array();
  for (const GrowthPoint& p : g)
    rows.push_back(Json{{"N", p.N}, {"value", number(p.value)}, {"lower_bound", number(p.lower_bound)}, {"exact", p.exact}});
  return rows;
}

Json to_json(const UniformSearch& u) {
  Json per = Json::array();
  for (const auto& m : u.first_m) per.push_back(m ? Json(*m) : Json(nullptr));
  return Json{{"m", u.m ? Json(*u.m) : Json(nullptr)}, {"first_m", per}};
}

template <class V>
Json to_json(const HomoclinicEvidence<V>& ev) {
  Json fd = Json::array(), bd = Json::array();
  for (double x : ev.forward_decay) fd.push_back(number(x));
  for (double x : ev.backward_decay) bd.push_back(number(x));
  return Json{{"vector", vector_to_json(ev.vector)},
              {"horizon", ev.horizon},
              {"tol", number(ev.tol)},
              {"forward_decay", fd},
              {"backward_decay", bd},
              {"verdict", ev.verdict}};
}

template Json to_json(const HomoclinicEvidence<DenseVector>&);
template Json to_json(const HomoclinicEvidence<SparseBiSeq>&);

}  // namespace lindyn
