#include "lindyn/homoclinic.hpp"

#include <numeric>
#include <sstream>

namespace lindyn {

namespace {

double rel_slack(const DenseVector&) { return 1e-12; }
double rel_slack(const SparseBiSeq&) { return 0.0; }

template <class V>
bool in_S(const Splitting& split, const V& v) {
  return vec_norm(project_U(split, v)) <= rel_slack(v) * vec_norm(v);
}

template <class V>
bool in_U(const Splitting& split, const V& v) {
  return vec_norm(project_S(split, v)) <= rel_slack(v) * vec_norm(v);
}

// Running max over the suffix [n, horizon].
double envelope(const std::vector<double>& a, std::size_t n) {
  double e = 0.0;
  for (std::size_t i = n; i < a.size(); ++i) e = std::max(e, a[i]);
  return e;
}

bool decays(const std::vector<double>& a, double tol) {
  const double last = a.back();
  if (!(last <= tol)) return false;
  const double e = envelope(a, (3 * (a.size() - 1)) / 4);
  return e == 0.0 || last < e;
}

template <class V>
void require_chain(const LinOp& op, const std::vector<V>& c, double bound, const char* which) {
  if (c.size() < 2) fail(ErrorCode::NotAChain, std::string(which) + " needs at least two points");
  const double scale = std::max(1.0, vec_norm(c.front()));
  if (vec_norm(c.back() - c.front()) > 1e-12 * scale)
    fail(ErrorCode::NotAChain, std::string(which) + " does not return to its start (index " +
                                   std::to_string(c.size() - 1) + ")");
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (vec_norm(apply(op, c[i]) - c[i + 1]) > bound * (1.0 + 1e-12))
      fail(ErrorCode::NotAChain, std::string(which) + " jump exceeds bound at index " + std::to_string(i));
  }
}

template <class V>
std::optional<std::size_t> first_violation(const LinOp& op, const std::vector<V>& c, double delta) {
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    if (vec_norm(apply(op, c[i]) - c[i + 1]) > delta * (1.0 + 1e-12)) return i;
  return std::nullopt;
}

}  // namespace

template <class V>
HomoclinicEvidence<V> is_homoclinic(const LinOp& op, const V& x, int horizon, double tol) {
  if (!op.invertible()) fail(ErrorCode::NotInvertible, "homoclinic test needs an invertible operator");
  if (horizon < 1) fail(ErrorCode::InvalidArgument, "horizon must be positive");
  const LinOp inv = inverse(op);
  HomoclinicEvidence<V> ev;
  ev.vector = x;
  ev.horizon = horizon;
  ev.tol = tol;
  V f = x, b = x;
  ev.forward_decay.push_back(vec_norm(x));
  ev.backward_decay.push_back(vec_norm(x));
  for (int n = 1; n <= horizon; ++n) {
    f = apply(op, f);
    b = apply(inv, b);
    ev.forward_decay.push_back(vec_norm(f));
    ev.backward_decay.push_back(vec_norm(b));
  }
  ev.verdict = decays(ev.forward_decay, tol) && decays(ev.backward_decay, tol);
  return ev;
}

template <class V>
bool hhat_member(const LinOp& op, const Splitting& split, const V& x, long n, long m) {
  if (n < 0 || m < 0) fail(ErrorCode::InvalidArgument, "n and m must be nonnegative");
  if (vec_norm(x) == 0.0) return true;
  return in_U(split, apply_power(op, -n, x)) && in_S(split, apply_power(op, m, x));
}

template <class V>
HhatApproximation<V> hhat_approximate(const LinOp& op, const Splitting& split, const V& x, long n, int horizon,
                                      double tol) {
  if (n < 0) fail(ErrorCode::InvalidArgument, "n must be nonnegative");
  if (!is_homoclinic(op, x, horizon, tol).verdict) fail(ErrorCode::NotHomoclinic, "x fails the homoclinic test");
  HhatApproximation<V> out;
  const V xs = project_S(split, x), xu = project_U(split, x);
  out.first = apply_power(op, n, project_U(split, apply_power(op, -n, xs)));
  out.second = apply_power(op, -n, project_S(split, apply_power(op, n, xu)));
  out.error_S = vec_norm(xs - out.first);
  out.error_U = vec_norm(xu - out.second);
  out.first_member = hhat_member(op, split, out.first, n, 0);
  out.second_member = hhat_member(op, split, out.second, 0, n);
  return out;
}

TrivialHVerdict hyperbolic_iff_trivial_H(const LinOp& op, const Splitting& split, int horizon, double tol) {
  HyperbolicityReport rep;
  try {
    rep = classify(op, split);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidSplitting) fail(ErrorCode::NotCertified, e.detail());
    throw;
  }
  if (rep.cls != HypClass::Hyperbolic && rep.cls != HypClass::GeneralizedHyperbolic)
    fail(ErrorCode::NotCertified, std::string("classification is ") + hyp_class_name(rep.cls));
  TrivialHVerdict v;
  v.cls = rep.cls;

  if (op.is_dense()) {
    v.basis_checked = split.dim_U();
    if (rep.witness) {
      DenseVector w = std::get<DenseVector>(*rep.witness);
      w *= 1.0 / vec_norm(w);
      v.witness = w;
      auto ev = is_homoclinic(op, w, horizon, tol);
      if (!ev.verdict) fail(ErrorCode::NotCertified, "L(U)∩S witness does not decay within the horizon");
      v.forward_decay = ev.forward_decay;
      v.backward_decay = ev.backward_decay;
    }
  } else if (split.cutoff) {
    const long c = *split.cutoff;
    for (long j = std::max(c + 1, -kHhatSearchBound); j <= kHhatSearchBound && !v.witness; ++j) {
      ++v.basis_checked;
      SparseBiSeq w = apply(op, SparseBiSeq::basis(j, op.tag()));
      if (w.empty() || w.max_index() > c) continue;
      w *= 1.0 / vec_norm(w);
      auto ev = is_homoclinic(op, w, horizon, tol);
      if (!ev.verdict) fail(ErrorCode::NotCertified, "L(U)∩S witness does not decay within the horizon");
      v.forward_decay = ev.forward_decay;
      v.backward_decay = ev.backward_decay;
      v.witness = w;
    }
  }
  v.hyperbolic_consistent = !v.witness.has_value();
  v.note = v.witness ? "nonzero homoclinic point in L(U)∩S: not hyperbolic"
                     : "no nonzero element of L(U)∩S among basis vectors with |index| <= " +
                           std::to_string(kHhatSearchBound);
  return v;
}

template <class V>
double chain_defect(const LinOp& op, const std::vector<V>& points) {
  double d = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) d = std::max(d, vec_norm(apply(op, points[i]) - points[i + 1]));
  return d;
}

template <class V>
Chain<V> chain_combine(const std::vector<V>& chain_x, const std::vector<V>& chain_y, const LinOp& op, double delta) {
  if (!(delta > 0.0)) fail(ErrorCode::InvalidArgument, "delta must be positive");
  require_chain(op, chain_x, delta / 2.0, "chain_x");
  require_chain(op, chain_y, delta / 2.0, "chain_y");
  const std::size_t P = chain_x.size() - 1, Q = chain_y.size() - 1;

  Chain<V> padded;
  padded.method = "padded";
  for (std::size_t i = 0; i <= std::max(P, Q); ++i) padded.points.push_back(chain_x[std::min(i, P)] + chain_y[std::min(i, Q)]);
  if (!first_violation(op, padded.points, delta)) {
    padded.defect = chain_defect(op, padded.points);
    return padded;
  }

  Chain<V> periodic;
  periodic.method = "periodic";
  const std::size_t T = std::lcm(P, Q);
  if (T > 100000) fail(ErrorCode::NotAChain, "common period too long; padded sum fails at index " +
                                                 std::to_string(*first_violation(op, padded.points, delta)));
  for (std::size_t i = 0; i <= T; ++i) periodic.points.push_back(chain_x[i % P] + chain_y[i % Q]);
  if (auto bad = first_violation(op, periodic.points, delta))
    fail(ErrorCode::NotAChain, "combined chain jump exceeds delta at index " + std::to_string(*bad));
  periodic.defect = chain_defect(op, periodic.points);
  return periodic;
}

template <class V>
Chain<V> chain_scale(const std::vector<V>& chain, Scalar lambda, const LinOp& op, double delta) {
  if (!(delta > 0.0)) fail(ErrorCode::InvalidArgument, "delta must be positive");
  Chain<V> out;
  out.method = "scaled";
  if (lambda == Scalar(0.0)) {
    if (chain.empty()) fail(ErrorCode::NotAChain, "empty chain");
    for (const V& p : chain) out.points.push_back(Scalar(0.0) * p);
    return out;
  }
  require_chain(op, chain, delta / std::abs(lambda), "chain");
  for (const V& p : chain) out.points.push_back(lambda * p);
  if (auto bad = first_violation(op, out.points, delta))
    fail(ErrorCode::NotAChain, "scaled chain jump exceeds delta at index " + std::to_string(*bad));
  out.defect = chain_defect(op, out.points);
  return out;
}

template <class V>
std::string decay_csv(const HomoclinicEvidence<V>& ev) {
  std::ostringstream os;
  os.precision(17);
  os << "n,forward,backward\n";
  for (std::size_t n = 0; n < ev.forward_decay.size(); ++n)
    os << n << "," << ev.forward_decay[n] << "," << ev.backward_decay[n] << "\n";
  return os.str();
}

#define LINDYN_INSTANTIATE(V)                                                                                   \
  template HomoclinicEvidence<V> is_homoclinic(const LinOp&, const V&, int, double);                            \
  template bool hhat_member(const LinOp&, const Splitting&, const V&, long, long);                              \
  template HhatApproximation<V> hhat_approximate(const LinOp&, const Splitting&, const V&, long, int, double);  \
  template double chain_defect(const LinOp&, const std::vector<V>&);                                            \
  template Chain<V> chain_combine(const std::vector<V>&, const std::vector<V>&, const LinOp&, double);          \
  template Chain<V> chain_scale(const std::vector<V>&, Scalar, const LinOp&, double);                           \
  template std::string decay_csv(const HomoclinicEvidence<V>&);

LINDYN_INSTANTIATE(DenseVector)
LINDYN_INSTANTIATE(SparseBiSeq)

}  // namespace lindyn
