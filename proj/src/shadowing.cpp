#include "lindyn/shadowing.hpp"

#include "lindyn/orbit_window.hpp"

#include <algorithm>
#include <sstream>

namespace lindyn {

namespace {

DenseVector zero_like(const DenseVector& v) { return DenseVector::zero(v.dim(), v.tag); }
SparseBiSeq zero_like(const SparseBiSeq& v) { return SparseBiSeq(v.tag()); }

// Random vector of norm at most `radius`, supported like `like`.
DenseVector random_perturbation(const DenseVector& like, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), r(0.0, 1.0);
  CVector c(like.dim());
  for (int i = 0; i < like.dim(); ++i) c(i) = u(rng);
  double n = norm(c, like.tag);
  if (n == 0.0) return zero_like(like);
  return {c * (radius * r(rng) / n), like.tag};
}

SparseBiSeq random_perturbation(const SparseBiSeq& like, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), r(0.0, 1.0);
  SparseBiSeq p(like.tag());
  if (like.empty()) {
    p.set(0, u(rng));
  } else {
    for (const auto& [k, x] : like.entries()) p.set(k, u(rng));
  }
  double n = vec_norm(p);
  if (n == 0.0) return p;
  return Scalar(radius * r(rng) / n) * p;
}

template <class V>
double orbit_residual(const LinOp& op, const std::vector<V>& y) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    double scale = std::max(1.0, vec_norm(y[i]));
    worst = std::max(worst, vec_norm(y[i + 1] - apply(op, y[i])) / scale);
  }
  return worst;
}

template <class V>
double sup_distance(const std::vector<V>& a, const std::vector<V>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, vec_norm(a[i] - b[i]));
  return d;
}

void check_shape(const LinOp& op, const DenseVector& v) {
  if (!op.is_dense() || op.dim() != v.dim() || op.tag() != v.tag)
    fail(ErrorCode::KindMismatch, "vector does not match operator");
}

void check_shape(const LinOp& op, const SparseBiSeq& v) {
  if (op.is_dense() || op.tag() != v.tag()) fail(ErrorCode::KindMismatch, "vector does not match operator");
}

}  // namespace

const char* shadow_method_name(ShadowMethod m) {
  switch (m) {
    case ShadowMethod::SplittingSeries: return "SplittingSeries";
    case ShadowMethod::ContractionFixpoint: return "ContractionFixpoint";
    case ShadowMethod::WindowSolve: return "WindowSolve";
  }
  return "?";
}

template <class V>
double pseudo_orbit_defect(const LinOp& op, const std::vector<V>& points) {
  double d = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    d = std::max(d, vec_norm(apply(op, points[i]) - points[i + 1]));
  return d;
}

template <class V>
PseudoOrbit<V> generate_pseudo_orbit(const LinOp& op, const V& seed, long n0, long n1, double delta,
                                     std::uint64_t rng_seed) {
  check_shape(op, seed);
  if (!(delta >= 0.0)) fail(ErrorCode::InvalidArgument, "delta must be nonnegative");
  if (n1 < n0) fail(ErrorCode::InvalidArgument, "empty window");
  const long anchor = n0 >= 0 ? n0 : std::min(0L, n1);
  if (anchor > n0 && !op.invertible()) fail(ErrorCode::NotInvertible, "backward steps need an invertible operator");
  std::mt19937_64 rng(rng_seed);
  const double radius = delta * (1.0 - 1e-9);
  PseudoOrbit<V> po;
  po.n0 = n0;
  po.delta = delta;
  po.points.assign(static_cast<std::size_t>(n1 - n0 + 1), seed);
  const std::size_t a = static_cast<std::size_t>(anchor - n0);
  for (std::size_t i = a; i + 1 < po.points.size(); ++i) {
    V next = apply(op, po.points[i]);
    po.points[i + 1] = next + random_perturbation(next, radius, rng);
  }
  if (a > 0) {
    LinOp inv = inverse(op);
    for (std::size_t i = a; i > 0; --i) {
      const V& cur = po.points[i];
      po.points[i - 1] = apply(inv, cur - random_perturbation(cur, radius, rng));
    }
  }
  po.measured_defect = pseudo_orbit_defect(op, po.points);
  if (po.measured_defect > delta * (1.0 + 1e-12) + 1e-300)
    fail(ErrorCode::Internal, "generated pseudo-orbit exceeds its defect bound");
  return po;
}

template <class V>
PseudoOrbit<V> generate_bounded_pseudo_orbit(const LinOp& op, const Splitting& split, const V& seed, long n0, long n1,
                                             double delta, std::uint64_t rng_seed) {
  check_shape(op, seed);
  if (!(delta >= 0.0)) fail(ErrorCode::InvalidArgument, "delta must be nonnegative");
  if (n1 < n0) fail(ErrorCode::InvalidArgument, "empty window");
  const std::size_t M = static_cast<std::size_t>(n1 - n0 + 1);
  std::mt19937_64 rng(rng_seed);
  const double radius = delta * (1.0 - 1e-9);
  std::vector<V> p;
  for (std::size_t i = 0; i + 1 < M; ++i) p.push_back(random_perturbation(seed, radius, rng));
  std::vector<V> s(M, zero_like(seed)), u(M, zero_like(seed));
  s[0] = project_S(split, seed);
  for (std::size_t i = 0; i + 1 < M; ++i) s[i + 1] = apply(op, s[i]) + project_S(split, p[i]);
  u[M - 1] = project_U(split, seed);
  if (M > 1) {
    LinOp inv = inverse(op);
    for (std::size_t i = M - 1; i > 0; --i) u[i - 1] = apply(inv, u[i] - project_U(split, p[i - 1]));
  }
  PseudoOrbit<V> po;
  po.n0 = n0;
  po.delta = delta;
  for (std::size_t i = 0; i < M; ++i) po.points.push_back(s[i] + u[i]);
  po.measured_defect = pseudo_orbit_defect(op, po.points);
  // Rounding in the two recursions is relative to the point size.
  double scale = 0.0;
  for (const auto& x : po.points) scale = std::max(scale, vec_norm(x));
  if (po.measured_defect > delta + 1e-13 * std::max(1.0, scale))
    fail(ErrorCode::Internal, "generated pseudo-orbit exceeds its defect bound");
  po.delta = std::max(delta, po.measured_defect);
  return po;
}

ShadBounds shad_bounds(const LinOp& op, const Splitting& split) {
  HyperbolicityReport rep;
  try {
    rep = classify(op, split);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidSplitting) fail(ErrorCode::NotCertified, e.detail());
    throw;
  }
  if (rep.cls != HypClass::Hyperbolic && rep.cls != HypClass::GeneralizedHyperbolic)
    fail(ErrorCode::NotCertified, std::string("classification is ") + hyp_class_name(rep.cls));

  ShadBounds b;
  RestrictedPowers ps(op, split, RestrictedPowers::Side::S);
  RestrictedPowers pu(op, split, RestrictedPowers::Side::U);
  b.series_A = sum_norm_series([&](int) { return ps.next().upper; }, 0).value;
  b.series_B = sum_norm_series([&](int) { return pu.next().upper; }, 1).value;
  b.proj_S_norm = split.proj_S_norm;
  b.proj_U_norm = split.proj_U_norm;
  const double termS = b.proj_S_norm == 0.0 ? 0.0 : b.proj_S_norm * b.series_A;
  const double termU = b.proj_U_norm == 0.0 ? 0.0 : b.proj_U_norm * b.series_B;
  b.upper = termS + termU;

  if (op.is_dense()) {
    const bool exact = split.kind == SplitKind::Coordinate || split.tag == NormTag::L2;
    b.lower_exact = exact;
    auto resolvent_norm = [&](RestrictedPowers::Side side) {
      auto rm = restrict_dense(op, split, side);
      const Eigen::Index k = rm.Q.cols();
      if (k == 0) return 0.0;
      // Bounded solutions sum L^k z over k >= 0 on S and L^{-k} z over k >= 1 on U.
      CMatrix G = (CMatrix::Identity(k, k) - rm.M).inverse();
      if (side == RestrictedPowers::Side::U) G = rm.M * G;
      if (exact) return matrix_norm(rm.Q * G * rm.Q.adjoint(), split.tag);
      std::mt19937_64 rng(0x10eb);
      std::normal_distribution<double> g;
      double best = 0.0;
      for (int t = 0; t < 64 + static_cast<int>(k); ++t) {
        CVector y = CVector::Zero(k);
        if (t < k)
          y(t) = 1.0;
        else
          for (Eigen::Index i = 0; i < k; ++i) y(i) = Scalar(g(rng), g(rng));
        CVector x = rm.Q * y;
        best = std::max(best, norm(rm.Q * (G * y), split.tag) / norm(x, split.tag));
      }
      return best;
    };
    b.lower = std::max(resolvent_norm(RestrictedPowers::Side::S), resolvent_norm(RestrictedPowers::Side::U));
  } else {
    // Columns of the resolvents on basis vectors near the cutoff.
    b.lower_exact = false;
    const long c = split.cutoff.value_or(0);
    auto column_sum = [&](const WeightedShift& ws, long j) {
      SparseBiSeq acc(split.tag), term = SparseBiSeq::basis(j, split.tag);
      for (int k = 0; k < 10000 && !term.empty(); ++k) {
        acc += term;
        if (vec_norm(term) < 1e-17 * std::max(1.0, vec_norm(acc))) break;
        term = ws.apply(term);
      }
      return vec_norm(acc);
    };
    const WeightedShift& fw = op.shift_form();
    for (long j = c - 64; j <= (split.cutoff ? c : c + 64); ++j) b.lower = std::max(b.lower, column_sum(fw, j));
    if (split.cutoff) {
      const WeightedShift bw = fw.inverse();
      for (long j = c + 1; j <= c + 65; ++j) b.lower = std::max(b.lower, column_sum(bw, j));
    }
  }
  return b;
}

template <class V>
ShadowResult<V> shadow_splitting_series(const LinOp& op, const Splitting& split, const PseudoOrbit<V>& po,
                                        double tail_tol) {
  if (po.points.empty()) fail(ErrorCode::InvalidArgument, "empty pseudo-orbit");
  check_shape(op, po.points.front());
  if (!(tail_tol > 0.0)) fail(ErrorCode::InvalidArgument, "tail_tol must be positive");
  const ShadBounds bounds = shad_bounds(op, split);
  if (!std::isfinite(bounds.upper)) fail(ErrorCode::NotCertified, "restricted series did not converge");

  const std::size_t M = po.points.size();
  const V zero = zero_like(po.points.front());
  std::vector<V> z;
  for (std::size_t i = 0; i + 1 < M; ++i) z.push_back(apply(op, po.points[i]) - po.points[i + 1]);
  std::vector<V> s(M, zero), u(M, zero);
  for (std::size_t i = 0; i + 1 < M; ++i) s[i + 1] = apply(op, s[i]) + project_S(split, z[i]);
  if (M > 1) {
    LinOp inv = inverse(op);
    for (std::size_t i = M - 1; i > 0; --i) u[i - 1] = apply(inv, project_U(split, z[i - 1]) + u[i]);
  }
  ShadowResult<V> r;
  r.n0 = po.n0;
  r.method = ShadowMethod::SplittingSeries;
  r.constant_used = bounds.upper;
  for (std::size_t i = 0; i < M; ++i) {
    V e = s[i] - u[i];
    r.sup_error = std::max(r.sup_error, vec_norm(e));
    r.trajectory.push_back(po.points[i] + e);
  }
  r.shadow_seed = r.trajectory.front();
  r.orbit_residual = orbit_residual(op, r.trajectory);
  return r;
}

template <class V>
ShadowResult<V> shadow_contraction(const LinOp& op, const PseudoOrbit<V>& po, double tol) {
  if (po.points.empty()) fail(ErrorCode::InvalidArgument, "empty pseudo-orbit");
  check_shape(op, po.points.front());
  const double lambda = operator_norm(op);
  if (!(lambda < 1.0)) fail(ErrorCode::NonContracting, "operator norm " + std::to_string(lambda) + " is not below 1");
  using Seq = std::vector<V>;
  auto gamma = [&](const Seq& xi) {
    Seq out(xi.size(), xi.front());
    out[0] = po.points[0];
    for (std::size_t i = 1; i < xi.size(); ++i) out[i] = apply(op, xi[i - 1]);
    return out;
  };
  double scale = 0.0;
  for (const auto& x : po.points) scale = std::max(scale, vec_norm(x));
  const double lam = std::max(lambda, 1e-3);
  auto fp = banach_fixed_point<Seq>(gamma, po.points, lam, tol, sup_distance<V>, {}, 1e-15 * std::max(1.0, scale));
  ShadowResult<V> r;
  r.n0 = po.n0;
  r.method = ShadowMethod::ContractionFixpoint;
  r.constant_used = 1.0 / (1.0 - lambda);
  r.trajectory.push_back(fp.point.front());
  for (std::size_t i = 1; i < po.points.size(); ++i) r.trajectory.push_back(apply(op, r.trajectory.back()));
  for (std::size_t i = 0; i < po.points.size(); ++i)
    r.sup_error = std::max(r.sup_error, vec_norm(r.trajectory[i] - po.points[i]));
  r.shadow_seed = r.trajectory.front();
  r.orbit_residual = orbit_residual(op, r.trajectory);
  return r;
}

ShadowResult<DenseVector> shadow_window_solve(const LinOp& op, const PseudoOrbit<DenseVector>& po) {
  if (po.points.empty()) fail(ErrorCode::InvalidArgument, "empty pseudo-orbit");
  check_shape(op, po.points.front());
  if (op.dim() > 8) fail(ErrorCode::InvalidArgument, "window solve supports d <= 8");
  if (po.points.size() > 512) fail(ErrorCode::InvalidArgument, "window solve supports at most 512 points");
  std::vector<CVector> z;
  for (std::size_t i = 0; i + 1 < po.points.size(); ++i)
    z.push_back(op.matrix() * po.points[i].coords - po.points[i + 1].coords);
  OrbitWindow w(op.matrix(), op.tag());
  auto sol = w.solve(z, 1e-10);
  ShadowResult<DenseVector> r;
  r.n0 = po.n0;
  r.method = ShadowMethod::WindowSolve;
  for (std::size_t i = 0; i < po.points.size(); ++i)
    r.trajectory.push_back(DenseVector(po.points[i].coords + sol.y[i], op.tag()));
  r.sup_error = sol.value;
  r.constant_used = po.delta > 0.0 ? sol.value / po.delta : 0.0;
  r.shadow_seed = r.trajectory.front();
  r.orbit_residual = orbit_residual(op, r.trajectory);
  return r;
}

Interval shad_conjugacy(const Interval& s, double norm_H, double norm_H_inv) {
  const double k = norm_H * norm_H_inv;
  return {s.lo / k, s.hi * k};
}

Interval shad_product(const Interval& a, const Interval& b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }

Interval shad_inverse(const Interval& s, double norm_L, double norm_L_inv) {
  return {s.lo / norm_L_inv, s.hi * norm_L};
}

template <class V>
std::string trajectory_csv(const ShadowResult<V>& r) {
  std::ostringstream os;
  os.precision(17);
  os << "n,coord,re,im\n";
  for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
    const long n = r.n0 + static_cast<long>(i);
    if constexpr (std::is_same_v<V, DenseVector>) {
      for (int c = 0; c < r.trajectory[i].dim(); ++c)
        os << n << ',' << c << ',' << r.trajectory[i].coords(c).real() << ',' << r.trajectory[i].coords(c).imag() << '\n';
    } else {
      for (const auto& [k, x] : r.trajectory[i].entries()) os << n << ',' << k << ',' << x.real() << ',' << x.imag() << '\n';
    }
  }
  return os.str();
}

#define LINDYN_INSTANTIATE(V)                                                                                       \
  template double pseudo_orbit_defect<V>(const LinOp&, const std::vector<V>&);                                      \
  template PseudoOrbit<V> generate_pseudo_orbit<V>(const LinOp&, const V&, long, long, double, std::uint64_t);      \
  template PseudoOrbit<V> generate_bounded_pseudo_orbit<V>(const LinOp&, const Splitting&, const V&, long, long,    \
                                                           double, std::uint64_t);                                  \
  template ShadowResult<V> shadow_splitting_series<V>(const LinOp&, const Splitting&, const PseudoOrbit<V>&, double); \
  template ShadowResult<V> shadow_contraction<V>(const LinOp&, const PseudoOrbit<V>&, double);                      \
  template std::string trajectory_csv<V>(const ShadowResult<V>&);

LINDYN_INSTANTIATE(DenseVector)
LINDYN_INSTANTIATE(SparseBiSeq)

}  // namespace lindyn
