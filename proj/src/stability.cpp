#include "lindyn/stability.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace lindyn {

double bump_profile(double t) {
  if (!(t < 1.0)) return 0.0;
  const double s = 1.0 - t * t;
  return s * s;
}

LipschitzPerturbation LipschitzPerturbation::zero(int d) {
  LipschitzPerturbation b;
  b.center = Point::Zero(d);
  b.evaluate = [d](const Point&) { return Point::Zero(d); };
  return b;
}

LipschitzPerturbation LipschitzPerturbation::bump(const Point& center, const Point& direction, double radius,
                                                  NormTag tag) {
  if (!(radius > 0.0)) fail(ErrorCode::InvalidArgument, "bump radius must be positive");
  if (center.size() != direction.size()) fail(ErrorCode::InvalidArgument, "bump center and direction differ in size");
  LipschitzPerturbation b;
  b.kind = "bump";
  b.center = center;
  b.support_radius = radius;
  b.sup_norm = norm(direction, tag);
  b.lip_const = b.sup_norm * kBumpSlopeMax / radius;
  b.evaluate = [center, direction, radius, tag](const Point& x) -> Point {
    const double t = norm(x - center, tag) / radius;
    if (!(t < 1.0)) return Point::Zero(x.size());
    return bump_profile(t) * direction;
  };
  return b;
}

LipschitzPerturbation LipschitzPerturbation::bump_with_bounds(const Point& center, const Point& direction, double sup,
                                                              double lip, NormTag tag) {
  if (!(sup > 0.0 && lip > 0.0)) fail(ErrorCode::InvalidArgument, "bump bounds must be positive");
  const double n = norm(direction, tag);
  if (!(n > 0.0)) fail(ErrorCode::InvalidArgument, "bump direction is zero");
  const double radius = kBumpSlopeMax * sup / lip;
  const double amplitude = std::min(sup, lip * radius / kBumpSlopeMax);
  return bump(center, direction * (amplitude / n), radius, tag);
}

LipschitzPerturbation LipschitzPerturbation::constant(const Point& v, NormTag tag) {
  LipschitzPerturbation b;
  b.kind = "constant";
  b.center = Point::Zero(v.size());
  b.sup_norm = norm(v, tag);
  b.evaluate = [v](const Point&) { return v; };
  return b;
}

MapRule MapRule::diag_poly(const std::vector<double>& linear, const std::vector<double>& quadratic,
                           const std::vector<double>& cubic) {
  const std::size_t d = linear.size();
  if (d == 0 || quadratic.size() != d || cubic.size() != d)
    fail(ErrorCode::InvalidArgument, "diag_poly coefficient lists must have equal nonzero length");
  MapRule r;
  r.dim = static_cast<int>(d);
  r.f = [=](const Point& x) {
    Point y(x.size());
    for (std::size_t i = 0; i < d; ++i) {
      const Scalar t = x(static_cast<Eigen::Index>(i));
      y(static_cast<Eigen::Index>(i)) = linear[i] * t + quadratic[i] * t * t + cubic[i] * t * t * t;
    }
    return y;
  };
  r.jacobian = [=](const Point& x) {
    CMatrix J = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const Scalar t = x(ii);
      J(ii, ii) = linear[i] + 2.0 * quadratic[i] * t + 3.0 * cubic[i] * t * t;
    }
    return J;
  };
  return r;
}

MapRule MapRule::linear(const CMatrix& m) {
  MapRule r;
  r.dim = static_cast<int>(m.rows());
  r.f = [m](const Point& x) -> Point { return m * x; };
  r.jacobian = [m](const Point&) { return m; };
  return r;
}

InvertibleMap linear_map(const LinOp& op) {
  const CMatrix L = op.matrix();
  const CMatrix Li = op.inverse_matrix();
  return {[L](const Point& x) -> Point { return L * x; }, [Li](const Point& y) -> Point { return Li * y; }};
}

InvertibleMap perturbed_map(const LinOp& op, const LipschitzPerturbation& beta) {
  const CMatrix L = op.matrix();
  const CMatrix Li = op.inverse_matrix();
  const NormTag tag = op.tag();
  const double lam = beta.lip_const * matrix_norm(Li, tag);
  if (!(lam < 1.0))
    fail(ErrorCode::NotContraction, "Lip(beta)·‖L⁻¹‖ = " + std::to_string(lam) + " is not below 1");
  auto eval = beta.evaluate;
  InvertibleMap m;
  m.forward = [L, eval](const Point& x) -> Point { return L * x + eval(x); };
  if (lam == 0.0) {
    m.backward = [Li, eval](const Point& y) -> Point { return Li * (y - eval(y)); };
    return m;
  }
  const double li_norm = matrix_norm(Li, tag);
  m.backward = [Li, eval, lam, tag, li_norm](const Point& y) -> Point {
    const double scale = std::max(1.0, norm(y, tag));
    auto f = [&](const Point& x) -> Point { return Li * (y - eval(x)); };
    auto dist = [tag](const Point& a, const Point& b) { return norm(a - b, tag); };
    // Steps below the noise floor are dominated by rounding; a few unchecked
    // iterations then polish the point.
    auto r = banach_fixed_point<Point>(f, Point(Li * y), lam, 1e-11 * scale, dist, {}, 1e-11 * scale * li_norm);
    Point x = r.point;
    for (int i = 0; i < 8; ++i) x = f(x);
    return x;
  };
  return m;
}

GammaKernel gamma_kernel(const LinOp& op, const Splitting& split, double alpha_sup, double tail_tol) {
  if (!op.is_dense() || !split.dense()) fail(ErrorCode::KindMismatch, "stability needs a dense operator and splitting");
  if (!(tail_tol > 0.0)) fail(ErrorCode::InvalidArgument, "tail_tol must be positive");
  const ShadBounds sb = shad_bounds(op, split);
  GammaKernel k;
  k.tag = op.tag();
  k.tail_tol = tail_tol;
  k.series_A = split.dim_S() == 0 ? 0.0 : sb.series_A;
  k.series_B = split.dim_U() == 0 ? 0.0 : sb.series_B;
  k.proj_norm = std::max(split.dim_S() == 0 ? 0.0 : split.proj_S_norm, split.dim_U() == 0 ? 0.0 : split.proj_U_norm);
  k.gamma_bound = k.proj_norm * (k.series_A + k.series_B);
  if (!std::isfinite(k.gamma_bound)) fail(ErrorCode::NotCertified, "Γ bound is not finite");
  if (alpha_sup == 0.0) return k;

  const CMatrix& L = op.matrix();
  const CMatrix& Li = op.inverse_matrix();
  const double rel = tail_tol / alpha_sup;
  std::vector<CMatrix> s_terms{split.P_S};
  auto a = [&](int j) {
    while (static_cast<int>(s_terms.size()) <= j) s_terms.push_back(L * s_terms.back());
    return matrix_norm(s_terms[static_cast<std::size_t>(j)], k.tag);
  };
  const SeriesSum sa = sum_norm_series(a, 0, rel, 10000);
  if (!sa.finite()) fail(ErrorCode::TrajectoryBudget, "stable Γ series needs more than 10000 terms");
  s_terms.resize(static_cast<std::size_t>(sa.terms));
  k.stable = std::move(s_terms);

  std::vector<CMatrix> u_terms{split.P_U};
  auto b = [&](int j) {
    while (static_cast<int>(u_terms.size()) <= j) u_terms.push_back(Li * u_terms.back());
    return matrix_norm(u_terms[static_cast<std::size_t>(j)], k.tag);
  };
  const SeriesSum sbu = sum_norm_series(b, 1, rel, 10000);
  if (!sbu.finite()) fail(ErrorCode::TrajectoryBudget, "unstable Γ series needs more than 10000 terms");
  u_terms.resize(static_cast<std::size_t>(sbu.terms));
  k.unstable.assign(u_terms.begin() + 1, u_terms.end());
  return k;
}

Point gamma_eval(const GammaKernel& kernel, const std::function<Point(const Point&)>& alpha, const InvertibleMap& R,
                 const Point& x) {
  Point out = Point::Zero(x.size());
  Point y = x;
  for (const CMatrix& Sk : kernel.stable) {
    y = R.backward(y);
    if (!y.allFinite()) break;
    const Point a = alpha(y);
    if (!a.isZero(0.0)) out += Sk * a;
  }
  y = x;
  for (const CMatrix& Uk : kernel.unstable) {
    const Point a = alpha(y);
    if (!a.isZero(0.0)) out -= Uk * a;
    y = R.forward(y);
    if (!y.allFinite()) break;
  }
  return out;
}

Point gamma_eval(const LinOp& op, const Splitting& split, const std::function<Point(const Point&)>& alpha,
                 double alpha_sup, const InvertibleMap& R, const Point& x, double tail_tol) {
  return gamma_eval(gamma_kernel(op, split, alpha_sup, tail_tol), alpha, R, x);
}

ConjugacyField::ConjugacyField(LinOp op, Splitting split, LipschitzPerturbation beta, GammaKernel kernel, Mode mode,
                               int depth, double q)
    : op_(std::move(op)),
      split_(std::move(split)),
      beta_(std::move(beta)),
      kernel_(std::move(kernel)),
      mode_(mode),
      depth_(depth),
      q_(q),
      memo_(std::make_shared<Memo>()) {
  R_ = mode_ == Mode::Picard ? linear_map(op_) : perturbed_map(op_, beta_);
}

PicardTrace ConjugacyField::picard(const Point& x, bool keep_trace) const {
  const long Ks = static_cast<long>(kernel_.stable.size());
  const long Ku = std::max(0L, static_cast<long>(kernel_.unstable.size()) - 1);
  const long D = depth_;
  const Eigen::Index d = x.size();
  const CMatrix& L = op_.matrix();
  const CMatrix& Li = op_.inverse_matrix();

  // Orbit y_i = L^i x on the widest window [-D·Ks, D·Ku].
  const long lo0 = -D * Ks, hi0 = D * Ku;
  std::vector<Point> orbit(static_cast<std::size_t>(hi0 - lo0 + 1));
  auto at = [&](std::vector<Point>& v, long lo, long i) -> Point& { return v[static_cast<std::size_t>(i - lo)]; };
  at(orbit, lo0, 0) = x;
  for (long i = 1; i <= hi0; ++i) at(orbit, lo0, i) = L * at(orbit, lo0, i - 1);
  for (long i = -1; i >= lo0; --i) at(orbit, lo0, i) = Li * at(orbit, lo0, i + 1);

  PicardTrace tr;
  std::vector<Point> prev(orbit.size(), Point::Zero(d));  // h_0 on the level-0 window
  long plo = lo0;
  if (keep_trace) tr.iterates.push_back(Point::Zero(d));
  for (long m = 1; m <= D; ++m) {
    const long lo = -(D - m) * Ks, hi = (D - m) * Ku;
    const long phi = plo + static_cast<long>(prev.size()) - 1;
    std::vector<Point> g(prev.size());
    std::vector<char> nz(prev.size(), 0);
    for (long i = plo; i <= phi; ++i) {
      const Point& y = at(orbit, lo0, i);
      if (!y.allFinite()) continue;
      Point v = beta_.evaluate(y + at(prev, plo, i));
      if (!v.isZero(0.0)) {
        at(g, plo, i) = std::move(v);
        nz[static_cast<std::size_t>(i - plo)] = 1;
      }
    }
    std::vector<Point> cur(static_cast<std::size_t>(hi - lo + 1), Point::Zero(d));
    double diff = 0.0;
    for (long j = lo; j <= hi; ++j) {
      Point& hj = at(cur, lo, j);
      for (long k = 0; k < Ks; ++k) {
        const long i = j - k - 1;
        if (nz[static_cast<std::size_t>(i - plo)]) hj += kernel_.stable[static_cast<std::size_t>(k)] * at(g, plo, i);
      }
      for (long k = 1; k <= static_cast<long>(kernel_.unstable.size()); ++k) {
        const long i = j + k - 1;
        if (nz[static_cast<std::size_t>(i - plo)]) hj -= kernel_.unstable[static_cast<std::size_t>(k - 1)] * at(g, plo, i);
      }
      diff = std::max(diff, norm(hj - at(prev, plo, j), kernel_.tag));
    }
    if (keep_trace) {
      tr.iterates.push_back(at(cur, lo, 0));
      tr.window_diff.push_back(diff);
      if (m >= 2) {
        const double den = tr.window_diff[static_cast<std::size_t>(m - 2)];
        if (den > 1e-12) tr.ratios.push_back(diff / den);
      }
    }
    prev = std::move(cur);
    plo = lo;
  }
  if (!keep_trace) tr.iterates.push_back(at(prev, plo, 0));
  return tr;
}

Point ConjugacyField::h(const Point& x) const {
  if (x.size() != op_.dim()) fail(ErrorCode::InvalidArgument, "point dimension does not match the operator");
  std::vector<double> key;
  key.reserve(static_cast<std::size_t>(2 * x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    key.push_back(std::round(x(i).real() * 1e12));
    key.push_back(std::round(x(i).imag() * 1e12));
  }
  {
    std::lock_guard<std::mutex> lock(memo_->mu);
    auto it = memo_->table.find(key);
    if (it != memo_->table.end() && it->second.first == x) return it->second.second;
  }
  Point value;
  if (depth_ == 0 || (kernel_.stable.empty() && kernel_.unstable.empty())) {
    value = Point::Zero(x.size());
  } else if (mode_ == Mode::Picard) {
    value = picard(x, false).iterates.back();
  } else {
    auto eval = beta_.evaluate;
    value = gamma_eval(kernel_, [&eval](const Point& y) -> Point { return -eval(y); }, R_, x);
  }
  std::lock_guard<std::mutex> lock(memo_->mu);
  memo_->table.emplace(std::move(key), std::make_pair(x, value));
  return value;
}

PicardTrace ConjugacyField::trace(const Point& x) const {
  if (mode_ != Mode::Picard) fail(ErrorCode::InvalidArgument, "trace needs a Picard field");
  if (depth_ == 0) return PicardTrace{{Point::Zero(x.size())}, {}, {}};
  return picard(x, true);
}

std::size_t ConjugacyField::memo_size() const {
  std::lock_guard<std::mutex> lock(memo_->mu);
  return memo_->table.size();
}

namespace {

void check_beta(const LinOp& op, const LipschitzPerturbation& beta) {
  if (!op.is_dense()) fail(ErrorCode::KindMismatch, "stability needs a dense operator");
  if (!op.invertible()) fail(ErrorCode::NotInvertible, "base operator is not invertible");
  if (beta.center.size() != op.dim()) fail(ErrorCode::InvalidArgument, "perturbation dimension does not match");
}

}  // namespace

ConjugacyField conjugacy_solve(const LinOp& op, const Splitting& split, const LipschitzPerturbation& beta, double tol,
                               int max_depth, double tail_tol) {
  check_beta(op, beta);
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tol must be positive");
  GammaKernel k = gamma_kernel(op, split, beta.sup_norm, tail_tol);
  const double q = k.gamma_bound * beta.lip_const;
  if (!(q < 1.0)) fail(ErrorCode::NotContraction, "contraction factor d(A+B)·Lip = " + std::to_string(q));
  // ‖h - h_D‖ <= q^D/(1-q)·‖h_1‖ <= q^D/(1-q)·d(A+B)·sup.
  int depth = 0;
  const double h1 = k.gamma_bound * beta.sup_norm;
  if (h1 > 0.0) {
    depth = 1;
    while (std::pow(q, depth) * h1 / (1.0 - q) > tol) {
      if (++depth > max_depth) fail(ErrorCode::NoConvergence, "Picard depth exceeds " + std::to_string(max_depth));
    }
  }
  return ConjugacyField(op, split, beta, std::move(k), ConjugacyField::Mode::Picard, depth, q);
}

ConjugacyField inverse_conjugacy(const LinOp& op, const Splitting& split, const LipschitzPerturbation& beta,
                                 double tail_tol) {
  check_beta(op, beta);
  GammaKernel k = gamma_kernel(op, split, beta.sup_norm, tail_tol);
  const double q = k.gamma_bound * beta.lip_const;
  if (!(q < 1.0)) fail(ErrorCode::NotContraction, "contraction factor d(A+B)·Lip = " + std::to_string(q));
  return ConjugacyField(op, split, beta, std::move(k), ConjugacyField::Mode::Direct, beta.sup_norm > 0.0 ? 1 : 0, q);
}

double conjugacy_residual(const ConjugacyField& field, const std::vector<Point>& test_points) {
  const CMatrix& L = field.base_op().matrix();
  double worst = 0.0;
  for (const Point& x : test_points) {
    const Point Hx = field.H(x);
    const Point lhs = field.H(Point(L * x));
    const Point rhs = L * Hx + field.perturbation().evaluate(Hx);
    worst = std::max(worst, norm(lhs - rhs, field.tag()));
  }
  return worst;
}

double inverse_residual(const ConjugacyField& field, const ConjugacyField& inverse_field,
                        const std::vector<Point>& test_points) {
  double worst = 0.0;
  for (const Point& x : test_points) worst = std::max(worst, norm(inverse_field.H(field.H(x)) - x, field.tag()));
  return worst;
}

std::vector<Point> stability_test_points(int d, int count, double radius) {
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                               59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};
  if (d < 1 || d > kMaxDim) fail(ErrorCode::InvalidArgument, "dimension out of range");
  std::vector<Point> pts;
  for (int n = 1; n <= count; ++n) {
    Point x(d);
    for (int i = 0; i < d; ++i) {
      double f = 1.0, r = 0.0;
      for (int m = n; m > 0; m /= primes[i]) {
        f /= primes[i];
        r += f * (m % primes[i]);
      }
      x(i) = radius * (2.0 * r - 1.0);
    }
    pts.push_back(x);
  }
  return pts;
}

LocalLinearization grobman_hartman_local(const MapRule& F, const Point& p, double box_radius, double tol, NormTag tag,
                                         int test_points) {
  const int d = static_cast<int>(p.size());
  if (d != F.dim) fail(ErrorCode::InvalidArgument, "fixed point dimension does not match the map");
  if (!(box_radius > 0.0)) fail(ErrorCode::InvalidArgument, "box radius must be positive");
  const double defect = norm(F.f(p) - p, tag);
  if (!(defect <= 1e-10)) fail(ErrorCode::HypothesisFailed, "F(p) - p has norm " + std::to_string(defect));
  const CMatrix DF = F.jacobian(p);
  LinOp L = LinOp::dense(DF, tag);
  if (!L.invertible()) fail(ErrorCode::NotCertified, "DF(p) is not invertible");
  Splitting split;
  try {
    split = spectral_split(L);
  } catch (const Error& e) {
    fail(ErrorCode::NotCertified, std::string("no splitting for DF(p): ") + e.what());
  }
  const ShadBounds sb = shad_bounds(L, split);
  const double proj = std::max(split.dim_S() ? split.proj_S_norm : 0.0, split.dim_U() ? split.proj_U_norm : 0.0);
  const double dAB = proj * ((split.dim_S() ? sb.series_A : 0.0) + (split.dim_U() ? sb.series_B : 0.0));
  const double delta = 0.5 / dAB;

  auto G = [f = F.f, p](const Point& y) -> Point { return f(y + p) - p; };
  auto alpha = [G, DF](const Point& y) -> Point { return G(y) - DF * y; };

  std::mt19937_64 rng(0x6a11);
  std::uniform_real_distribution<double> u(-1.0, 1.0), u01(0.0, 1.0);
  std::vector<Point> unit;
  for (int i = 0; i < d; ++i)
    for (double s : {-1.0, 1.0}) {
      Point e = Point::Zero(d);
      e(i) = s;
      unit.push_back(e);
    }
  for (int t = 0; t < 2000; ++t) {
    Point v(d);
    for (int i = 0; i < d; ++i) v(i) = u(rng);
    const double n = norm(v, tag);
    if (n == 0.0) continue;
    unit.push_back(v * (std::pow(u01(rng), 1.0 / d) / n));
  }
  if (tag == NormTag::LInf) {
    for (int mask = 0; mask < (1 << std::min(d, 10)); ++mask) {
      Point c(d);
      for (int i = 0; i < d; ++i) c(i) = (i < 10 && (mask >> i) & 1) ? 1.0 : -1.0;
      unit.push_back(c);
    }
  }

  LocalLinearization out{ConjugacyField(conjugacy_solve(L, split, LipschitzPerturbation::zero(d), tol)), p, 0.0, 0.0,
                         0.0, 0.0, 0.0, 0};
  for (double r = box_radius; r >= 1e-4; r *= 0.7, ++out.shrink_steps) {
    double sup = 0.0, lip = 0.0;
    for (const Point& v : unit) {
      const Point y = r * v;
      sup = std::max(sup, norm(alpha(y), tag));
      lip = std::max(lip, matrix_norm(F.jacobian(y + p) - DF, tag));
    }
    sup *= 1.1;
    lip *= 1.1;
    const double lip_cut = lip + sup * 2.0 * kBumpSlopeMax / r;
    if (!(sup < delta && lip_cut < delta)) continue;

    LipschitzPerturbation beta;
    beta.kind = "cutoff_remainder";
    beta.center = Point::Zero(d);
    beta.support_radius = r;
    beta.sup_norm = sup;
    beta.lip_const = lip_cut;
    beta.evaluate = [alpha, r, tag](const Point& y) -> Point {
      const double t = norm(y, tag) / r;
      if (!(t < 1.0)) return Point::Zero(y.size());
      const double chi = t <= 0.5 ? 1.0 : bump_profile(2.0 * t - 1.0);
      return chi * alpha(y);
    };
    out.field = conjugacy_solve(L, split, beta, tol);
    out.box_radius = r;
    out.linearization_radius = r / 2.0;
    out.alpha_sup = sup;
    out.alpha_lip = lip_cut;
    const double inner = tag == NormTag::LInf ? r / 2.0 : (tag == NormTag::L2 ? r / (2.0 * std::sqrt(d)) : r / (2.0 * d));
    out.residual = conjugacy_residual(out.field, stability_test_points(d, test_points, inner));
    return out;
  }
  fail(ErrorCode::NotContraction, "no box radius >= 1e-4 meets the contraction condition");
}

CarReport car_verify(const LinOp& op, int trials, int seq_len, std::uint64_t rng_seed) {
  if (!op.is_dense()) fail(ErrorCode::KindMismatch, "car_verify needs a dense operator");
  if (trials < 0 || seq_len < 1) fail(ErrorCode::InvalidArgument, "trials must be >= 0 and seq_len >= 1");
  const double r = spectral_radius(op).value;
  if (!(r < 1.0)) fail(ErrorCode::NotContractiveSpectrum, "spectral radius " + std::to_string(r));
  const NormTag tag = op.tag();
  const CMatrix& L = op.matrix();
  CMatrix Lk = CMatrix::Identity(L.rows(), L.cols());
  const SeriesSum s = sum_norm_series(
      [&](int k) {
        if (k > 0) Lk = L * Lk;
        return matrix_norm(Lk, tag);
      },
      0, 1e-12, 10000);
  if (!s.finite()) fail(ErrorCode::NotContractiveSpectrum, "Σ‖L^k‖ did not converge");
  CarReport rep;
  rep.gamma = s.value + s.tail_bound;
  rep.trials = trials;
  const int d = op.dim();
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random_point = [&]() {
    Point v(d);
    for (int i = 0; i < d; ++i) v(i) = Scalar(u(rng), u(rng));
    const double n = norm(v, tag);
    return n > 0.0 ? Point(v / n * std::abs(u(rng))) : v;
  };
  for (int t = 0; t < trials; ++t) {
    std::vector<Point> xs(static_cast<std::size_t>(seq_len));
    if (t % 2 == 0) {
      for (auto& x : xs) x = random_point();
    } else {
      const Point c = random_point();
      for (auto& x : xs) x = c;
    }
    double sup = 0.0;
    Point acc = Point::Zero(d);
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
      acc = L * acc + *it;
      sup = std::max(sup, norm(*it, tag));
    }
    const double ratio = sup > 0.0 ? norm(acc, tag) / sup : 0.0;
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (ratio > rep.gamma * (1.0 + 1e-12)) ++rep.violations;
  }

  const Splitting all = coordinate_split_all_dense(d, tag);
  rep.shadow_delta = 1e-3;
  const auto po = generate_pseudo_orbit(op, DenseVector(random_point(), tag), 0, 200, rep.shadow_delta, rng_seed ^ 0xca5);
  const auto sh = shadow_splitting_series(op, all, po);
  rep.shadow_sup_error = sh.sup_error;
  rep.shadow_ok = sh.sup_error <= rep.gamma * rep.shadow_delta * (1.0 + 1e-9);
  return rep;
}

std::string conjugacy_grid_csv(const ConjugacyField& field, const std::vector<Point>& points) {
  std::ostringstream os;
  os.precision(17);
  const int d = field.base_op().dim();
  for (int i = 0; i < d; ++i) os << "x" << i + 1 << ",";
  for (int i = 0; i < d; ++i) os << "H" << i + 1 << (i + 1 < d ? "," : "\n");
  for (const Point& x : points) {
    const Point Hx = field.H(x);
    for (int i = 0; i < d; ++i) os << x(i).real() << ",";
    for (int i = 0; i < d; ++i) os << Hx(i).real() << (i + 1 < d ? "," : "\n");
  }
  return os.str();
}

}  // namespace lindyn
