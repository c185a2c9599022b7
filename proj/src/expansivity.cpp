#include "lindyn/expansivity.hpp"

#include <random>
#include <sstream>

#include "lindyn/convex.hpp"
#include "lindyn/orbit_window.hpp"

namespace lindyn {

const char* expansive_verdict_name(ExpansiveVerdict v) {
  switch (v) {
    case ExpansiveVerdict::Expansive: return "Expansive";
    case ExpansiveVerdict::NotExpansive: return "NotExpansive";
    case ExpansiveVerdict::NotApplicable: return "NotApplicable";
  }
  return "?";
}

ExpansiveVerdict expansive_eigen_test(const LinOp& op, double gap) {
  if (!op.is_dense() || !op.invertible()) return ExpansiveVerdict::NotApplicable;
  for (const auto& p : dense_eig(op.matrix()))
    if (std::abs(std::abs(p.value) - 1.0) <= gap) return ExpansiveVerdict::NotExpansive;
  return ExpansiveVerdict::Expansive;
}

template <class V>
UniformSearch uniform_expansivity_search(const LinOp& op, int m_max, const std::vector<V>& samples) {
  if (!op.invertible()) fail(ErrorCode::NotInvertible, "uniform expansivity needs an invertible operator");
  const LinOp inv = inverse(op);
  UniformSearch out;
  std::vector<std::vector<bool>> pass(samples.size(), std::vector<bool>(static_cast<std::size_t>(m_max + 1), false));
  for (std::size_t s = 0; s < samples.size(); ++s) {
    V f = samples[s], b = samples[s];
    std::optional<int> first;
    for (int m = 1; m <= m_max; ++m) {
      f = apply(op, f);
      b = apply(inv, b);
      pass[s][static_cast<std::size_t>(m)] = vec_norm(f) >= 2.0 || vec_norm(b) >= 2.0;
      if (!first && pass[s][static_cast<std::size_t>(m)]) first = m;
    }
    out.first_m.push_back(first);
  }
  for (int m = 1; m <= m_max && !out.m; ++m) {
    bool all = true;
    for (const auto& p : pass) all = all && p[static_cast<std::size_t>(m)];
    if (all) out.m = m;
  }
  return out;
}

std::vector<DenseVector> default_samples(int d, NormTag tag, std::uint64_t seed, int mixtures) {
  std::vector<DenseVector> out;
  for (int i = 0; i < d; ++i) out.push_back(DenseVector::basis(d, i, tag));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int j = 0; j < mixtures; ++j) {
    CVector c(d);
    for (int i = 0; i < d; ++i) c(i) = u(rng);
    double n = norm(c, tag);
    if (n == 0.0) continue;
    out.push_back(DenseVector(c / n, tag));
  }
  return out;
}

std::vector<SparseBiSeq> default_sequence_samples(NormTag tag, std::uint64_t seed, long radius, int mixtures) {
  std::vector<SparseBiSeq> out;
  for (long k = -radius; k <= radius; ++k) out.push_back(SparseBiSeq::basis(k, tag));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<long> idx(-radius, radius);
  for (int j = 0; j < mixtures; ++j) {
    SparseBiSeq s(tag);
    for (int t = 0; t < 3; ++t) s.add(idx(rng), u(rng));
    double n = vec_norm(s);
    if (n == 0.0) continue;
    out.push_back(Scalar(1.0 / n) * s);
  }
  return out;
}

namespace {

Eigen::VectorXd realify(const CVector& v) {
  Eigen::VectorXd r(2 * v.size());
  r << v.real(), v.imag();
  return r;
}

CVector complexify(const Eigen::VectorXd& r) {
  const Eigen::Index d = r.size() / 2;
  CVector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = Scalar(r(i), r(d + i));
  return v;
}

struct HyperplaneMin {
  CVector x;
  double value = kInf;
  double lower = 0.0;
  bool converged = false;
};

// Coordinates x = B t for the window problem, with P[n] = L^n B over the
// window. Whenever a minimizer has f <= F it also has ‖t‖₂ <= t_bound·F.
struct WindowCoords {
  CMatrix B;
  std::vector<CMatrix> P;
  double t_bound = 1.0;
  std::vector<CVector> candidates;  // in t coordinates
};

// Scaled eigen-coordinates: column j of B is v_j / max_{|n|<=N} |λ_j|^n, so
// every entry of P[n] = V diag(λ^n) S is bounded by ‖V‖ however large the
// powers get. For n = ±N, |t_j| = |(V⁻¹ L^n x)_j| and so ‖t‖₂ <= √d ‖V⁻¹‖₂ κ f.
std::optional<WindowCoords> eigen_coords(const LinOp& op, int N, double kappa) {
  const int d = op.dim();
  Eigen::ComplexEigenSolver<CMatrix> es(op.matrix());
  if (es.info() != Eigen::Success) return std::nullopt;
  const CMatrix V = es.eigenvectors();
  const CVector lam = es.eigenvalues();
  Eigen::JacobiSVD<CMatrix> svd(V);
  const auto sv = svd.singularValues();
  if (!(sv(d - 1) > 0.0) || sv(0) / sv(d - 1) > 1e8) return std::nullopt;
  WindowCoords w;
  CVector scale(d);
  std::vector<double> loglam(d);
  for (int j = 0; j < d; ++j) {
    loglam[j] = std::log(std::abs(lam(j)));
    scale(j) = std::exp(-N * std::abs(loglam[j]));
  }
  w.B = V * scale.asDiagonal();
  for (int n = -N; n <= N; ++n) {
    CVector dn(d);
    for (int j = 0; j < d; ++j)
      dn(j) = std::exp(n * loglam[j] - N * std::abs(loglam[j])) * std::polar(1.0, n * std::arg(lam(j)));
    w.P.push_back(V * dn.asDiagonal());
  }
  w.t_bound = std::sqrt(static_cast<double>(d)) * kappa / sv(d - 1);
  for (int j = 0; j < d; ++j) w.candidates.push_back(CVector::Unit(d, j));
  return w;
}

WindowCoords plain_coords(const LinOp& op, int N, double kappa) {
  const int d = op.dim();
  WindowCoords w;
  w.B = CMatrix::Identity(d, d);
  w.P.push_back(CMatrix::Identity(d, d));
  CMatrix f = CMatrix::Identity(d, d), b = CMatrix::Identity(d, d);
  for (int n = 1; n <= N; ++n) {
    f = op.matrix() * f;
    b = op.inverse_matrix() * b;
    w.P.push_back(f);
    w.P.push_back(b);
  }
  w.t_bound = kappa;
  try {
    for (const auto& p : dense_eig(op.matrix(), op.tag())) w.candidates.push_back(p.vector.coords);
  } catch (const Error&) {
  }
  return w;
}

// Minimizes f(t) = max_n ‖P_n t‖ over the real hyperplane Re(u* B t) = 1.
HyperplaneMin minimize_on_hyperplane(const WindowCoords& w, const CVector& u, NormTag tag) {
  const CVector ut = w.B.adjoint() * u;
  const Eigen::Index d = ut.size();
  const Eigen::VectorXd a = realify(ut);
  HyperplaneMin out;
  if (!(a.squaredNorm() > 0.0)) return out;
  const Eigen::VectorXd tp = a / a.squaredNorm();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.transpose(), Eigen::ComputeFullV);
  const Eigen::MatrixXd Nb = svd.matrixV().rightCols(2 * d - 1);
  auto value_at = [&](const CVector& t, int* arg) {
    double best = 0.0;
    *arg = 0;
    for (std::size_t n = 0; n < w.P.size(); ++n) {
      const double v = norm(w.P[n] * t, tag);
      if (!(v <= best)) {
        best = v;
        *arg = static_cast<int>(n);
      }
    }
    return best;
  };
  ConvexObjective f = [&](const Eigen::VectorXd& s, Eigen::VectorXd* g) {
    const CVector t = complexify(tp + Nb * s);
    int n = 0;
    const double v = value_at(t, &n);
    if (g) {
      const CMatrix& Pn = w.P[static_cast<std::size_t>(n)];
      *g = Nb.transpose() * realify(Pn.adjoint() * norm_subgradient(Pn * t, tag));
    }
    return v;
  };
  int arg = 0;
  CVector best_t = complexify(tp);
  out.value = value_at(best_t, &arg);
  for (const CVector& c : w.candidates) {
    const Scalar sc = ut.dot(c);
    if (std::abs(sc) < 1e-12 * c.norm()) continue;
    const CVector t = c / sc;
    const double v = value_at(t, &arg);
    if (v < out.value) {
      out.value = v;
      best_t = t;
    }
  }
  if (std::isfinite(out.value)) {
    const double radius = 1.1 * (w.t_bound * out.value + tp.norm());
    auto res = ellipsoid_minimize(f, Eigen::VectorXd::Zero(2 * d - 1), radius, 1e-14 * out.value, 50000, 1e-9);
    if (res.value < out.value) {
      best_t = complexify(tp + Nb * res.x);
      out.value = res.value;
    }
    out.converged = res.converged;
    out.lower = res.converged ? std::max(0.0, res.lower_bound) : 0.0;
  }
  out.x = w.B * best_t;
  return out;
}

}  // namespace

std::vector<GrowthPoint> central_window_growth(const LinOp& op, const std::vector<int>& N_list) {
  if (!op.is_dense()) fail(ErrorCode::KindMismatch, "window growth needs a dense operator");
  if (op.dim() > 8) fail(ErrorCode::InvalidArgument, "window growth supports d <= 8");
  if (!op.invertible()) fail(ErrorCode::NotInvertible, "window growth needs an invertible operator");
  const int d = op.dim();
  const NormTag tag = op.tag();
  const double kappa = tag == NormTag::LInf ? std::sqrt(static_cast<double>(d)) : 1.0;
  std::vector<GrowthPoint> out;
  for (int N : N_list) {
    if (N < 0) fail(ErrorCode::InvalidArgument, "N must be nonnegative");
    const auto eig = eigen_coords(op, N, kappa);
    const WindowCoords w = eig ? *eig : plain_coords(op, N, kappa);
    GrowthPoint gp;
    gp.N = N;
    gp.value = kInf;
    gp.lower_bound = kInf;
    if (tag == NormTag::LInf) {
      // Extreme points of the dual ball are the basis functionals.
      gp.exact = true;
      for (int i = 0; i < d; ++i) {
        auto r = minimize_on_hyperplane(w, CVector::Unit(d, i), tag);
        gp.value = std::min(gp.value, r.value);
        gp.lower_bound = std::min(gp.lower_bound, r.lower);
        if (!r.converged) gp.exact = false;
      }
    } else {
      // Start from basis and eigen directions, then re-norm at each optimum.
      std::vector<CVector> starts;
      for (int i = 0; i < d; ++i) starts.push_back(CVector::Unit(d, i));
      for (const auto& c : w.candidates) starts.push_back(w.B * c);
      for (const auto& s : starts) {
        if (!(s.norm() > 0.0)) continue;
        CVector u = norm_subgradient(s, tag);
        for (int round = 0; round < 4; ++round) {
          auto r = minimize_on_hyperplane(w, u, tag);
          const double nx = norm(r.x, tag);
          if (!(nx > 0.0) || !std::isfinite(r.value)) break;
          gp.value = std::min(gp.value, r.value / nx);
          CVector un = norm_subgradient(r.x, tag);
          if ((un - u).norm() < 1e-12) break;
          u = un;
        }
      }
      gp.lower_bound = 0.0;
    }
    out.push_back(gp);
  }
  return out;
}

template <class V>
bool ecs_membership(const LinOp& op, const V& x, double c, double beta, int horizon) {
  if (!(beta > 0.0 && beta < 1.0)) fail(ErrorCode::InvalidArgument, "beta must lie in (0,1)");
  const double nx = vec_norm(x);
  V y = x;
  double bn = 1.0;
  for (int n = 0; n <= horizon; ++n) {
    if (n > 0) {
      y = apply(op, y);
      bn *= beta;
    }
    if (vec_norm(y) > c * bn * nx * (1.0 + 1e-12)) return false;
  }
  return true;
}

std::optional<EcsCertificate> ecs_certificate(const LinOp& op, const Splitting& split, int horizon) {
  HyperbolicityReport rep = classify(op, split);
  if (rep.cls != HypClass::Hyperbolic && rep.cls != HypClass::GeneralizedHyperbolic) return std::nullopt;
  EcsCertificate cert;
  cert.beta = std::min(0.999, std::max(1e-3, 0.5 * (1.0 + rep.r_S)));
  cert.horizon = horizon;
  RestrictedPowers ps(op, split, RestrictedPowers::Side::S);
  double bn = 1.0;
  for (int n = 0; n <= horizon; ++n) {
    if (n > 0) bn *= cert.beta;
    cert.c = std::max(cert.c, ps.next().upper / bn);
  }
  cert.c = std::max(cert.c, 1.0);
  return cert;
}

std::string growth_csv(const std::vector<GrowthPoint>& g) {
  std::ostringstream os;
  os.precision(17);
  os << "N,value\n";
  for (const auto& p : g) os << p.N << ',' << p.value << '\n';
  return os.str();
}

template UniformSearch uniform_expansivity_search<DenseVector>(const LinOp&, int, const std::vector<DenseVector>&);
template UniformSearch uniform_expansivity_search<SparseBiSeq>(const LinOp&, int, const std::vector<SparseBiSeq>&);
template bool ecs_membership<DenseVector>(const LinOp&, const DenseVector&, double, double, int);
template bool ecs_membership<SparseBiSeq>(const LinOp&, const SparseBiSeq&, double, double, int);

}  // namespace lindyn
