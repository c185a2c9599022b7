#include "lindyn/linf.hpp"

#include <random>
#include <sstream>

#include "lindyn/convex.hpp"
#include "lindyn/orbit_window.hpp"
#include "lindyn/shadowing.hpp"

namespace lindyn {

template <class V>
std::vector<V> linf_apply(const WindowedLinf& w, const std::vector<V>& xi) {
  if (xi.size() != static_cast<std::size_t>(2 * w.N + 1)) fail(ErrorCode::KindMismatch, "expected 2N+1 inputs");
  std::vector<V> out;
  for (std::size_t n = 0; n + 1 < xi.size(); ++n) out.push_back(xi[n + 1] - apply(w.base_op, xi[n]));
  return out;
}

template std::vector<DenseVector> linf_apply<DenseVector>(const WindowedLinf&, const std::vector<DenseVector>&);
template std::vector<SparseBiSeq> linf_apply<SparseBiSeq>(const WindowedLinf&, const std::vector<SparseBiSeq>&);

namespace {

double block_dual_norm(const CVector& v, int d, NormTag tag) {
  const NormTag dt = dual_tag(tag);
  double s = 0.0;
  for (Eigen::Index b = 0; b < v.size() / d; ++b) s += norm(v.segment(b * d, d), dt);
  return s;
}

CVector block_dual_subgradient(const CVector& v, int d, NormTag tag) {
  const NormTag dt = dual_tag(tag);
  CVector g(v.size());
  for (Eigen::Index b = 0; b < v.size() / d; ++b) g.segment(b * d, d) = norm_subgradient(v.segment(b * d, d), dt);
  return g;
}

// Extreme (or sampled) points u of the dual unit ball for one block.
std::vector<CVector> dual_directions(int d, NormTag tag) {
  std::vector<CVector> out;
  for (int i = 0; i < d; ++i) out.push_back(CVector::Unit(d, i));
  if (tag == NormTag::LInf) return out;
  std::mt19937_64 rng(0xd1a1);
  std::normal_distribution<double> g;
  for (int t = 0; t < 32; ++t) {
    CVector u(d);
    for (int i = 0; i < d; ++i) u(i) = Scalar(g(rng), g(rng));
    if (tag == NormTag::L1)
      for (int i = 0; i < d; ++i) u(i) /= std::abs(u(i));
    else
      u /= u.norm();
    out.push_back(u);
  }
  return out;
}

}  // namespace

double linf_injectivity_margin(const WindowedLinf& w) {
  const LinOp& op = w.base_op;
  if (!op.is_dense()) fail(ErrorCode::KindMismatch, "injectivity margin needs a dense operator");
  if (w.N < 0) fail(ErrorCode::InvalidArgument, "N must be nonnegative");
  if (w.N == 0) return kInf;
  const int d = op.dim();
  const int cols = 2 * w.N + 1;
  const int rows = cols + 1;
  if (d * cols > 4096) fail(ErrorCode::InvalidArgument, "window too large");
  const NormTag tag = op.tag();
  CMatrix A = CMatrix::Zero(rows * d, cols * d);
  for (int r = 0; r < rows; ++r) {
    if (r < cols) A.block(r * d, r * d, d, d) = CMatrix::Identity(d, d);
    if (r >= 1) A.block(r * d, (r - 1) * d, d, d) = -op.matrix();
  }
  Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const CMatrix U = svd.matrixU();
  // A⁺ = V Σ⁻¹ U_r*; W spans range(A)^⊥.
  const CMatrix Ur = U.leftCols(cols * d);
  const CMatrix W = U.rightCols(d);
  const CMatrix pinv = svd.matrixV() * sv.cwiseInverse().cast<Scalar>().asDiagonal() * Ur.adjoint();

  const auto dirs = dual_directions(d, tag);
  double worst = 0.0;
  for (int j = 0; j < cols; ++j) {
    for (const auto& u : dirs) {
      // ℓ = (row block j of A⁺)^* u
      const CVector ell = pinv.block(j * d, 0, d, rows * d).adjoint() * u;
      const double f0 = block_dual_norm(ell, d, tag);
      if (f0 <= worst) continue;
      ConvexObjective f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
        CVector mu(d);
        for (int i = 0; i < d; ++i) mu(i) = Scalar(x(i), x(d + i));
        const CVector v = ell + W * mu;
        if (g) {
          const CVector gw = W.adjoint() * block_dual_subgradient(v, d, tag);
          g->resize(2 * d);
          for (int i = 0; i < d; ++i) {
            (*g)(i) = gw(i).real();
            (*g)(d + i) = gw(i).imag();
          }
        }
        return block_dual_norm(v, d, tag);
      };
      const double radius = 2.2 * std::sqrt(static_cast<double>(d)) * f0;
      auto res = ellipsoid_minimize(f, Eigen::VectorXd::Zero(2 * d), radius, 1e-10 * f0);
      worst = std::max(worst, res.value);
    }
  }
  return 1.0 / worst;
}

ShadEstimate shad_estimate_linf(const WindowedLinf& w, int z_samples, std::uint64_t rng_seed) {
  const LinOp& op = w.base_op;
  if (!op.is_dense()) fail(ErrorCode::KindMismatch, "Shad estimate needs a dense operator");
  if (w.N < 1) fail(ErrorCode::InvalidArgument, "window N must be >= 1");
  const int d = op.dim();
  const NormTag tag = op.tag();
  const int steps = 2 * w.N;
  OrbitWindow solver(op.matrix(), tag);
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> g;
  auto random_unit = [&]() {
    CVector u(d);
    for (int i = 0; i < d; ++i) u(i) = g(rng);
    return CVector(u / norm(u, tag));
  };
  const auto eig = dense_eig(op.matrix(), tag);

  ShadEstimate out;
  out.floor = 1.0 / (1.0 + operator_norm(op));
  for (int k = 0; k < z_samples; ++k) {
    const int cycle = k / 4;
    std::vector<CVector> z(static_cast<std::size_t>(steps));
    switch (k % 4) {
      case 0:
      case 2: {
        CVector u = cycle < d ? CVector(CVector::Unit(d, cycle)) : random_unit();
        for (int n = 0; n < steps; ++n) z[n] = (k % 4 == 2 && n % 2) ? CVector(-u) : u;
        break;
      }
      case 1: {
        const auto& p = eig[static_cast<std::size_t>(cycle % d)];
        const double theta = std::arg(p.value);
        for (int n = 0; n < steps; ++n) z[n] = std::polar(1.0, theta * (n - w.N)) * p.vector.coords;
        break;
      }
      default:
        for (int n = 0; n < steps; ++n) z[n] = random_unit();
        break;
    }
    auto sol = solver.solve(z, 1e-10);
    out.sample_min.push_back(sol.value);
    out.estimate = std::max(out.estimate, sol.lower_bound);
  }
  if (z_samples > 0 && out.estimate < out.floor - 1e-9)
    fail(ErrorCode::Internal, "Shad estimate fell below 1/(1+‖L‖)");
  return out;
}

ScanTable shadowing_robustness_scan(const LinOp& op, const std::vector<double>& radii, int trials,
                                    std::uint64_t rng_seed, int window_N, int z_samples) {
  if (!op.is_dense()) fail(ErrorCode::KindMismatch, "robustness scan needs a dense operator");
  const ShadBounds b = shad_bounds(op, spectral_split(op));
  if (!std::isfinite(b.upper)) fail(ErrorCode::NotCertified, "original operator has no finite Shad bound");
  ScanTable t;
  t.original_upper = b.upper;
  t.certified_margin = 1.0 / (2.0 * b.upper);
  const int d = op.dim();
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double r : radii) {
    for (int trial = 0; trial < trials; ++trial) {
      CMatrix E(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) E(i, j) = u(rng);
      const double en = matrix_norm(E, op.tag());
      if (en > 0.0) E *= r / en;
      ScanRow row;
      row.radius = r;
      row.trial = trial;
      try {
        LinOp P = LinOp::dense(op.matrix() + E, op.tag());
        auto est = shad_estimate_linf({P, window_N}, z_samples, rng_seed + static_cast<std::uint64_t>(trial));
        row.estimate = est.estimate;
        row.pass = std::isfinite(est.estimate) && est.estimate <= 2.0 * b.upper;
      } catch (const Error&) {
        row.estimate = kInf;
        row.pass = false;
      }
      t.rows.push_back(row);
    }
  }
  return t;
}

std::string scan_csv(const ScanTable& t) {
  std::ostringstream os;
  os.precision(17);
  os << "radius,trial,pass,estimate\n";
  for (const auto& r : t.rows) os << r.radius << ',' << r.trial << ',' << (r.pass ? 1 : 0) << ',' << r.estimate << '\n';
  return os.str();
}

}  // namespace lindyn
