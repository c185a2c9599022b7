#include "lindyn/hypercyclic.hpp"

#include <algorithm>

namespace lindyn {

LinOp rolewicz(double factor) {
  if (!(factor > 1.0) || !std::isfinite(factor)) fail(ErrorCode::BadFactor, "factor must exceed 1");
  return LinOp::backward_scaled(factor, NormTag::L2);
}

CriterionData rolewicz_criterion(double factor) {
  CriterionData cd{rolewicz(factor), factor, {}, {}};
  cd.right_inverse = [factor](long n, const SparseBiSeq& y) {
    SparseBiSeq out(y.tag());
    const double s = std::pow(factor, -static_cast<double>(n));
    for (const auto& [k, v] : y.entries()) out.set(k + n, s * v);
    return out;
  };
  cd.truncate = [](const SparseBiSeq& y, double tol) {
    // Drop the smallest entries while the discarded l2 mass stays within tol.
    std::vector<std::pair<double, long>> mags;
    for (const auto& [k, v] : y.entries()) mags.push_back({std::abs(v), k});
    std::sort(mags.begin(), mags.end());
    SparseBiSeq out = y;
    double dropped = 0.0;
    for (const auto& [a, k] : mags) {
      if (std::hypot(dropped, a) > tol) break;
      dropped = std::hypot(dropped, a);
      out.set(k, 0.0);
    }
    return out;
  };
  return cd;
}

WitnessResult criterion_witness(const CriterionData& cd, const std::vector<SparseBiSeq>& targets, double eps,
                                long step_budget) {
  if (!(eps > 0.0)) fail(ErrorCode::InvalidArgument, "eps must be positive");
  if (targets.empty()) fail(ErrorCode::InvalidArgument, "no targets");
  if (!(cd.decay > 1.0)) fail(ErrorCode::BadFactor, "right inverses must decay");
  std::vector<SparseBiSeq> yhat;
  long width = 0;
  double M = 0.0, smallest = kInf;
  for (const auto& y : targets) {
    if (y.tag() != cd.op.tag()) fail(ErrorCode::KindMismatch, "norm tags differ");
    SparseBiSeq t = cd.truncate(y, eps / 4.0);
    if (!t.empty()) {
      if (t.min_index() < 0) fail(ErrorCode::InvalidArgument, "targets must be supported on k >= 0");
      width = std::max(width, t.max_index() + 1);
      for (const auto& [k, v] : t.entries()) smallest = std::min(smallest, std::abs(v));
    }
    M = std::max(M, vec_norm(t));
    yhat.push_back(std::move(t));
  }
  const double m = static_cast<double>(targets.size());
  long decay_steps = 0;
  if (M > 0.0) decay_steps = std::max(0L, static_cast<long>(std::ceil(std::log(2.0 * m * M / eps) / std::log(cd.decay))));
  WitnessResult out;
  out.gap = width + decay_steps;
  if (out.gap < 1) out.gap = 1;
  const long last = out.gap * static_cast<long>(targets.size());
  if (last > step_budget)
    fail(ErrorCode::CannotSeparate, "schedule needs " + std::to_string(last) + " steps, budget is " + std::to_string(step_budget));
  if (std::isfinite(smallest) && smallest * std::pow(cd.decay, -static_cast<double>(last)) < 1e-290)
    fail(ErrorCode::CannotSeparate, "seed entries would underflow");

  out.seed = SparseBiSeq(cd.op.tag());
  for (std::size_t j = 0; j < yhat.size(); ++j) {
    const long n = out.gap * static_cast<long>(j + 1);
    out.visit_times.push_back(n);
    out.seed += cd.right_inverse(n, yhat[j]);
  }
  for (std::size_t j = 0; j < targets.size(); ++j) {
    SparseBiSeq orbit = apply_power(cd.op, out.visit_times[j], out.seed);
    const double err = vec_norm(orbit - targets[j]);
    out.visit_errors.push_back(err);
    if (!(err <= eps)) fail(ErrorCode::CannotSeparate, "visit " + std::to_string(j) + " missed by " + std::to_string(err));
  }
  return out;
}

const char* modulus_kind_name(ModulusKind k) {
  switch (k) {
    case ModulusKind::Decaying: return "Decaying";
    case ModulusKind::Constant: return "Constant";
    case ModulusKind::Growing: return "Growing";
  }
  return "?";
}

AdjointCertificate adjoint_eigen_obstruction(const LinOp& op) {
  if (!op.is_dense()) fail(ErrorCode::KindMismatch, "adjoint obstruction needs a dense operator");
  const CMatrix adj = op.matrix().adjoint();
  const auto eig = dense_eig(adj, NormTag::L2);
  const EigenPair& p = eig.back();
  AdjointCertificate c;
  c.eigenvalue = p.value;
  c.functional = DenseVector(p.vector.coords, op.tag());
  c.residual = norm(adj * p.vector.coords - p.value * p.vector.coords, NormTag::L2);
  const double mod = std::abs(p.value);
  c.kind = std::abs(mod - 1.0) <= 1e-12 ? ModulusKind::Constant : (mod < 1.0 ? ModulusKind::Decaying : ModulusKind::Growing);

  // Replay on x = φ itself (φ* φ = 1): |φ*(L^n x)| must equal |λ|^n.
  CVector x = p.vector.coords;
  const Scalar phi0 = p.vector.coords.dot(x);
  bool ok = std::abs(phi0) > 0.5;
  double prev = std::abs(phi0);
  for (int n = 1; n <= 16 && ok; ++n) {
    x = op.matrix() * x;
    const double v = std::abs(p.vector.coords.dot(x));
    const double expect = std::pow(mod, n) * std::abs(phi0);
    ok = std::abs(v - expect) <= 1e-8 * std::max(1.0, expect);
    switch (c.kind) {
      case ModulusKind::Decaying: ok = ok && v <= prev * (1.0 + 1e-12); break;
      case ModulusKind::Growing: ok = ok && v >= prev * (1.0 - 1e-12); break;
      case ModulusKind::Constant: break;
    }
    prev = v;
  }
  c.replay_ok = ok;
  return c;
}

}  // namespace lindyn
