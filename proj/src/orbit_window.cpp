#include "lindyn/orbit_window.hpp"

#include <cmath>

#include "lindyn/error.hpp"

namespace lindyn {

CVector norm_subgradient(const CVector& r, NormTag tag) {
  CVector u = CVector::Zero(r.size());
  if (r.size() == 0) return u;
  switch (tag) {
    case NormTag::L2: {
      double n = r.norm();
      if (n > 0.0) u = r / n;
      break;
    }
    case NormTag::LInf: {
      Eigen::Index i = 0;
      r.cwiseAbs().maxCoeff(&i);
      double a = std::abs(r(i));
      if (a > 0.0) u(i) = r(i) / a;
      break;
    }
    case NormTag::L1:
      for (Eigen::Index i = 0; i < r.size(); ++i) {
        double a = std::abs(r(i));
        if (a > 0.0) u(i) = r(i) / a;
      }
      break;
  }
  return u;
}

OrbitWindow::OrbitWindow(const CMatrix& L, NormTag tag) : L_(L), tag_(tag), d_(static_cast<int>(L.rows())) {
  check_square(L, "orbit window");
  Eigen::ComplexEigenSolver<CMatrix> es(L, true);
  if (es.info() != Eigen::Success) return;
  Eigen::FullPivLU<CMatrix> lu(es.eigenvectors());
  if (!lu.isInvertible()) return;
  CMatrix Vi = lu.inverse();
  const double cond = matrix_norm(es.eigenvectors(), NormTag::L2) * matrix_norm(Vi, NormTag::L2);
  if (!(cond <= 1e8)) return;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) == Scalar(0.0)) return;
  V_ = es.eigenvectors();
  Vi_ = Vi;
  lambda_ = es.eigenvalues();
  eigen_mode_ = true;
}

WindowSolution OrbitWindow::solve(const std::vector<CVector>& z, double rel_tol) const {
  const int M = static_cast<int>(z.size()) + 1;
  const int d = d_;
  for (const auto& zn : z)
    if (zn.size() != d) fail(ErrorCode::KindMismatch, "defect dimension mismatch");

  // y_n = base[n] + A[n] c, c in C^d.
  std::vector<CVector> base(M, CVector::Zero(d));
  std::vector<CMatrix> A(M);
  double kappa = tag_ == NormTag::LInf ? std::sqrt(static_cast<double>(d)) : 1.0;
  double radius_scale = 1.1 * kappa;
  if (eigen_mode_) {
    std::vector<CVector> zt(z.size());
    for (std::size_t n = 0; n < z.size(); ++n) zt[n] = Vi_ * z[n];
    std::vector<CVector> pt(M, CVector::Zero(d));
    std::vector<CVector> h(M, CVector::Zero(d));
    for (int i = 0; i < d; ++i) {
      const Scalar lam = lambda_(i);
      if (std::abs(lam) <= 1.0) {
        pt[0](i) = 0.0;
        h[0](i) = 1.0;
        for (int n = 0; n + 1 < M; ++n) {
          pt[n + 1](i) = lam * pt[n](i) + zt[n](i);
          h[n + 1](i) = lam * h[n](i);
        }
      } else {
        pt[M - 1](i) = 0.0;
        h[M - 1](i) = 1.0;
        for (int n = M - 2; n >= 0; --n) {
          pt[n](i) = (pt[n + 1](i) - zt[n](i)) / lam;
          h[n](i) = h[n + 1](i) / lam;
        }
      }
    }
    for (int n = 0; n < M; ++n) {
      base[n] = V_ * pt[n];
      A[n] = V_ * h[n].asDiagonal();
    }
    radius_scale *= std::sqrt(static_cast<double>(d)) * matrix_norm(Vi_, NormTag::L2);
  } else {
    CMatrix P = CMatrix::Identity(d, d);
    for (int n = 0; n < M; ++n) {
      if (n > 0) {
        base[n] = L_ * base[n - 1] + z[n - 1];
        P = L_ * P;
      }
      A[n] = P;
    }
  }

  auto evaluate = [&](const CVector& c, int* argmax) {
    double best = -1.0;
    for (int n = 0; n < M; ++n) {
      double v = norm(base[n] + A[n] * c, tag_);
      if (v > best) {
        best = v;
        *argmax = n;
      }
    }
    return best;
  };

  WindowSolution out;
  int am = 0;
  const double f0 = evaluate(CVector::Zero(d), &am);
  auto finish = [&](const CVector& c) {
    out.y.resize(M);
    for (int n = 0; n < M; ++n) out.y[n] = base[n] + A[n] * c;
    int a = 0;
    out.value = evaluate(c, &a);
  };
  if (f0 == 0.0) {
    finish(CVector::Zero(d));
    out.converged = true;
    return out;
  }

  ConvexObjective f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    CVector c(d);
    for (int i = 0; i < d; ++i) c(i) = Scalar(x(i), x(d + i));
    int n = 0;
    const double v = evaluate(c, &n);
    if (g) {
      CVector r = base[n] + A[n] * c;
      CVector w = A[n].adjoint() * norm_subgradient(r, tag_);
      g->resize(2 * d);
      for (int i = 0; i < d; ++i) {
        (*g)(i) = w(i).real();
        (*g)(d + i) = w(i).imag();
      }
    }
    return v;
  };
  const double radius = radius_scale * f0;
  auto res = ellipsoid_minimize(f, Eigen::VectorXd::Zero(2 * d), radius, rel_tol * f0);
  CVector c(d);
  for (int i = 0; i < d; ++i) c(i) = Scalar(res.x(i), res.x(d + i));
  finish(c);
  out.lower_bound = std::max(0.0, res.lower_bound);
  out.converged = res.converged;
  out.iterations = res.iterations;
  return out;
}

}  // namespace lindyn
