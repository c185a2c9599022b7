#include "lindyn/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lindyn/error.hpp"

namespace lindyn {

namespace {

ConvexResult bisect(const ConvexObjective& f, double center, double radius, double abs_tol, int max_iter,
                    double rel_tol) {
  double lo = center - radius, hi = center + radius;
  Eigen::VectorXd x(1), g(1);
  ConvexResult out;
  out.value = std::numeric_limits<double>::infinity();
  out.lower_bound = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    x(0) = 0.5 * (lo + hi);
    g.setZero();
    const double v = f(x, &g);
    out.iterations = it + 1;
    if (v < out.value) {
      out.value = v;
      out.x = x;
    }
    out.lower_bound = std::max(out.lower_bound, v - std::abs(g(0)) * 0.5 * (hi - lo));
    if (out.value - out.lower_bound <= std::max(abs_tol, rel_tol * std::abs(out.value)) || g(0) == 0.0) {
      if (g(0) == 0.0) out.lower_bound = v;
      out.converged = true;
      return out;
    }
    if (g(0) > 0.0)
      hi = x(0);
    else
      lo = x(0);
  }
  return out;
}

}  // namespace

ConvexResult ellipsoid_minimize(const ConvexObjective& f, const Eigen::VectorXd& center, double radius, double abs_tol,
                                int max_iter, double rel_tol) {
  if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorCode::InvalidArgument, "ellipsoid radius must be positive");
  const Eigen::Index n = center.size();
  if (n == 0) {
    Eigen::VectorXd g;
    ConvexResult out;
    out.x = center;
    out.value = out.lower_bound = f(center, &g);
    out.converged = true;
    return out;
  }
  if (n == 1) return bisect(f, center(0), radius, abs_tol, max_iter, rel_tol);

  const double dn = static_cast<double>(n);
  Eigen::VectorXd x = center;
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) * radius * radius;
  Eigen::VectorXd g(n);
  ConvexResult out;
  out.x = center;
  out.value = std::numeric_limits<double>::infinity();
  out.lower_bound = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    g.setZero();
    const double v = f(x, &g);
    out.iterations = it + 1;
    if (v < out.value) {
      out.value = v;
      out.x = x;
    }
    const Eigen::VectorXd Pg = P * g;
    const double gPg = g.dot(Pg);
    if (!(gPg > 0.0)) {
      if (g.isZero(0.0)) {
        // Zero subgradient: x is a minimizer.
        out.lower_bound = v;
        out.value = v;
        out.x = x;
        out.converged = true;
      }
      return out;
    }
    const double s = std::sqrt(gPg);
    out.lower_bound = std::max(out.lower_bound, v - s);
    if (out.value - out.lower_bound <= std::max(abs_tol, rel_tol * std::abs(out.value))) {
      out.converged = true;
      return out;
    }
    const Eigen::VectorXd b = Pg / s;
    x -= b / (dn + 1.0);
    P = (dn * dn / (dn * dn - 1.0)) * (P - (2.0 / (dn + 1.0)) * b * b.transpose());
    P = 0.5 * (P + P.transpose());
  }
  return out;
}

}  // namespace lindyn
