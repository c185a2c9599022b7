#pragma once

#include <vector>

#include "lindyn/convex.hpp"
#include "lindyn/core_linalg.hpp"

namespace lindyn {

struct WindowSolution {
  std::vector<CVector> y;  // y_0 .. y_{M-1}
  double value = 0.0;      // max_n ‖y_n‖
  double lower_bound = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Solutions of y_{n+1} = L y_n + z_n on a finite window form an affine family
// in d free parameters. The family is written in eigen-coordinates with every
// homogeneous mode anchored where it is largest (left end for |λ| <= 1, right
// end otherwise), which keeps it well conditioned for long windows. The
// minimal sup-norm member is found by the ellipsoid method.
class OrbitWindow {
 public:
  OrbitWindow(const CMatrix& L, NormTag tag);
  WindowSolution solve(const std::vector<CVector>& z, double rel_tol = 1e-10) const;
  bool eigen_mode() const { return eigen_mode_; }

 private:
  CMatrix L_;
  NormTag tag_;
  int d_;
  bool eigen_mode_ = false;
  CMatrix V_, Vi_;
  CVector lambda_;
};

// Subgradient of the norm at r: a dual-ball vector u with Re(u* r) = ‖r‖.
CVector norm_subgradient(const CVector& r, NormTag tag);

}  // namespace lindyn
