#pragma once

#include <Eigen/Dense>

#include <functional>

namespace lindyn {

// Objective returning f(x) and writing one subgradient into *g.
using ConvexObjective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* g)>;

struct ConvexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double lower_bound = 0.0;  // certified, assuming a minimizer lies in the start ball
  int iterations = 0;
  bool converged = false;
};

// Central-cut ellipsoid method started from the ball B(center, radius). Stops
// once best value minus the certified lower bound is <= max(abs_tol,
// rel_tol·best). In one dimension this reduces to bisection on the subgradient
// sign. If rounding destroys the ellipsoid's positive definiteness the run
// stops unconverged.
ConvexResult ellipsoid_minimize(const ConvexObjective& f, const Eigen::VectorXd& center, double radius, double abs_tol,
                                int max_iter = 200000, double rel_tol = 0.0);

}  // namespace lindyn
