#pragma once

#include "lindyn/operators.hpp"

namespace lindyn {

// (L xi)_k = factor·xi_{k+1} for k >= 0, under the l2 norm.
LinOp rolewicz(double factor);

struct CriterionData {
  LinOp op;
  double decay = 2.0;  // ‖S_n y‖ = decay^{-n} ‖y‖
  std::function<SparseBiSeq(long n, const SparseBiSeq& y)> right_inverse;
  // Finitely supported approximation of y within tol.
  std::function<SparseBiSeq(const SparseBiSeq& y, double tol)> truncate;
};

CriterionData rolewicz_criterion(double factor);

struct WitnessResult {
  SparseBiSeq seed;
  std::vector<long> visit_times;
  std::vector<double> visit_errors;
  long gap = 0;
};

WitnessResult criterion_witness(const CriterionData& cd, const std::vector<SparseBiSeq>& targets, double eps,
                                long step_budget = 1000);

enum class ModulusKind { Decaying, Constant, Growing };
const char* modulus_kind_name(ModulusKind k);

// An eigenpair of L* is a functional φ with φ(L^n x) = conj(λ)^n φ(x); the
// scalar orbit has monotone or constant modulus and so is never dense in C.
struct AdjointCertificate {
  Scalar eigenvalue;      // eigenvalue of the adjoint
  DenseVector functional; // φ, acting as x ↦ φ* x
  ModulusKind kind = ModulusKind::Constant;
  double residual = 0.0;
  bool replay_ok = false;
};

AdjointCertificate adjoint_eigen_obstruction(const LinOp& op);

}  // namespace lindyn
