#pragma once

#include <variant>

#include "lindyn/operators.hpp"

namespace lindyn {

enum class SplitKind { Spectral, Coordinate };

// X = S ⊕ U. Dense splittings carry explicit projections; sequence splittings
// are half-lines S = {k <= cutoff}, with no cutoff meaning S is everything.
struct Splitting {
  SplitKind kind = SplitKind::Coordinate;
  NormTag tag = NormTag::L2;
  int dim = 0;
  CMatrix P_S, P_U;
  std::vector<int> s_indices;  // dense coordinate splits only
  std::optional<long> cutoff;
  double proj_S_norm = 1.0;
  double proj_U_norm = 1.0;
  double gap = 0.0;  // spectral splits: min ||lambda| - 1|

  bool dense() const { return dim > 0; }
  bool in_S(long k) const { return !cutoff || k <= *cutoff; }
  int dim_S() const;
  int dim_U() const;
};

Splitting spectral_split(const LinOp& op, double circle_gap_tol = 1e-6);
Splitting coordinate_split(long cutoff, NormTag tag);
Splitting coordinate_split_all(NormTag tag);
Splitting coordinate_split_dense(int d, const std::vector<int>& s_indices, NormTag tag);
Splitting coordinate_split_all_dense(int d, NormTag tag);
// Throws INVALID_SPLITTING unless P_S + P_U = I, P² = P and P_S P_U = 0.
void validate_splitting(const Splitting& split);

DenseVector project_S(const Splitting& split, const DenseVector& v);
DenseVector project_U(const Splitting& split, const DenseVector& v);
SparseBiSeq project_S(const Splitting& split, const SparseBiSeq& v);
SparseBiSeq project_U(const Splitting& split, const SparseBiSeq& v);

using AnyVector = std::variant<DenseVector, SparseBiSeq>;
double vec_norm(const AnyVector& v);

enum class HypClass { Hyperbolic, GeneralizedHyperbolic, Neither, Undetermined };
const char* hyp_class_name(HypClass c);

struct Invariance {
  bool LS_in_S = false;
  bool Linv_U_in_U = false;
  bool S_in_LS = false;
  bool LU_in_U = false;
};

struct HyperbolicityReport {
  HypClass cls = HypClass::Undetermined;
  double r_S = 0.0;
  double r_U_inv = 0.0;
  Invariance invariance;
  std::optional<AnyVector> witness;
  double circle_gap = 0.0;
  std::string note;
};

constexpr double kUndeterminedBand = 1e-6;

HyperbolicityReport classify(const LinOp& op, const Splitting& split, int horizon = 64);
HyperbolicityReport perseguido_check(const LinOp& W, const LinOp& R, const Splitting& split);

struct NormBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Norms of L^n on S and of L^{-n} on U, generated for n = 0, 1, 2, ...
// Exact (lower == upper) for sequence splittings, coordinate splittings and
// any dense L2 splitting; otherwise the upper value is a certified bound and
// the lower value comes from sampled directions of the subspace.
class RestrictedPowers {
 public:
  enum class Side { S, U };
  RestrictedPowers(const LinOp& op, const Splitting& split, Side side);
  NormBounds next();
  int dim() const { return dim_; }
  bool exact() const { return exact_; }

 private:
  LinOp op_;
  Splitting split_;
  Side side_;
  int n_ = 0;
  int dim_ = 0;
  bool exact_ = true;
  CMatrix Q_, M_, Mn_, samples_;
  std::optional<WeightedShift> ws_;
};

// Sums a_{k0} + a_{k0+1} + ... for a submultiplicative sequence. Once some a_p
// drops below 1 the tail from K is bounded by (a_K + ... + a_{K+p-1})/(1 - a_p);
// summation stops when that bound is below tail_tol. Returns +inf if no decay
// is seen within `cap` terms.
struct SeriesSum {
  double value = 0.0;
  double tail_bound = kInf;
  int terms = 0;
  bool finite() const { return std::isfinite(value); }
};
SeriesSum sum_norm_series(const std::function<double(int)>& a, int k0, double tail_tol = 1e-12, int cap = 10000);

// Restricted matrices in S or U coordinates (dense only). Q has orthonormal
// columns spanning the subspace; M represents L (on S) or L^{-1} (on U).
struct RestrictedMatrix {
  CMatrix Q;
  CMatrix M;
};
RestrictedMatrix restrict_dense(const LinOp& op, const Splitting& split, RestrictedPowers::Side side);

std::optional<CVector> subspace_intersection(const CMatrix& A, const CMatrix& B, double rel_tol = 1e-9);

}  // namespace lindyn
