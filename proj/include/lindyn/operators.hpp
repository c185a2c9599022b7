#pragma once

#include <memory>
#include <vector>

#include "lindyn/core_linalg.hpp"

namespace lindyn {

// Piecewise-constant weight: w(k) = table[k - lo] on [lo, lo + table.size()),
// `left` below that range and `right` above it.
struct PiecewiseWeight {
  long lo = 1;
  std::vector<Scalar> table;
  Scalar left = 1.0;
  Scalar right = 1.0;

  // a for k <= 0, b for k > 0.
  static PiecewiseWeight by_sign(Scalar a, Scalar b);
  static PiecewiseWeight constant(Scalar c) { return by_sign(c, c); }
  static PiecewiseWeight from_table(const std::map<long, Scalar>& entries, Scalar fallback);

  long hi() const { return lo + static_cast<long>(table.size()); }
  Scalar operator()(long k) const;
  double sup_abs() const;
  double inf_abs() const;
  // Removes table entries at either end that equal the adjacent tail value.
  void trim();
};

// Every sequence operator here is a weighted shift (L xi)_k = w(k) xi_{k+offset}.
struct WeightedShift {
  long offset = 0;
  PiecewiseWeight weight;

  WeightedShift then(const WeightedShift& inner) const;  // this ∘ inner
  WeightedShift inverse() const;
  SparseBiSeq apply(const SparseBiSeq& v) const;
  // Coefficient of L^n e_j, i.e. w_n(j - n*offset), and the target index.
  Scalar power_weight(long n, long k) const;
  // sup |w_n(k)| over k in [kmin, kmax]; bounds may be +/- infinite.
  double power_sup(long n, double kmin, double kmax) const;
};

enum class OpKind { Dense, Diagonal, Shift, BackwardScaled, Composition };

const char* op_kind_name(OpKind k);

class LinOp {
 public:
  static LinOp dense(const CMatrix& m, NormTag tag);
  static LinOp diagonal(const PiecewiseWeight& w, NormTag tag);
  static LinOp shift(long offset, NormTag tag);
  static LinOp backward_scaled(Scalar factor, NormTag tag);
  // Factors in composition order: compose({R, W}) is R∘W, W applied first.
  static LinOp compose(const std::vector<LinOp>& factors);
  static LinOp identity(int d, NormTag tag) { return dense(CMatrix::Identity(d, d), tag); }

  OpKind kind() const;
  NormTag tag() const;
  bool invertible() const;
  bool is_dense() const;
  int dim() const;  // dense dimension, 0 for sequence operators
  const CMatrix& matrix() const;
  const CMatrix& inverse_matrix() const;  // dense and invertible only
  const WeightedShift& shift_form() const;
  const std::vector<LinOp>& factors() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  friend LinOp inverse(const LinOp& op);
};

struct OperatorReport {
  double op_norm = 0.0;
  std::optional<double> inv_norm;
  double spectral_radius_estimate = 0.0;
  int gelfand_iterations = 0;
};

DenseVector apply(const LinOp& op, const DenseVector& v);
SparseBiSeq apply(const LinOp& op, const SparseBiSeq& v);
DenseVector apply_power(const LinOp& op, long n, const DenseVector& v);
SparseBiSeq apply_power(const LinOp& op, long n, const SparseBiSeq& v);

double operator_norm(const LinOp& op);
LinOp inverse(const LinOp& op);
CMatrix matrix_power(const CMatrix& m, long n);

struct SpectralRadius {
  double value = 0.0;
  int iterations = 0;
};
SpectralRadius spectral_radius(const LinOp& op, int iters = 64);
// inf over n <= iters of a(n)^(1/n), stopping when the running infimum stalls.
SpectralRadius gelfand(const std::function<double(int)>& power_norm, int iters);

OperatorReport operator_report(const LinOp& op, int iters = 64);

}  // namespace lindyn
