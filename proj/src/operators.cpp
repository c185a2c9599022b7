#include "lindyn/operators.hpp"

#include <algorithm>

namespace lindyn {

PiecewiseWeight PiecewiseWeight::by_sign(Scalar a, Scalar b) {
  PiecewiseWeight w;
  w.lo = 1;
  w.left = a;
  w.right = b;
  return w;
}

PiecewiseWeight PiecewiseWeight::from_table(const std::map<long, Scalar>& entries, Scalar fallback) {
  PiecewiseWeight w;
  w.left = w.right = fallback;
  if (entries.empty()) return w;
  w.lo = entries.begin()->first;
  w.table.assign(static_cast<std::size_t>(entries.rbegin()->first - w.lo + 1), fallback);
  for (const auto& [k, v] : entries) w.table[static_cast<std::size_t>(k - w.lo)] = v;
  w.trim();
  return w;
}

Scalar PiecewiseWeight::operator()(long k) const {
  if (k < lo) return left;
  if (k >= hi()) return right;
  return table[static_cast<std::size_t>(k - lo)];
}

double PiecewiseWeight::sup_abs() const {
  double s = std::max(std::abs(left), std::abs(right));
  for (const auto& v : table) s = std::max(s, std::abs(v));
  return s;
}

double PiecewiseWeight::inf_abs() const {
  double s = std::min(std::abs(left), std::abs(right));
  for (const auto& v : table) s = std::min(s, std::abs(v));
  return s;
}

void PiecewiseWeight::trim() {
  while (!table.empty() && table.back() == right) table.pop_back();
  std::size_t drop = 0;
  while (drop < table.size() && table[drop] == left) ++drop;
  if (drop > 0) {
    table.erase(table.begin(), table.begin() + static_cast<long>(drop));
    lo += static_cast<long>(drop);
  }
}

WeightedShift WeightedShift::then(const WeightedShift& inner) const {
  // (A(B xi))_k = a(k) b(k + sA) xi_{k + sA + sB}
  WeightedShift out;
  out.offset = offset + inner.offset;
  const long from = std::min(weight.lo, inner.weight.lo - offset);
  const long to = std::max(weight.hi(), inner.weight.hi() - offset);
  out.weight.lo = from;
  out.weight.left = weight.left * inner.weight.left;
  out.weight.right = weight.right * inner.weight.right;
  out.weight.table.reserve(static_cast<std::size_t>(std::max(0L, to - from)));
  for (long k = from; k < to; ++k) out.weight.table.push_back(weight(k) * inner.weight(k + offset));
  out.weight.trim();
  return out;
}

WeightedShift WeightedShift::inverse() const {
  if (!(weight.inf_abs() > 0.0)) fail(ErrorCode::NotInvertible, "weight vanishes");
  WeightedShift out;
  out.offset = -offset;
  out.weight.lo = weight.lo + offset;
  out.weight.left = 1.0 / weight.left;
  out.weight.right = 1.0 / weight.right;
  for (const auto& v : weight.table) out.weight.table.push_back(1.0 / v);
  return out;
}

SparseBiSeq WeightedShift::apply(const SparseBiSeq& v) const {
  // L e_j = w(j - s) e_{j - s}
  SparseBiSeq out(v.tag());
  for (const auto& [j, x] : v.entries()) out.set(j - offset, weight(j - offset) * x);
  return out;
}

Scalar WeightedShift::power_weight(long n, long k) const {
  Scalar p = 1.0;
  for (long j = 0; j < n; ++j) p *= weight(k + j * offset);
  return p;
}

double WeightedShift::power_sup(long n, double kmin, double kmax) const {
  if (n == 0) return kmin <= kmax ? 1.0 : 0.0;
  const long reach = (n - 1) * std::abs(offset) + 1;
  const long rmin = weight.lo - reach;
  const long rmax = weight.hi() + reach;
  double s = 0.0;
  if (kmin < static_cast<double>(rmin)) s = std::max(s, std::pow(std::abs(weight.left), static_cast<double>(n)));
  if (kmax > static_cast<double>(rmax)) s = std::max(s, std::pow(std::abs(weight.right), static_cast<double>(n)));
  const long a = static_cast<long>(std::max<double>(static_cast<double>(rmin), kmin));
  const long b = static_cast<long>(std::min<double>(static_cast<double>(rmax), kmax));
  for (long k = a; k <= b; ++k) s = std::max(s, std::abs(power_weight(n, k)));
  return s;
}

const char* op_kind_name(OpKind k) {
  switch (k) {
    case OpKind::Dense: return "dense";
    case OpKind::Diagonal: return "diag";
    case OpKind::Shift: return "shift";
    case OpKind::BackwardScaled: return "backward_scaled";
    case OpKind::Composition: return "compose";
  }
  return "?";
}

struct LinOp::Impl {
  OpKind kind = OpKind::Dense;
  NormTag tag = NormTag::L2;
  bool invertible = false;
  int dim = 0;
  CMatrix matrix;
  CMatrix inverse_matrix;
  WeightedShift ws;
  std::vector<LinOp> factors;
};

namespace {

bool dense_invertible(const CMatrix& m, CMatrix* inv) {
  Eigen::FullPivLU<CMatrix> lu(m);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) return false;
  CMatrix mi = lu.inverse();
  double cond = matrix_norm(m, NormTag::L1) * matrix_norm(mi, NormTag::L1);
  if (!std::isfinite(cond) || cond > 1e14) return false;
  *inv = std::move(mi);
  return true;
}

}  // namespace

LinOp LinOp::dense(const CMatrix& m, NormTag tag) {
  check_square(m, "dense operator");
  auto impl = std::make_shared<Impl>();
  impl->kind = OpKind::Dense;
  impl->tag = tag;
  impl->dim = static_cast<int>(m.rows());
  impl->matrix = m;
  impl->invertible = dense_invertible(m, &impl->inverse_matrix);
  LinOp op;
  op.impl_ = impl;
  return op;
}

LinOp LinOp::diagonal(const PiecewiseWeight& w, NormTag tag) {
  auto impl = std::make_shared<Impl>();
  impl->kind = OpKind::Diagonal;
  impl->tag = tag;
  impl->ws.offset = 0;
  impl->ws.weight = w;
  if (!(std::isfinite(w.sup_abs()))) fail(ErrorCode::InvalidArgument, "unbounded weight");
  impl->invertible = w.inf_abs() > 0.0;
  LinOp op;
  op.impl_ = impl;
  return op;
}

LinOp LinOp::shift(long offset, NormTag tag) {
  auto impl = std::make_shared<Impl>();
  impl->kind = OpKind::Shift;
  impl->tag = tag;
  impl->ws.offset = offset;
  impl->ws.weight = PiecewiseWeight::constant(1.0);
  impl->invertible = true;
  LinOp op;
  op.impl_ = impl;
  return op;
}

LinOp LinOp::backward_scaled(Scalar factor, NormTag tag) {
  auto impl = std::make_shared<Impl>();
  impl->kind = OpKind::BackwardScaled;
  impl->tag = tag;
  impl->ws.offset = 1;
  impl->ws.weight.lo = 0;
  impl->ws.weight.left = 0.0;
  impl->ws.weight.right = factor;
  impl->invertible = false;
  LinOp op;
  op.impl_ = impl;
  return op;
}

LinOp LinOp::compose(const std::vector<LinOp>& factors) {
  if (factors.empty()) fail(ErrorCode::InvalidArgument, "empty composition");
  auto impl = std::make_shared<Impl>();
  impl->kind = OpKind::Composition;
  impl->tag = factors.front().tag();
  impl->factors = factors;
  const bool dense = factors.front().is_dense();
  impl->invertible = true;
  for (const auto& f : factors) {
    if (f.tag() != impl->tag) fail(ErrorCode::KindMismatch, "composition factors carry different norms");
    if (f.is_dense() != dense) fail(ErrorCode::KindMismatch, "composition mixes dense and sequence factors");
    if (dense && f.dim() != factors.front().dim()) fail(ErrorCode::KindMismatch, "composition dimensions differ");
    impl->invertible = impl->invertible && f.invertible();
  }
  if (dense) {
    impl->dim = factors.front().dim();
    impl->matrix = CMatrix::Identity(impl->dim, impl->dim);
    for (const auto& f : factors) impl->matrix = impl->matrix * f.matrix();
    if (impl->invertible) {
      impl->inverse_matrix = CMatrix::Identity(impl->dim, impl->dim);
      for (auto it = factors.rbegin(); it != factors.rend(); ++it)
        impl->inverse_matrix = impl->inverse_matrix * inverse(*it).matrix();
    }
  } else {
    impl->ws = factors.back().shift_form();
    for (auto it = factors.rbegin() + 1; it != factors.rend(); ++it) impl->ws = it->shift_form().then(impl->ws);
  }
  LinOp op;
  op.impl_ = impl;
  return op;
}

OpKind LinOp::kind() const { return impl_->kind; }
NormTag LinOp::tag() const { return impl_->tag; }
bool LinOp::invertible() const { return impl_->invertible; }
bool LinOp::is_dense() const { return impl_->dim > 0; }
int LinOp::dim() const { return impl_->dim; }

const CMatrix& LinOp::matrix() const {
  if (!is_dense()) fail(ErrorCode::KindMismatch, "sequence operator has no matrix");
  return impl_->matrix;
}

const CMatrix& LinOp::inverse_matrix() const {
  if (!is_dense() || !invertible()) fail(ErrorCode::NotInvertible, "no dense inverse");
  return impl_->inverse_matrix;
}

const WeightedShift& LinOp::shift_form() const {
  if (is_dense()) fail(ErrorCode::KindMismatch, "dense operator has no shift form");
  return impl_->ws;
}

const std::vector<LinOp>& LinOp::factors() const { return impl_->factors; }

static void check_vector(const LinOp& op, const DenseVector& v) {
  if (!op.is_dense()) fail(ErrorCode::KindMismatch, "dense vector given to sequence operator");
  if (v.tag != op.tag()) fail(ErrorCode::KindMismatch, "norm tags differ");
  if (v.dim() != op.dim()) fail(ErrorCode::KindMismatch, "dimension mismatch");
}

static void check_vector(const LinOp& op, const SparseBiSeq& v) {
  if (op.is_dense()) fail(ErrorCode::KindMismatch, "sequence given to dense operator");
  if (v.tag() != op.tag()) fail(ErrorCode::KindMismatch, "norm tags differ");
}

DenseVector apply(const LinOp& op, const DenseVector& v) {
  check_vector(op, v);
  return {op.matrix() * v.coords, v.tag};
}

SparseBiSeq apply(const LinOp& op, const SparseBiSeq& v) {
  check_vector(op, v);
  return op.shift_form().apply(v);
}

DenseVector apply_power(const LinOp& op, long n, const DenseVector& v) {
  check_vector(op, v);
  if (n < 0 && !op.invertible()) fail(ErrorCode::NotInvertible, "negative power of non-invertible operator");
  const CMatrix& m = n < 0 ? op.inverse_matrix() : op.matrix();
  CVector x = v.coords;
  for (long i = 0; i < std::abs(n); ++i) x = m * x;
  return {x, v.tag};
}

SparseBiSeq apply_power(const LinOp& op, long n, const SparseBiSeq& v) {
  check_vector(op, v);
  if (n < 0 && !op.invertible()) fail(ErrorCode::NotInvertible, "negative power of non-invertible operator");
  const WeightedShift ws = n < 0 ? op.shift_form().inverse() : op.shift_form();
  SparseBiSeq x = v;
  for (long i = 0; i < std::abs(n); ++i) x = ws.apply(x);
  return x;
}

double operator_norm(const LinOp& op) {
  if (op.is_dense()) return matrix_norm(op.matrix(), op.tag());
  // Diagonal-times-permutation: the norm is sup|w| in every l^p.
  return op.shift_form().weight.sup_abs();
}

LinOp inverse(const LinOp& op) {
  if (!op.invertible()) fail(ErrorCode::NotInvertible, std::string(op_kind_name(op.kind())) + " operator is not invertible");
  switch (op.kind()) {
    case OpKind::Dense: return LinOp::dense(op.impl_->inverse_matrix, op.tag());
    case OpKind::Shift: return LinOp::shift(-op.shift_form().offset, op.tag());
    case OpKind::Diagonal: return LinOp::diagonal(op.shift_form().inverse().weight, op.tag());
    case OpKind::Composition: {
      std::vector<LinOp> inv;
      for (auto it = op.factors().rbegin(); it != op.factors().rend(); ++it) inv.push_back(inverse(*it));
      return LinOp::compose(inv);
    }
    case OpKind::BackwardScaled: break;
  }
  fail(ErrorCode::NotInvertible, "operator is not invertible");
}

CMatrix matrix_power(const CMatrix& m, long n) {
  CMatrix base = m;
  if (n < 0) {
    Eigen::FullPivLU<CMatrix> lu(m);
    if (!lu.isInvertible()) fail(ErrorCode::NotInvertible, "singular matrix");
    base = lu.inverse();
    n = -n;
  }
  CMatrix out = CMatrix::Identity(m.rows(), m.cols());
  while (n > 0) {
    if (n & 1) out = out * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return out;
}

SpectralRadius gelfand(const std::function<double(int)>& power_norm, int iters) {
  if (iters < 1) fail(ErrorCode::InvalidArgument, "iters must be >= 1");
  SpectralRadius out{kInf, 0};
  double prev = kInf;
  int stalled = 0;
  for (int n = 1; n <= iters; ++n) {
    double a = power_norm(n);
    out.iterations = n;
    if (a <= 0.0) {
      out.value = 0.0;
      return out;
    }
    double r = std::pow(a, 1.0 / n);
    out.value = std::min(out.value, r);
    if (std::abs(out.value - prev) <= 1e-14 * std::max(1.0, out.value)) {
      if (++stalled >= 2) break;
    } else {
      stalled = 0;
    }
    prev = out.value;
  }
  return out;
}

SpectralRadius spectral_radius(const LinOp& op, int iters) {
  if (iters < 1) fail(ErrorCode::InvalidArgument, "iters must be >= 1");
  if (op.is_dense()) {
    double r = 0.0;
    for (const auto& p : dense_eig(op.matrix())) r = std::max(r, std::abs(p.value));
    return {r, 0};
  }
  const WeightedShift& ws = op.shift_form();
  return gelfand([&](int n) { return ws.power_sup(n, -kInf, kInf); }, iters);
}

OperatorReport operator_report(const LinOp& op, int iters) {
  OperatorReport r;
  r.op_norm = operator_norm(op);
  if (op.invertible()) r.inv_norm = operator_norm(inverse(op));
  auto sr = spectral_radius(op, iters);
  r.spectral_radius_estimate = sr.value;
  r.gelfand_iterations = sr.iterations;
  return r;
}

}  // namespace lindyn
