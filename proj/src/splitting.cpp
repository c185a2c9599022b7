#include "lindyn/splitting.hpp"

#include <algorithm>
#include <random>

namespace lindyn {

int Splitting::dim_S() const {
  if (!dense()) return -1;
  if (kind == SplitKind::Coordinate) return static_cast<int>(s_indices.size());
  return static_cast<int>(std::lround(P_S.trace().real()));
}

int Splitting::dim_U() const {
  if (!dense()) return cutoff ? -1 : 0;
  return dim - dim_S();
}

void validate_splitting(const Splitting& split) {
  if (!split.dense()) return;
  const int d = split.dim;
  const double scale = std::max({1.0, matrix_norm(split.P_S, NormTag::L2), matrix_norm(split.P_U, NormTag::L2)});
  const double tol = 1e-10 * scale * scale;
  const CMatrix I = CMatrix::Identity(d, d);
  if (matrix_norm(split.P_S + split.P_U - I, NormTag::L2) > tol)
    fail(ErrorCode::InvalidSplitting, "P_S + P_U != I");
  if (matrix_norm(split.P_S * split.P_S - split.P_S, NormTag::L2) > tol)
    fail(ErrorCode::InvalidSplitting, "P_S is not idempotent");
  if (matrix_norm(split.P_U * split.P_U - split.P_U, NormTag::L2) > tol)
    fail(ErrorCode::InvalidSplitting, "P_U is not idempotent");
  if (matrix_norm(split.P_S * split.P_U, NormTag::L2) > tol) fail(ErrorCode::InvalidSplitting, "P_S P_U != 0");
}

Splitting spectral_split(const LinOp& op, double circle_gap_tol) {
  if (!op.is_dense()) fail(ErrorCode::KindMismatch, "spectral splitting needs a dense operator");
  if (!op.invertible()) fail(ErrorCode::NotInvertible, "spectral splitting needs an invertible operator");
  const int d = op.dim();
  auto eig = dense_eig(op.matrix(), NormTag::L2);
  Splitting s;
  s.kind = SplitKind::Spectral;
  s.tag = op.tag();
  s.dim = d;
  s.gap = kInf;
  CMatrix V(d, d);
  Eigen::VectorXd stable(d);
  for (int i = 0; i < d; ++i) {
    const double m = std::abs(eig[i].value);
    s.gap = std::min(s.gap, std::abs(m - 1.0));
    if (std::abs(m - 1.0) < circle_gap_tol) {
      const auto& l = eig[i].value;
      fail(ErrorCode::CircleEigenvalue,
           "eigenvalue " + std::to_string(l.real()) + (l.imag() < 0 ? "" : "+") + std::to_string(l.imag()) + "i");
    }
    V.col(i) = eig[i].vector.coords;
    stable(i) = m < 1.0 ? 1.0 : 0.0;
  }
  Eigen::FullPivLU<CMatrix> lu(V);
  if (!lu.isInvertible()) fail(ErrorCode::NoConvergence, "eigenbasis is defective");
  CMatrix Vi = lu.inverse();
  if (matrix_norm(V, NormTag::L2) * matrix_norm(Vi, NormTag::L2) > 1e12)
    fail(ErrorCode::NoConvergence, "eigenbasis is nearly defective");
  // A trivial side gets an exact zero projector rather than V·Vi rounding noise.
  const double n_stable = stable.sum();
  if (n_stable == d)
    s.P_S = CMatrix::Identity(d, d);
  else if (n_stable == 0.0)
    s.P_S = CMatrix::Zero(d, d);
  else
    s.P_S = V * stable.cast<Scalar>().asDiagonal() * Vi;
  s.P_U = CMatrix::Identity(d, d) - s.P_S;
  s.proj_S_norm = matrix_norm(s.P_S, s.tag);
  s.proj_U_norm = matrix_norm(s.P_U, s.tag);
  validate_splitting(s);
  return s;
}

Splitting coordinate_split(long cutoff, NormTag tag) {
  Splitting s;
  s.kind = SplitKind::Coordinate;
  s.tag = tag;
  s.cutoff = cutoff;
  return s;
}

Splitting coordinate_split_all(NormTag tag) {
  Splitting s;
  s.kind = SplitKind::Coordinate;
  s.tag = tag;
  s.proj_U_norm = 0.0;
  return s;
}

Splitting coordinate_split_dense(int d, const std::vector<int>& s_indices, NormTag tag) {
  if (d < 1 || d > kMaxDim) fail(ErrorCode::InvalidArgument, "dimension outside 1..32");
  Splitting s;
  s.kind = SplitKind::Coordinate;
  s.tag = tag;
  s.dim = d;
  s.P_S = CMatrix::Zero(d, d);
  for (int i : s_indices) {
    if (i < 0 || i >= d) fail(ErrorCode::InvalidSplitting, "coordinate index out of range");
    s.P_S(i, i) = 1.0;
  }
  for (int i = 0; i < d; ++i)
    if (s.P_S(i, i) == Scalar(1.0)) s.s_indices.push_back(i);
  s.P_U = CMatrix::Identity(d, d) - s.P_S;
  s.proj_S_norm = s.s_indices.empty() ? 0.0 : 1.0;
  s.proj_U_norm = static_cast<int>(s.s_indices.size()) == d ? 0.0 : 1.0;
  return s;
}

Splitting coordinate_split_all_dense(int d, NormTag tag) {
  std::vector<int> all(d);
  for (int i = 0; i < d; ++i) all[i] = i;
  return coordinate_split_dense(d, all, tag);
}

static void check_dense_pair(const Splitting& split, const DenseVector& v) {
  if (!split.dense() || split.dim != v.dim()) fail(ErrorCode::KindMismatch, "splitting does not match vector");
}

DenseVector project_S(const Splitting& split, const DenseVector& v) {
  check_dense_pair(split, v);
  return {split.P_S * v.coords, v.tag};
}

DenseVector project_U(const Splitting& split, const DenseVector& v) {
  check_dense_pair(split, v);
  return {split.P_U * v.coords, v.tag};
}

SparseBiSeq project_S(const Splitting& split, const SparseBiSeq& v) {
  if (split.dense()) fail(ErrorCode::KindMismatch, "dense splitting applied to a sequence");
  SparseBiSeq out(v.tag());
  for (const auto& [k, x] : v.entries())
    if (split.in_S(k)) out.set(k, x);
  return out;
}

SparseBiSeq project_U(const Splitting& split, const SparseBiSeq& v) {
  if (split.dense()) fail(ErrorCode::KindMismatch, "dense splitting applied to a sequence");
  SparseBiSeq out(v.tag());
  for (const auto& [k, x] : v.entries())
    if (!split.in_S(k)) out.set(k, x);
  return out;
}

double vec_norm(const AnyVector& v) {
  return std::visit([](const auto& x) { return vec_norm(x); }, v);
}

const char* hyp_class_name(HypClass c) {
  switch (c) {
    case HypClass::Hyperbolic: return "Hyperbolic";
    case HypClass::GeneralizedHyperbolic: return "GeneralizedHyperbolic";
    case HypClass::Neither: return "Neither";
    case HypClass::Undetermined: return "Undetermined";
  }
  return "?";
}

static CMatrix selection(int d, const std::vector<int>& idx) {
  CMatrix Q = CMatrix::Zero(d, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) Q(idx[j], static_cast<Eigen::Index>(j)) = 1.0;
  return Q;
}

static CMatrix range_basis(const CMatrix& P) {
  Eigen::JacobiSVD<CMatrix> svd(P, Eigen::ComputeThinU);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 0.5) ++r;
  return svd.matrixU().leftCols(r);
}

RestrictedMatrix restrict_dense(const LinOp& op, const Splitting& split, RestrictedPowers::Side side) {
  const int d = split.dim;
  RestrictedMatrix out;
  if (split.kind == SplitKind::Coordinate) {
    std::vector<int> idx;
    for (int i = 0; i < d; ++i) {
      bool in_s = std::find(split.s_indices.begin(), split.s_indices.end(), i) != split.s_indices.end();
      if (in_s == (side == RestrictedPowers::Side::S)) idx.push_back(i);
    }
    out.Q = selection(d, idx);
  } else {
    out.Q = range_basis(side == RestrictedPowers::Side::S ? split.P_S : split.P_U);
  }
  const CMatrix& L = side == RestrictedPowers::Side::S ? op.matrix() : op.inverse_matrix();
  out.M = out.Q.adjoint() * L * out.Q;
  return out;
}

RestrictedPowers::RestrictedPowers(const LinOp& op, const Splitting& split, Side side)
    : op_(op), split_(split), side_(side) {
  if (op.is_dense() != split.dense()) fail(ErrorCode::KindMismatch, "splitting does not match operator");
  if (side == Side::U && !op.invertible()) fail(ErrorCode::NotInvertible, "inverse needed on U");
  if (op.is_dense()) {
    auto rm = restrict_dense(op, split, side);
    Q_ = rm.Q;
    M_ = rm.M;
    dim_ = static_cast<int>(Q_.cols());
    Mn_ = CMatrix::Identity(dim_, dim_);
    exact_ = split.kind == SplitKind::Coordinate || split.tag == NormTag::L2;
    if (!exact_ && dim_ > 0) {
      std::mt19937_64 rng(0x5eed);
      std::normal_distribution<double> g;
      const int extra = 16;
      samples_ = CMatrix(dim_, dim_ + extra);
      samples_.leftCols(dim_) = CMatrix::Identity(dim_, dim_);
      for (int j = 0; j < extra; ++j)
        for (int i = 0; i < dim_; ++i) samples_(i, dim_ + j) = Scalar(g(rng), g(rng));
    }
  } else {
    ws_ = side == Side::S ? op.shift_form() : op.shift_form().inverse();
    dim_ = (side == Side::U && !split.cutoff) ? 0 : -1;
  }
}

NormBounds RestrictedPowers::next() {
  const int n = n_++;
  if (dim_ == 0) return {0.0, 0.0};
  if (ws_) {
    const double s = static_cast<double>(ws_->offset) * n;
    double v;
    if (!split_.cutoff)
      v = ws_->power_sup(n, -kInf, kInf);
    else if (side_ == Side::S)
      v = ws_->power_sup(n, -kInf, static_cast<double>(*split_.cutoff) - s);
    else
      v = ws_->power_sup(n, static_cast<double>(*split_.cutoff) + 1.0 - s, kInf);
    return {v, v};
  }
  if (n > 0) Mn_ = M_ * Mn_;
  const CMatrix full = Q_ * Mn_ * Q_.adjoint();
  const double upper = matrix_norm(full, split_.tag);
  if (exact_) return {upper, upper};
  double lower = 0.0;
  for (Eigen::Index j = 0; j < samples_.cols(); ++j) {
    CVector x = Q_ * samples_.col(j);
    double nx = norm(x, split_.tag);
    if (nx > 0.0) lower = std::max(lower, norm(Q_ * (Mn_ * samples_.col(j)), split_.tag) / nx);
  }
  return {std::min(lower, upper), upper};
}

SeriesSum sum_norm_series(const std::function<double(int)>& a, int k0, double tail_tol, int cap) {
  SeriesSum out;
  std::vector<double> vals;
  double sum = 0.0;
  int p = -1;
  double q = 1.0;
  for (int k = 0; k <= cap; ++k) {
    const double ak = a(k);
    if (!std::isfinite(ak)) break;
    vals.push_back(ak);
    if (k >= k0) sum += ak;
    out.terms = k + 1;
    if (ak == 0.0 && k >= 1) {
      out.value = sum;
      out.tail_bound = 0.0;
      return out;
    }
    if (p < 0 && k >= 1 && ak < 1.0) {
      p = k;
      q = ak;
    }
    if (p > 0 && k + 1 - p >= 0 && k >= k0) {
      double last = 0.0;
      for (int i = k + 1 - p; i <= k; ++i) last += vals[static_cast<std::size_t>(i)];
      const double tail = q * last / (1.0 - q);
      if (tail < tail_tol) {
        out.value = sum;
        out.tail_bound = tail;
        return out;
      }
    }
  }
  out.value = kInf;
  return out;
}

std::optional<CVector> subspace_intersection(const CMatrix& A, const CMatrix& B, double rel_tol) {
  if (A.cols() == 0 || B.cols() == 0) return std::nullopt;
  CMatrix C(A.rows(), A.cols() + B.cols());
  C << A, -B;
  Eigen::JacobiSVD<CMatrix> svd(C, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv.size() ? sv(0) : 0.0);
  const Eigen::Index ncols = C.cols();
  // Columns beyond the number of singular values are null directions too.
  Eigen::Index j = -1;
  if (ncols > sv.size())
    j = ncols - 1;
  else if (sv(sv.size() - 1) <= rel_tol * scale)
    j = sv.size() - 1;
  if (j < 0) return std::nullopt;
  CVector coeff = svd.matrixV().col(j).tail(B.cols());
  CVector w = B * coeff;
  if (w.norm() <= rel_tol) return std::nullopt;
  return w;
}

namespace {

Invariance sequence_invariance(const WeightedShift& ws, const Splitting& split) {
  Invariance inv;
  if (!split.cutoff) {
    inv = {true, true, true, true};
    return inv;
  }
  const long s = ws.offset;
  const long c = *split.cutoff;
  // L e_j = w(j - s) e_{j - s}; a crossing only matters where the weight is nonzero.
  auto crosses = [&](long from, long to) {
    for (long j = from + 1; j <= to; ++j)
      if (ws.weight(j - s) != Scalar(0.0)) return true;
    return false;
  };
  inv.LS_in_S = s >= 0 || !crosses(c + s, c);
  inv.LU_in_U = s <= 0 || !crosses(c, c + s);
  // The inverse is a weighted shift by -s with nonzero weights.
  inv.Linv_U_in_U = s >= 0;
  inv.S_in_LS = s <= 0;
  return inv;
}

Invariance dense_invariance(const CMatrix& L, const CMatrix& Li, const Splitting& split) {
  const double scale = std::max({1.0, matrix_norm(L, NormTag::L2), matrix_norm(Li, NormTag::L2)}) *
                       std::max({1.0, matrix_norm(split.P_S, NormTag::L2), matrix_norm(split.P_U, NormTag::L2)});
  const double tol = 1e-9 * scale;
  Invariance inv;
  inv.LS_in_S = matrix_norm(split.P_U * L * split.P_S, NormTag::L2) <= tol;
  inv.Linv_U_in_U = matrix_norm(split.P_S * Li * split.P_U, NormTag::L2) <= tol;
  inv.S_in_LS = matrix_norm(split.P_U * Li * split.P_S, NormTag::L2) <= tol;
  inv.LU_in_U = matrix_norm(split.P_S * L * split.P_U, NormTag::L2) <= tol;
  return inv;
}

void check_compatible(const LinOp& op, const Splitting& split) {
  if (op.is_dense() != split.dense()) fail(ErrorCode::KindMismatch, "splitting does not match operator");
  if (op.tag() != split.tag) fail(ErrorCode::KindMismatch, "norm tags differ");
  if (op.is_dense() && op.dim() != split.dim) fail(ErrorCode::KindMismatch, "dimension mismatch");
  if (!op.invertible()) fail(ErrorCode::NotInvertible, "classification needs an invertible operator");
}

Invariance invariance_of(const LinOp& op, const Splitting& split) {
  if (op.is_dense()) return dense_invariance(op.matrix(), op.inverse_matrix(), split);
  return sequence_invariance(op.shift_form(), split);
}

// A nonzero element of T(U) ∩ S, if any.
std::optional<AnyVector> image_of_U_meets_S(const LinOp& T, const Splitting& split) {
  if (T.is_dense()) {
    auto qs = restrict_dense(T, split, RestrictedPowers::Side::S).Q;
    CMatrix qu;
    if (split.kind == SplitKind::Coordinate) {
      std::vector<int> idx;
      for (int i = 0; i < split.dim; ++i)
        if (std::find(split.s_indices.begin(), split.s_indices.end(), i) == split.s_indices.end()) idx.push_back(i);
      qu = selection(split.dim, idx);
    } else {
      qu = range_basis(split.P_U);
    }
    auto w = subspace_intersection(T.matrix() * qu, qs);
    if (!w) return std::nullopt;
    CVector v = *w / norm(*w, split.tag);
    return AnyVector(DenseVector(v, split.tag));
  }
  if (!split.cutoff) return std::nullopt;
  const WeightedShift& ws = T.shift_form();
  const long c = *split.cutoff;
  for (long j = c + 1; j <= c + ws.offset; ++j) {
    Scalar w = ws.weight(j - ws.offset);
    if (w == Scalar(0.0)) continue;
    SparseBiSeq v = SparseBiSeq::basis(j - ws.offset, split.tag, w / std::abs(w));
    return AnyVector(v);
  }
  return std::nullopt;
}

}  // namespace

HyperbolicityReport classify(const LinOp& op, const Splitting& split, int horizon) {
  check_compatible(op, split);
  validate_splitting(split);
  HyperbolicityReport rep;
  rep.invariance = invariance_of(op, split);
  if (!rep.invariance.LS_in_S) fail(ErrorCode::InvalidSplitting, "L(S) is not contained in S");
  if (!rep.invariance.Linv_U_in_U) fail(ErrorCode::InvalidSplitting, "L^-1(U) is not contained in U");

  bool has_S = true, has_U = true;
  if (op.is_dense()) {
    auto rs = restrict_dense(op, split, RestrictedPowers::Side::S);
    auto ru = restrict_dense(op, split, RestrictedPowers::Side::U);
    has_S = rs.Q.cols() > 0;
    has_U = ru.Q.cols() > 0;
    auto rad = [](const CMatrix& m) {
      double r = 0.0;
      if (m.rows() == 0) return r;
      for (const auto& p : dense_eig(m)) r = std::max(r, std::abs(p.value));
      return r;
    };
    rep.r_S = rad(rs.M);
    rep.r_U_inv = rad(ru.M);
    rep.circle_gap = kInf;
    for (const auto& p : dense_eig(op.matrix())) rep.circle_gap = std::min(rep.circle_gap, std::abs(std::abs(p.value) - 1.0));
  } else {
    has_U = split.cutoff.has_value();
    RestrictedPowers ps(op, split, RestrictedPowers::Side::S);
    ps.next();
    std::vector<double> sv;
    rep.r_S = gelfand([&](int) { return ps.next().upper; }, horizon).value;
    if (has_U) {
      RestrictedPowers pu(op, split, RestrictedPowers::Side::U);
      pu.next();
      rep.r_U_inv = gelfand([&](int) { return pu.next().upper; }, horizon).value;
    }
    rep.circle_gap = kInf;
    if (has_S) rep.circle_gap = std::min(rep.circle_gap, std::abs(1.0 - rep.r_S));
    if (has_U) rep.circle_gap = std::min(rep.circle_gap, std::abs(1.0 - rep.r_U_inv));
  }

  const bool near_S = has_S && std::abs(rep.r_S - 1.0) <= kUndeterminedBand;
  const bool near_U = has_U && std::abs(rep.r_U_inv - 1.0) <= kUndeterminedBand;
  if (near_S || near_U) {
    rep.cls = HypClass::Undetermined;
    rep.note = "restricted spectral radius within 1e-6 of 1";
    return rep;
  }
  if ((has_S && rep.r_S > 1.0) || (has_U && rep.r_U_inv > 1.0)) {
    rep.cls = HypClass::Neither;
    rep.note = "restricted spectral radius exceeds 1";
    return rep;
  }
  rep.witness = image_of_U_meets_S(op, split);
  const auto& iv = rep.invariance;
  if (!rep.witness && iv.S_in_LS && iv.LU_in_U)
    rep.cls = HypClass::Hyperbolic;
  else
    rep.cls = HypClass::GeneralizedHyperbolic;
  return rep;
}

HyperbolicityReport perseguido_check(const LinOp& W, const LinOp& R, const Splitting& split) {
  if (W.tag() != R.tag()) fail(ErrorCode::KindMismatch, "W and R carry different norms");
  check_compatible(W, split);
  check_compatible(R, split);
  validate_splitting(split);
  const Invariance iw = invariance_of(W, split);
  const Invariance ir = invariance_of(R, split);
  if (!iw.LS_in_S) fail(ErrorCode::HypothesisFailed, "W(S)⊆S");
  if (!iw.Linv_U_in_U) fail(ErrorCode::HypothesisFailed, "W⁻¹(U)⊆U");
  if (!ir.LS_in_S) fail(ErrorCode::HypothesisFailed, "R(S)⊆S");
  if (!ir.Linv_U_in_U) fail(ErrorCode::HypothesisFailed, "R⁻¹(U)⊆U");

  auto first_power = [&](const LinOp& op, RestrictedPowers::Side side) {
    RestrictedPowers p(op, split, side);
    p.next();
    return p.next().upper;
  };
  const double ws = first_power(W, RestrictedPowers::Side::S);
  const double wu_inv = first_power(W, RestrictedPowers::Side::U);
  if (!(operator_norm(R) * ws < 1.0)) fail(ErrorCode::HypothesisFailed, "‖R‖·‖W|_S‖ < 1");
  if (!(wu_inv * operator_norm(inverse(R)) < 1.0)) fail(ErrorCode::HypothesisFailed, "‖W⁻¹|_U‖·‖R⁻¹‖ < 1");

  HyperbolicityReport rep = classify(LinOp::compose({R, W}), split);
  rep.cls = HypClass::GeneralizedHyperbolic;
  rep.witness = image_of_U_meets_S(R, split);
  rep.note = rep.witness ? "R(U)∩S is nonzero, so R∘W is not hyperbolic" : "";
  return rep;
}

}  // namespace lindyn
