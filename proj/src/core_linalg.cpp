#include "lindyn/core_linalg.hpp"

#include <algorithm>

namespace lindyn {

const char* norm_tag_name(NormTag tag) {
  switch (tag) {
    case NormTag::L1: return "l1";
    case NormTag::L2: return "l2";
    case NormTag::LInf: return "linf";
  }
  return "?";
}

NormTag parse_norm_tag(const std::string& s) {
  if (s == "l1") return NormTag::L1;
  if (s == "l2") return NormTag::L2;
  if (s == "linf") return NormTag::LInf;
  fail(ErrorCode::ConfigInvalid, "unknown norm '" + s + "'");
}

NormTag dual_tag(NormTag tag) {
  switch (tag) {
    case NormTag::L1: return NormTag::LInf;
    case NormTag::LInf: return NormTag::L1;
    default: return NormTag::L2;
  }
}

double norm(const CVector& v, NormTag tag) {
  if (v.size() == 0) return 0.0;
  switch (tag) {
    case NormTag::L1: return v.cwiseAbs().sum();
    case NormTag::L2: return v.norm();
    case NormTag::LInf: return v.cwiseAbs().maxCoeff();
  }
  return 0.0;
}

double matrix_norm(const CMatrix& m, NormTag tag) {
  if (m.size() == 0) return 0.0;
  switch (tag) {
    case NormTag::L1: return m.cwiseAbs().colwise().sum().maxCoeff();
    case NormTag::LInf: return m.cwiseAbs().rowwise().sum().maxCoeff();
    case NormTag::L2: {
      Eigen::JacobiSVD<CMatrix> svd(m);
      return svd.singularValues()(0);
    }
  }
  return 0.0;
}

DenseVector DenseVector::basis(int d, int i, NormTag t) {
  DenseVector v = zero(d, t);
  v.coords(i) = 1.0;
  return v;
}

static void check_pair(const DenseVector& a, const DenseVector& b) {
  if (a.tag != b.tag) fail(ErrorCode::KindMismatch, "norm tags differ");
  if (a.dim() != b.dim()) fail(ErrorCode::KindMismatch, "dimensions differ");
}

DenseVector& DenseVector::operator+=(const DenseVector& o) {
  check_pair(*this, o);
  coords += o.coords;
  return *this;
}

DenseVector& DenseVector::operator-=(const DenseVector& o) {
  check_pair(*this, o);
  coords -= o.coords;
  return *this;
}

DenseVector& DenseVector::operator*=(Scalar c) {
  coords *= c;
  return *this;
}

DenseVector operator+(DenseVector a, const DenseVector& b) { return a += b; }
DenseVector operator-(DenseVector a, const DenseVector& b) { return a -= b; }
DenseVector operator*(Scalar c, DenseVector a) { return a *= c; }

SparseBiSeq SparseBiSeq::basis(long k, NormTag tag, Scalar value) {
  SparseBiSeq s(tag);
  s.set(k, value);
  return s;
}

void SparseBiSeq::set(long k, Scalar v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) fail(ErrorCode::InvalidArgument, "non-finite entry");
  if (std::abs(v) < kDropBelow)
    entries_.erase(k);
  else
    entries_[k] = v;
}

void SparseBiSeq::add(long k, Scalar v) { set(k, get(k) + v); }

Scalar SparseBiSeq::get(long k) const {
  auto it = entries_.find(k);
  return it == entries_.end() ? Scalar(0.0) : it->second;
}

SparseBiSeq& SparseBiSeq::operator+=(const SparseBiSeq& o) {
  if (tag_ != o.tag_) fail(ErrorCode::KindMismatch, "norm tags differ");
  for (const auto& [k, v] : o.entries_) add(k, v);
  return *this;
}

SparseBiSeq& SparseBiSeq::operator-=(const SparseBiSeq& o) {
  if (tag_ != o.tag_) fail(ErrorCode::KindMismatch, "norm tags differ");
  for (const auto& [k, v] : o.entries_) add(k, -v);
  return *this;
}

SparseBiSeq& SparseBiSeq::operator*=(Scalar c) {
  std::map<long, Scalar> out;
  for (const auto& [k, v] : entries_) {
    Scalar w = c * v;
    if (std::abs(w) >= kDropBelow) out.emplace(k, w);
  }
  entries_.swap(out);
  return *this;
}

SparseBiSeq operator+(SparseBiSeq a, const SparseBiSeq& b) { return a += b; }
SparseBiSeq operator-(SparseBiSeq a, const SparseBiSeq& b) { return a -= b; }
SparseBiSeq operator*(Scalar c, SparseBiSeq a) { return a *= c; }

double vec_norm(const DenseVector& v) { return norm(v.coords, v.tag); }

double vec_norm(const SparseBiSeq& v) {
  double acc = 0.0;
  for (const auto& [k, x] : v.entries()) {
    double a = std::abs(x);
    switch (v.tag()) {
      case NormTag::L1: acc += a; break;
      case NormTag::L2: acc = std::hypot(acc, a); break;
      case NormTag::LInf: acc = std::max(acc, a); break;
    }
  }
  return acc;
}

void check_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols()) fail(ErrorCode::InvalidArgument, std::string(what) + ": matrix is not square");
  if (m.rows() < 1 || m.rows() > kMaxDim)
    fail(ErrorCode::InvalidArgument, std::string(what) + ": dimension outside 1..32");
  if (!m.allFinite()) fail(ErrorCode::InvalidArgument, std::string(what) + ": non-finite entry");
}

std::vector<EigenPair> dense_eig(const CMatrix& m, NormTag tag) {
  check_square(m, "dense_eig");
  Eigen::ComplexEigenSolver<CMatrix> es;
  es.setMaxIterations(64 * static_cast<int>(m.rows()));
  es.compute(m, true);
  if (es.info() != Eigen::Success) fail(ErrorCode::NoConvergence, "eigensolver did not converge");
  const double scale = std::max(matrix_norm(m, NormTag::L2), 1e-300);
  std::vector<EigenPair> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    CVector v = es.eigenvectors().col(i);
    double nv = norm(v, tag);
    if (!(nv > 0.0)) fail(ErrorCode::NoConvergence, "zero eigenvector");
    v /= nv;
    Scalar lam = es.eigenvalues()(i);
    double res = norm(m * v - lam * v, NormTag::L2) / std::max(norm(v, NormTag::L2), 1e-300);
    if (res > 1e-8 * scale) fail(ErrorCode::NoConvergence, "eigenpair residual too large");
    out.push_back({lam, DenseVector(v, tag)});
  }
  std::sort(out.begin(), out.end(), [](const EigenPair& a, const EigenPair& b) {
    double ma = std::abs(a.value), mb = std::abs(b.value);
    if (ma != mb) return ma < mb;
    return std::arg(a.value) < std::arg(b.value);
  });
  return out;
}

FixedPointResult<double> banach_fixed_point(const std::function<double(double)>& f, double x0, double lambda,
                                            double tol) {
  auto dist = [](double a, double b) { return std::abs(a - b); };
  std::function<std::optional<double>(const double&)> probe = [](const double& x) -> std::optional<double> {
    return x + std::max(1.0, std::abs(x));
  };
  return banach_fixed_point<double>(f, x0, lambda, tol, dist, probe);
}

}  // namespace lindyn
