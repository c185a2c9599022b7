#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lindyn/error.hpp"

namespace lindyn {

using Scalar = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

constexpr int kMaxDim = 32;
constexpr double kInf = std::numeric_limits<double>::infinity();

enum class NormTag { L1, L2, LInf };

const char* norm_tag_name(NormTag tag);
NormTag parse_norm_tag(const std::string& s);
// L1 and LInf are dual to each other, L2 to itself.
NormTag dual_tag(NormTag tag);

double norm(const CVector& v, NormTag tag);
// Induced operator norm; rectangular matrices are allowed.
double matrix_norm(const CMatrix& m, NormTag tag);

struct DenseVector {
  CVector coords;
  NormTag tag = NormTag::L2;

  DenseVector() = default;
  DenseVector(CVector c, NormTag t) : coords(std::move(c)), tag(t) {}
  static DenseVector zero(int d, NormTag t) { return {CVector::Zero(d), t}; }
  static DenseVector basis(int d, int i, NormTag t);

  int dim() const { return static_cast<int>(coords.size()); }
  DenseVector& operator+=(const DenseVector& o);
  DenseVector& operator-=(const DenseVector& o);
  DenseVector& operator*=(Scalar c);
};

DenseVector operator+(DenseVector a, const DenseVector& b);
DenseVector operator-(DenseVector a, const DenseVector& b);
DenseVector operator*(Scalar c, DenseVector a);

// Finitely supported bilateral sequence. Entries below 1e-300 in modulus are
// dropped so that two equal sequences always have the same support.
class SparseBiSeq {
 public:
  static constexpr double kDropBelow = 1e-300;

  explicit SparseBiSeq(NormTag tag = NormTag::L1) : tag_(tag) {}
  static SparseBiSeq basis(long k, NormTag tag, Scalar value = 1.0);

  NormTag tag() const { return tag_; }
  void set(long k, Scalar v);
  void add(long k, Scalar v);
  Scalar get(long k) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  long min_index() const { return entries_.begin()->first; }
  long max_index() const { return entries_.rbegin()->first; }
  const std::map<long, Scalar>& entries() const { return entries_; }

  SparseBiSeq& operator+=(const SparseBiSeq& o);
  SparseBiSeq& operator-=(const SparseBiSeq& o);
  SparseBiSeq& operator*=(Scalar c);
  bool operator==(const SparseBiSeq& o) const { return tag_ == o.tag_ && entries_ == o.entries_; }

 private:
  std::map<long, Scalar> entries_;
  NormTag tag_;
};

SparseBiSeq operator+(SparseBiSeq a, const SparseBiSeq& b);
SparseBiSeq operator-(SparseBiSeq a, const SparseBiSeq& b);
SparseBiSeq operator*(Scalar c, SparseBiSeq a);

double vec_norm(const DenseVector& v);
double vec_norm(const SparseBiSeq& v);

struct EigenPair {
  Scalar value;
  DenseVector vector;
};

// Sorted by modulus, then argument. Vectors are normalized in `tag`.
std::vector<EigenPair> dense_eig(const CMatrix& m, NormTag tag = NormTag::L2);

void check_square(const CMatrix& m, const char* what);

template <class Point>
struct FixedPointResult {
  Point point;
  int iterations = 0;
  int iteration_bound = 0;
  double max_ratio = 0.0;
  double final_step = 0.0;
};

// Iterates x <- f(x) until d(f(x), x) <= tol. Every observed step ratio is
// compared against the caller's bound. When the first step is already zero,
// `probe` (if given) supplies a nearby point whose step ratio is checked
// instead, so that a non-contracting map cannot hide behind a fixed start.
// Step distances at or below `noise` are treated as converged.
template <class Point, class Map, class Dist>
FixedPointResult<Point> banach_fixed_point(const Map& f, Point x0, double lambda, double tol,
                                           const Dist& dist,
                                           const std::function<std::optional<Point>(const Point&)>& probe = {},
                                           double noise = 0.0) {
  if (!(lambda > 0.0 && lambda < 1.0)) fail(ErrorCode::InvalidArgument, "contraction bound must lie in (0,1)");
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
  FixedPointResult<Point> out{x0, 0, 0, 0.0, 0.0};
  Point x = std::move(x0);
  Point fx = f(x);
  double d = dist(fx, x);
  if (d == 0.0 && probe) {
    if (auto y = probe(x)) {
      Point fy = f(*y);
      double dxy = dist(*y, x);
      double ratio = dxy > 0.0 ? dist(fy, fx) / dxy : 0.0;
      if (ratio > lambda + 1e-9)
        fail(ErrorCode::NonContracting, "probe step ratio " + std::to_string(ratio));
    }
  }
  const double d0 = d;
  int bound = 1;
  if (d0 > tol) bound = static_cast<int>(std::ceil(std::log(tol * (1.0 - lambda) / d0) / std::log(lambda))) + 1;
  out.iteration_bound = bound;
  int it = 0;
  while (d > std::max(tol, noise)) {
    if (it > bound) fail(ErrorCode::NoConvergence, "iteration bound exceeded");
    Point next = f(fx);
    double dn = dist(next, fx);
    double ratio = dn / d;
    if (dn > noise && ratio > lambda + 1e-9)
      fail(ErrorCode::NonContracting, "observed step ratio " + std::to_string(ratio));
    out.max_ratio = std::max(out.max_ratio, dn > noise ? ratio : 0.0);
    x = std::move(fx);
    fx = std::move(next);
    d = dn;
    ++it;
  }
  out.point = std::move(x);
  out.iterations = it;
  out.final_step = d;
  return out;
}

FixedPointResult<double> banach_fixed_point(const std::function<double(double)>& f, double x0, double lambda,
                                            double tol);

}  // namespace lindyn
