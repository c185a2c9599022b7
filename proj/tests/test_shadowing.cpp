#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lindyn/linf.hpp"
#include "lindyn/shadowing.hpp"
#include "lindyn/splitting.hpp"
#include "lindyn/suite.hpp"

using namespace lindyn;
using namespace testing_helpers;

namespace {

DenseVector dv(std::initializer_list<Scalar> xs, NormTag tag = NormTag::LInf) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (Scalar x : xs) v(i++) = x;
  return DenseVector(v, tag);
}

template <class V>
void check_exact_orbit(const LinOp& op, const ShadowResult<V>& r) {
  for (std::size_t i = 0; i + 1 < r.trajectory.size(); ++i) {
    const double scale = std::max(1.0, vec_norm(r.trajectory[i]));
    CHECK(vec_norm(apply(op, r.trajectory[i]) - r.trajectory[i + 1]) <= 1e-12 * scale);
  }
}

template <class V>
double sup_dist(const std::vector<V>& a, const std::vector<V>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, vec_norm(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("pseudo-orbit generation") {
  const LinOp op = diag2();
  auto exact = generate_pseudo_orbit(op, dv({1.0, 1.0}), 0, 10, 0.0, 42);
  CHECK(exact.measured_defect == 0.0);
  auto po = generate_pseudo_orbit(op, dv({1.0, 1.0}), 0, 10, 1e-3, 42);
  CHECK(po.size() == 11);
  CHECK(po.points[0].coords == dv({1.0, 1.0}).coords);
  double defect = 0.0;
  for (std::size_t i = 0; i + 1 < po.size(); ++i)
    defect = std::max(defect, vec_norm(apply(op, po.points[i]) - po.points[i + 1]));
  CHECK(defect <= 1e-3);
  CHECK(defect == po.measured_defect);
  auto one = generate_pseudo_orbit(op, dv({1.0, 1.0}), 3, 3, 1e-3, 42);
  CHECK(one.size() == 1);
  CHECK(one.measured_defect == 0.0);
}

TEST_CASE("splitting series on diag(1/2,2)") {
  const LinOp op = diag2();
  const Splitting s = coordinate_split_dense(2, {0}, NormTag::LInf);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto po = generate_bounded_pseudo_orbit(op, s, dv({1.0, 1.0}), 0, 60, 1e-3, seed);
    auto r = shadow_splitting_series(op, s, po);
    check_exact_orbit(op, r);
    CHECK(r.constant_used == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r.sup_error <= 3e-3 + 1e-12);
    CHECK(r.sup_error == doctest::Approx(sup_dist(r.trajectory, po.points)).epsilon(1e-12));
    auto w = shadow_window_solve(op, po);
    check_exact_orbit(op, w);
    CHECK(w.sup_error <= r.sup_error + 1e-6);
  }
  auto exact = generate_pseudo_orbit(op, dv({1.0, 1.0}), 0, 20, 0.0, 1);
  auto r0 = shadow_splitting_series(op, s, exact);
  CHECK(r0.sup_error == 0.0);
  CHECK(shadow_window_solve(op, exact).sup_error <= 1e-12);
}

TEST_CASE("splitting series on lockdown") {
  const LinOp op = lockdown();
  const Splitting s = coordinate_split(0, NormTag::L1);
  const SparseBiSeq seed = e(-1, 0.3) + e(0, 1.0) + e(2, -0.5);
  auto po = generate_pseudo_orbit(op, seed, -20, 20, 1e-4, 9);
  auto r = shadow_splitting_series(op, s, po);
  check_exact_orbit(op, r);
  CHECK(r.constant_used == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.sup_error <= 3e-4 + 1e-12);
}

TEST_CASE("contraction shadowing") {
  const LinOp op = half_identity();
  auto po = generate_pseudo_orbit(op, dv({1.0, -2.0}), 0, 50, 0.05, 5);
  auto r = shadow_contraction(op, po);
  check_exact_orbit(op, r);
  CHECK(r.sup_error <= 0.1 + 1e-12);
  auto exact = generate_pseudo_orbit(op, dv({1.0, -2.0}), 0, 50, 0.0, 5);
  CHECK(shadow_contraction(op, exact).sup_error <= 1e-12);
  auto rot = generate_pseudo_orbit(rotation(), dv({1.0, 0.0}), 0, 10, 0.01, 5);
  CHECK(error_of([&] { shadow_contraction(rotation(), rot); }) == ErrorCode::NonContracting);
}

TEST_CASE("rotation window solve grows with the window") {
  // Chain built from the isometry argument: each step rotates and adds a
  // push of size delta along the current direction.
  const LinOp op = rotation(NormTag::L2);
  const double delta = 1e-3;
  double prev = 0.0;
  for (int N : {8, 16, 32, 64}) {
    PseudoOrbit<DenseVector> po;
    po.delta = delta;
    DenseVector x = dv({1.0, 0.0}, NormTag::L2);
    po.points.push_back(x);
    for (int n = 0; n < N; ++n) {
      DenseVector y = apply(op, x);
      y = (1.0 + delta / vec_norm(y)) * y;
      po.points.push_back(y);
      x = y;
    }
    po.measured_defect = pseudo_orbit_defect(op, po.points);
    auto r = shadow_window_solve(op, po);
    CHECK(r.sup_error >= prev);
    prev = r.sup_error;
  }
  CHECK(prev >= 10 * delta);
}

TEST_CASE("shad bounds") {
  const auto b = shad_bounds(diag2(), coordinate_split_dense(2, {0}, NormTag::LInf));
  CHECK(b.upper == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(b.lower == doctest::Approx(2.0).epsilon(1e-12));
  const auto h = shad_bounds(half_identity(), coordinate_split_all_dense(2, NormTag::LInf));
  CHECK(h.upper == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(h.lower == doctest::Approx(2.0).epsilon(1e-12));
  const auto l = shad_bounds(lockdown(), coordinate_split(0, NormTag::L1));
  CHECK(l.upper == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(l.lower <= l.upper + 1e-9);
  CHECK(error_of([] { shad_bounds(tucides(), coordinate_split_all(NormTag::L1)); }) == ErrorCode::NotCertified);
}

TEST_CASE("shad bounds order on random hyperbolic matrices") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 100; ++t) {
    const NormTag tag = t % 3 == 0 ? NormTag::L1 : (t % 3 == 1 ? NormTag::L2 : NormTag::LInf);
    const LinOp op = LinOp::dense(random_hyperbolic_matrix(2 + t % 3, 0.1, rng), tag);
    const auto b = shad_bounds(op, spectral_split(op));
    CHECK(std::isfinite(b.upper));
    CHECK(b.lower <= b.upper + 1e-9);
    CHECK(b.lower > 0.0);
    // A constant defect z has the bounded solution (I - L)^-1 z.
    const CMatrix res = (CMatrix::Identity(op.dim(), op.dim()) - op.matrix()).inverse();
    CHECK(b.upper >= matrix_norm(res, tag) * (1.0 - 1e-9));
  }
}

TEST_CASE("shad calculus") {
  const Interval p = shad_product({2.0, 3.0}, {2.0, 2.0});
  CHECK(p.lo == 2.0);
  CHECK(p.hi == 3.0);
  const Interval c = shad_conjugacy({2.0, 3.0}, 1.0, 1.0);
  CHECK(c.lo == 2.0);
  CHECK(c.hi == 3.0);
  const Interval i = shad_inverse({2.0, 3.0}, 2.0, 2.0);
  CHECK(i.lo == 1.0);
  CHECK(i.hi == 6.0);
}

TEST_CASE("inverse shadowing by index reversal") {
  // A pseudo-orbit of L^-1 read backwards is a pseudo-orbit of L with defect
  // at most ‖L‖δ; shadowing it with S and U swapped gives an orbit of L^-1.
  const LinOp op = diag2();
  const LinOp inv = inverse(op);
  const Splitting s_inv = coordinate_split_dense(2, {1}, NormTag::LInf);
  auto po = generate_bounded_pseudo_orbit(inv, s_inv, dv({1.0, 1.0}), 0, 40, 1e-3, 4);
  auto r_inv = shadow_splitting_series(inv, s_inv, po);
  PseudoOrbit<DenseVector> rev;
  rev.points.assign(po.points.rbegin(), po.points.rend());
  rev.measured_defect = pseudo_orbit_defect(op, rev.points);
  rev.delta = rev.measured_defect;
  CHECK(rev.measured_defect <= operator_norm(op) * 1e-3 + 1e-15);
  auto r = shadow_splitting_series(op, coordinate_split_dense(2, {0}, NormTag::LInf), rev);
  std::vector<DenseVector> back(r.trajectory.rbegin(), r.trajectory.rend());
  for (std::size_t i = 0; i + 1 < back.size(); ++i)
    CHECK(vec_norm(apply(inv, back[i]) - back[i + 1]) <= 1e-12 * std::max(1.0, vec_norm(back[i])));
  CHECK(r.sup_error <= 3.0 * rev.measured_defect + 1e-12);
  CHECK(r_inv.sup_error <= 3e-3 + 1e-12);
}

TEST_CASE("empirical estimate lies between the bounds") {
  const LinOp op = diag2();
  const auto b = shad_bounds(op, coordinate_split_dense(2, {0}, NormTag::LInf));
  // A finite window approaches the lower bound from below.
  const auto est = shad_estimate_linf({op, 32}, 64, 3);
  CHECK(est.estimate >= 1.95);
  CHECK(est.estimate <= b.upper + 1e-6);
}
