#include <random>
#include <thread>

#include "doctest.h"
#include "helpers.hpp"
#include "lindyn/shadowing.hpp"
#include "lindyn/splitting.hpp"
#include "lindyn/stability.hpp"

using namespace lindyn;
using namespace testing_helpers;

namespace {

Point pt(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

Splitting diag_split() { return coordinate_split_dense(2, {0}, NormTag::LInf); }

LipschitzPerturbation small_bump() {
  return LipschitzPerturbation::bump_with_bounds(pt(0, 0), pt(1, 1), 0.01, 0.01, NormTag::LInf);
}

}  // namespace

TEST_CASE("bump perturbation certificates") {
  const auto beta = small_bump();
  CHECK(beta.sup_norm <= 0.01 + 1e-15);
  CHECK(beta.lip_const <= 0.01 + 1e-15);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 1000; ++t) {
    const Point x = pt(u(rng), u(rng)), y = pt(u(rng), u(rng));
    const Point bx = beta.evaluate(x);
    CHECK(norm(bx, NormTag::LInf) <= beta.sup_norm * (1 + 1e-12));
    CHECK(norm(Point(bx - beta.evaluate(y)), NormTag::LInf) <= beta.lip_const * norm(Point(x - y), NormTag::LInf) * (1 + 1e-9));
    if (norm(x, NormTag::LInf) > beta.support_radius) CHECK(norm(bx, NormTag::LInf) == 0.0);
  }
  // Closed-form slope of (1 - t²)² at t = 1/√3.
  CHECK(kBumpSlopeMax == doctest::Approx(8.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-15));
}

TEST_CASE("gamma of zero and of a constant field") {
  const LinOp op = diag2();
  const Splitting s = diag_split();
  const auto R = linear_map(op);
  auto zero = [](const Point&) { return Point(Point::Zero(2)); };
  CHECK(gamma_eval(op, s, zero, 0.0, R, pt(0.3, -0.2), 1e-14).norm() == 0.0);
  // Constant v: Σ L^k P_S v - Σ_{k>=1} L^-k P_U v = (2 v_0, -v_1) for diag(1/2, 2).
  const Point v = pt(0.4, -0.6);
  auto cst = [v](const Point&) { return v; };
  const Point g = gamma_eval(op, s, cst, norm(v, NormTag::LInf), R, pt(1.0, 1.0), 1e-14);
  CHECK(std::abs(g(0) - Scalar(0.8)) < 1e-12);
  CHECK(std::abs(g(1) - Scalar(0.6)) < 1e-12);
  // One coordinate of the orbit of (1e6, 1e6) stays at least 1e6 in both time
  // directions, so the bump is never evaluated inside its support.
  const auto beta = small_bump();
  CHECK(gamma_eval(op, s, beta.evaluate, beta.sup_norm, R, pt(1e6, 1e6), 1e-14).norm() == 0.0);
  // Along the stable axis the forward orbit reaches the support after about 20
  // steps and picks up a 2^-20-sized unstable contribution.
  const double far = gamma_eval(op, s, beta.evaluate, beta.sup_norm, R, pt(1e6, 0.0), 1e-14).norm();
  CHECK(far > 0.0);
  CHECK(far <= 0.01 * std::ldexp(1.0, -18));
}

TEST_CASE("conjugacy for the 0.01 bump") {
  const LinOp op = diag2();
  const auto beta = small_bump();
  const auto f = conjugacy_solve(op, diag_split(), beta, 1e-8);
  CHECK(f.contraction_factor() <= 0.03 + 1e-9);
  CHECK(f.kernel().gamma_bound == doctest::Approx(3.0).epsilon(1e-12));
  const auto pts = stability_test_points(2, 100, 2.0);
  for (const auto& x : pts) CHECK(norm(f.h(x), NormTag::LInf) <= 0.03 + 1e-8);
  CHECK(conjugacy_residual(f, pts) <= 1e-6);
  for (const auto& x : {pts[3], pts[40], pts[77]}) {
    const auto tr = f.trace(x);
    for (double r : tr.ratios) CHECK(r <= f.contraction_factor() + 1e-9);
  }
  const auto fi = inverse_conjugacy(op, diag_split(), beta);
  CHECK(inverse_residual(f, fi, pts) <= 1e-5);
  CHECK(inverse_residual(fi, f, pts) <= 1e-5);
  for (const auto& x : pts) CHECK(norm(fi.h(x), NormTag::LInf) <= fi.kernel().gamma_bound * beta.sup_norm + 1e-8);
}

TEST_CASE("zero perturbation gives the identity") {
  const auto z = LipschitzPerturbation::zero(2);
  const auto f = conjugacy_solve(diag2(), diag_split(), z, 1e-8);
  const auto fi = inverse_conjugacy(diag2(), diag_split(), z);
  for (const auto& x : stability_test_points(2, 20, 3.0)) {
    CHECK(f.h(x).norm() == 0.0);
    CHECK(fi.h(x).norm() == 0.0);
  }
  CHECK(conjugacy_residual(f, stability_test_points(2, 20, 3.0)) == 0.0);
}

TEST_CASE("large Lipschitz constant is rejected") {
  const auto beta = LipschitzPerturbation::bump_with_bounds(pt(0, 0), pt(1, 0), 0.01, 0.5, NormTag::LInf);
  CHECK(error_of([&] { conjugacy_solve(diag2(), diag_split(), beta, 1e-8); }) == ErrorCode::NotContraction);
}

TEST_CASE("escaping point has tiny residual") {
  const auto f = conjugacy_solve(diag2(), diag_split(), small_bump(), 1e-8);
  CHECK(conjugacy_residual(f, {pt(0.0, 1e5)}) <= 1e-14);
}

TEST_CASE("memo is transparent under concurrency") {
  const auto f = conjugacy_solve(diag2(), diag_split(), small_bump(), 1e-8);
  const auto pts = stability_test_points(2, 40, 1.5);
  std::vector<Point> serial;
  {
    const auto fresh = conjugacy_solve(diag2(), diag_split(), small_bump(), 1e-8);
    for (const auto& x : pts) serial.push_back(fresh.h(x));
  }
  std::vector<std::vector<Point>> out(4);
  std::vector<std::thread> ts;
  for (int k = 0; k < 4; ++k)
    ts.emplace_back([&, k] {
      for (const auto& x : pts) out[k].push_back(f.h(x));
    });
  for (auto& t : ts) t.join();
  for (const auto& o : out)
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(o[i] == serial[i]);
}

TEST_CASE("local linearization") {
  const auto F = MapRule::diag_poly({0.5, 2.0}, {0.005, 0.0}, {0.0, -0.005});
  const auto gh = grobman_hartman_local(F, pt(0, 0), 1.0, 1e-8, NormTag::LInf);
  CHECK(gh.linearization_radius >= 0.05);
  CHECK(gh.residual <= 1e-5);
  // Independent replay of the conjugacy on fresh points inside the ball.
  const double r = gh.linearization_radius;
  for (const auto& x : stability_test_points(2, 30, r * 0.9)) {
    const Point lhs = gh.field.H(Point(gh.field.base_op().matrix() * x));
    const Point Hx = gh.field.H(x);
    const Point rhs = F.f(Hx);
    CHECK(norm(Point(lhs - rhs), NormTag::LInf) <= 1e-5);
  }

  const auto lin = grobman_hartman_local(MapRule::diag_poly({0.5, 2.0}, {0.0, 0.0}, {0.0, 0.0}), pt(0, 0), 1.0, 1e-8,
                                         NormTag::LInf);
  for (const auto& x : stability_test_points(2, 10, 0.5)) CHECK(lin.field.h(x).norm() == 0.0);

  CMatrix rot(2, 2);
  rot << 0.0, -1.0, 1.0, 0.0;
  CHECK(error_of([&] { grobman_hartman_local(MapRule::linear(rot), pt(0, 0), 1.0, 1e-8, NormTag::LInf); }) ==
        ErrorCode::NotCertified);
  CHECK(error_of([&] { grobman_hartman_local(F, pt(1, 1), 1.0, 1e-8, NormTag::LInf); }) ==
        ErrorCode::HypothesisFailed);
}

TEST_CASE("car verification") {
  const auto h = car_verify(half_identity(), 50, 100, 3);
  CHECK(h.gamma == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(h.max_ratio <= 2.0 + 1e-12);
  CHECK(h.violations == 0);
  CHECK(h.shadow_ok);
  CHECK(h.shadow_sup_error <= h.gamma * h.shadow_delta + 1e-12);

  // x_k = e_1 for L = diag(1/2, 1/3): Σ L^k e_1 = 2 e_1.
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 0.5;
  m(1, 1) = 1.0 / 3.0;
  const LinOp op = LinOp::dense(m, NormTag::LInf);
  CVector acc = CVector::Zero(2), x = CVector::Unit(2, 0);
  for (int k = 0; k < 200; ++k) {
    acc += x;
    x = m * x;
  }
  CHECK(norm(acc, NormTag::LInf) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(car_verify(op, 10, 50, 1).gamma >= 2.0 - 1e-12);

  CHECK(error_of([] { car_verify(rotation(), 5, 10, 1); }) == ErrorCode::NotContractiveSpectrum);
}
