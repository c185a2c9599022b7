#include <random>

#include "doctest.h"
#include "helpers.hpp"

using namespace lindyn;
using namespace testing_helpers;

TEST_CASE("apply on the lockdown factors") {
  const LinOp R = LinOp::shift(1, NormTag::L1);
  CHECK(apply(R, e(1)) == e(0));
  const LinOp W = LinOp::diagonal(PiecewiseWeight::by_sign(0.5, 2.0), NormTag::L1);
  CHECK(apply(W, e(0)) == e(0, 0.5));
  CHECK(apply(W, e(3)) == e(3, 2.0));
  CVector v(3);
  v << 1.0, Scalar(0.0, 2.0), -3.0;
  CHECK(apply(LinOp::identity(3, NormTag::L2), DenseVector(v, NormTag::L2)).coords == v);
}

TEST_CASE("apply_power on lockdown") {
  const LinOp L = lockdown();
  // Hand iteration: e_0 -> 1/2 e_{-1} -> 1/4 e_{-2} -> 1/8 e_{-3}.
  CHECK(apply_power(L, 3, e(0)) == e(-3, 0.125));
  CHECK(apply_power(L, -3, e(0)) == e(3, 0.125));
  CHECK(apply_power(L, 0, e(5, 7.0)) == e(5, 7.0));
  CHECK(apply(L, e(1)) == e(0, 2.0));
}

TEST_CASE("apply_power composes exactly") {
  const LinOp L = lockdown();
  SparseBiSeq v = e(-2, 3.0) + e(0, -1.0) + e(4, Scalar(0.0, 1.0));
  for (long m = -6; m <= 6; ++m)
    for (long n = -6; n <= 6; ++n) CHECK(apply_power(L, m + n, v) == apply_power(L, m, apply_power(L, n, v)));
}

TEST_CASE("non-invertible operators reject negative powers") {
  const LinOp B = LinOp::backward_scaled(2.0, NormTag::L2);
  CHECK_FALSE(B.invertible());
  CHECK(error_of([&] { apply_power(B, -1, SparseBiSeq::basis(0, NormTag::L2)); }) == ErrorCode::NotInvertible);
  CHECK(error_of([&] { inverse(B); }) == ErrorCode::NotInvertible);
  CHECK(error_of([&] { apply(diag2(), e(0)); }) == ErrorCode::KindMismatch);
}

TEST_CASE("operator norms") {
  CHECK(operator_norm(LinOp::shift(1, NormTag::L1)) == 1.0);
  CHECK(operator_norm(LinOp::diagonal(PiecewiseWeight::by_sign(0.5, 2.0), NormTag::L1)) == 2.0);
  CHECK(operator_norm(diag2()) == 2.0);
  CHECK(operator_norm(lockdown()) == 2.0);
}

TEST_CASE("spectral radius") {
  CHECK(spectral_radius(diag2()).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(spectral_radius(rotation()).value == doctest::Approx(1.0).epsilon(1e-12));
  // Gelfand on the closed form ‖L^n|_S‖ = 2^-n.
  const auto r = gelfand([](int n) { return std::ldexp(1.0, -n); }, 64);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
  const auto rep = operator_report(lockdown());
  CHECK(rep.spectral_radius_estimate <= rep.op_norm + 1e-9);
}

TEST_CASE("inverses") {
  const LinOp Ri = inverse(LinOp::shift(1, NormTag::L1));
  CHECK(apply(Ri, e(0)) == e(1));
  const LinOp Di = inverse(diag2(NormTag::L2));
  CHECK(std::abs(Di.matrix()(0, 0) - Scalar(2.0)) < 1e-15);
  CHECK(std::abs(Di.matrix()(1, 1) - Scalar(0.5)) < 1e-15);
  const LinOp Li = inverse(lockdown());
  const SparseBiSeq v = e(-3, 2.0) + e(1, -1.0) + e(2, 0.25);
  CHECK(apply(Li, apply(lockdown(), v)) == v);
  CHECK(apply(lockdown(), apply(Li, v)) == v);
}

TEST_CASE("norm inequalities on random operators and vectors") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int t = 0; t < 1000; ++t) {
    const NormTag tag = t % 3 == 0 ? NormTag::L1 : (t % 3 == 1 ? NormTag::L2 : NormTag::LInf);
    if (t % 2 == 0) {
      const int d = 1 + t % 5;
      CMatrix m(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = Scalar(g(rng), g(rng));
      const LinOp op = LinOp::dense(m, tag);
      CVector x(d);
      for (int i = 0; i < d; ++i) x(i) = Scalar(g(rng), g(rng));
      const DenseVector v(x, tag);
      CHECK(vec_norm(apply(op, v)) <= operator_norm(op) * vec_norm(v) * (1 + 1e-12));
      CHECK(spectral_radius(op).value <= operator_norm(op) + 1e-9);
    } else {
      const LinOp a = LinOp::diagonal(PiecewiseWeight::by_sign(u(rng), u(rng)), tag);
      const LinOp s = LinOp::shift(static_cast<long>(t % 7) - 3, tag);
      const LinOp op = LinOp::compose({s, a, s});
      SparseBiSeq v(tag);
      for (int k = -4; k <= 4; ++k) v.set(k, Scalar(g(rng), g(rng)));
      CHECK(vec_norm(apply(op, v)) <= operator_norm(op) * vec_norm(v) * (1 + 1e-12));
      CHECK(operator_norm(op) <= operator_norm(a) * operator_norm(s) * operator_norm(s) * (1 + 1e-12));
      CHECK(spectral_radius(op).value <= operator_norm(op) + 1e-9);
    }
  }
}
