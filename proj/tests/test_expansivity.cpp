#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lindyn/expansivity.hpp"
#include "lindyn/splitting.hpp"
#include "lindyn/suite.hpp"

using namespace lindyn;
using namespace testing_helpers;

TEST_CASE("eigen test") {
  CHECK(expansive_eigen_test(diag2()) == ExpansiveVerdict::Expansive);
  CHECK(expansive_eigen_test(rotation()) == ExpansiveVerdict::NotExpansive);
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 0.5;
  m(1, 1) = 1.0 + 1e-9;
  CHECK(expansive_eigen_test(LinOp::dense(m, NormTag::L2), 1e-6) == ExpansiveVerdict::NotExpansive);
  CHECK(expansive_eigen_test(lockdown()) == ExpansiveVerdict::NotApplicable);
}

TEST_CASE("uniform expansivity search") {
  const auto samples = default_samples(2, NormTag::LInf, 1);
  const auto d = uniform_expansivity_search(diag2(), 8, samples);
  REQUIRE(d.m.has_value());
  CHECK(*d.m <= 2);
  // Basis samples need exactly m = 1: ‖L e_1‖ = 2, ‖L^-1 e_0‖ = 2.
  CHECK(d.first_m[0] == 1);
  CHECK(d.first_m[1] == 1);

  const auto r = uniform_expansivity_search(rotation(), 16, samples);
  CHECK_FALSE(r.m.has_value());

  const auto seq = default_sequence_samples(NormTag::L1, 1);
  const auto l = uniform_expansivity_search(lockdown(), 8, seq);
  // e_0: ‖L e_0‖ = 1/2, ‖L^-1 e_0‖ = 1/2; ‖L^-2 e_0‖ = 1/4 ... and e_1: ‖L e_1‖ = 2.
  CHECK(l.first_m[static_cast<std::size_t>(8 + 1)] == 1);
  for (const auto& m : l.first_m)
    if (m) CHECK(*m <= 8);
}

TEST_CASE("window growth") {
  const auto d = central_window_growth(diag2(NormTag::L2), {0, 1, 2, 4, 8});
  CHECK(d[0].value == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t i = 1; i < d.size(); ++i) CHECK(d[i].value >= std::ldexp(1.0, d[i].N) / std::sqrt(2.0) * (1 - 1e-6));
  const auto r = central_window_growth(rotation(), {0, 4, 16, 64});
  for (const auto& g : r) CHECK(g.value == doctest::Approx(1.0).epsilon(1e-9));
  const auto li = central_window_growth(diag2(), {3});
  CHECK(li[0].exact);
  CHECK(li[0].value == doctest::Approx(8.0).epsilon(1e-8));
  CHECK(li[0].lower_bound <= li[0].value);
}

TEST_CASE("ecs membership") {
  const LinOp op = diag2();
  CHECK(ecs_membership(op, DenseVector::basis(2, 0, NormTag::LInf), 1.0, 0.5, 50));
  CHECK_FALSE(ecs_membership(op, DenseVector::basis(2, 1, NormTag::LInf), 1.0, 0.5, 50));
  CHECK(ecs_membership(lockdown(), e(0), 2.0, 0.5, 50));
  CHECK_FALSE(ecs_membership(lockdown(), e(1), 2.0, 0.5, 50));
}

TEST_CASE("every vector splits into stable and unstable evidence") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int t = 0; t < 30; ++t) {
    const int d = 2 + t % 3;
    const LinOp op = LinOp::dense(random_hyperbolic_matrix(d, 0.1, rng), NormTag::L2);
    const Splitting s = spectral_split(op);
    const auto cert = ecs_certificate(op, s, 50);
    REQUIRE(cert.has_value());
    const auto cert_u = ecs_certificate(inverse(op), spectral_split(inverse(op)), 50);
    REQUIRE(cert_u.has_value());
    CVector x(d);
    for (int i = 0; i < d; ++i) x(i) = g(rng);
    const DenseVector v(x, NormTag::L2);
    const DenseVector xs = project_S(s, v), xu = project_U(s, v);
    CHECK(vec_norm(xs + xu - v) <= 1e-10 * vec_norm(v));
    // Plain iteration amplifies the rounding-level U part of P_S x by ρ(L)^n, so
    // the horizon keeps ρ^n/β^n under 1e9.
    auto horizon = [](const LinOp& l, double beta) {
      const double rho = spectral_radius(l).value;
      return std::min(50, static_cast<int>(9.0 / std::log10(std::max(2.0, rho / beta))));
    };
    const int hs = horizon(op, cert->beta), hu = horizon(inverse(op), cert_u->beta);
    if (vec_norm(xs) > 0) CHECK(ecs_membership(op, xs, cert->c, cert->beta, hs));
    if (vec_norm(xu) > 0) CHECK(ecs_membership(inverse(op), xu, cert_u->c, cert_u->beta, hu));
    CHECK(vec_norm(apply_power(op, hs, xs)) <= cert->c * std::pow(cert->beta, hs) * vec_norm(xs) * (1 + 1e-9));
  }
}

TEST_CASE("finite-dimensional equivalence on random matrices") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    const bool hyp = t % 2 == 0;
    const CMatrix m = hyp ? random_hyperbolic_matrix(4, 0.05, rng) : random_circle_matrix(4, rng);
    const auto o = thA1_check(LinOp::dense(m, NormTag::LInf));
    CHECK(o.agree());
    CHECK(o.eigen_hyperbolic == hyp);
  }
}
