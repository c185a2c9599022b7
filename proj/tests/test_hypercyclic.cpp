#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lindyn/hypercyclic.hpp"

using namespace lindyn;
using namespace testing_helpers;

namespace {

SparseBiSeq b(long k, Scalar v = 1.0) { return SparseBiSeq::basis(k, NormTag::L2, v); }

}  // namespace

TEST_CASE("rolewicz operator") {
  const LinOp L = rolewicz(2.0);
  CHECK(apply(L, b(1)) == b(0, 2.0));
  CHECK(apply(L, b(0)).empty());
  const CriterionData cd = rolewicz_criterion(2.0);
  const SparseBiSeq s3 = cd.right_inverse(3, b(0));
  CHECK(s3 == b(3, 0.125));
  CHECK(apply_power(L, 3, s3) == b(0));
  CHECK(error_of([] { rolewicz(1.0); }) == ErrorCode::BadFactor);
  CHECK(error_of([] { rolewicz(0.5); }) == ErrorCode::BadFactor);
}

TEST_CASE("right inverses are exact and decay") {
  const CriterionData cd = rolewicz_criterion(2.0);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int t = 0; t < 50; ++t) {
    SparseBiSeq y(NormTag::L2);
    for (long k = 0; k < 5; ++k) y.set(k, Scalar(g(rng), g(rng)));
    for (long n : {1L, 5L, 20L}) {
      const SparseBiSeq s = cd.right_inverse(n, y);
      CHECK(vec_norm(apply_power(cd.op, n, s) - y) <= 1e-12 * vec_norm(y));
      CHECK(vec_norm(s) == doctest::Approx(std::pow(2.0, -static_cast<double>(n)) * vec_norm(y)).epsilon(1e-14));
    }
  }
}

TEST_CASE("criterion witness") {
  const CriterionData cd = rolewicz_criterion(2.0);
  const auto one = criterion_witness(cd, {b(0)}, 1e-6);
  REQUIRE(one.visit_times.size() == 1);
  CHECK(one.visit_errors[0] == 0.0);

  const auto two = criterion_witness(cd, {b(0), b(0) + b(1)}, 1e-6);
  REQUIRE(two.visit_times.size() == 2);
  CHECK(two.visit_times[1] - two.visit_times[0] >= 20 + 1);
  // Independent replay of every visit.
  const std::vector<SparseBiSeq> targets = {b(0), b(0) + b(1)};
  for (std::size_t j = 0; j < 2; ++j) {
    const double err = vec_norm(apply_power(cd.op, two.visit_times[j], two.seed) - targets[j]);
    CHECK(err <= 1e-6);
    CHECK(err == doctest::Approx(two.visit_errors[j]).epsilon(1e-9));
  }

  CHECK(error_of([&] { criterion_witness(cd, {b(0, 1e6), b(1)}, 1e-12, 30); }) == ErrorCode::CannotSeparate);
}

TEST_CASE("adjoint obstruction") {
  const auto d = adjoint_eigen_obstruction(diag2());
  CHECK(std::abs(std::abs(d.eigenvalue) - 2.0) < 1e-12);
  CHECK(d.kind == ModulusKind::Growing);
  CHECK(d.replay_ok);
  const auto r = adjoint_eigen_obstruction(rotation());
  CHECK(std::abs(std::abs(r.eigenvalue) - 1.0) < 1e-12);
  CHECK(std::abs(r.eigenvalue.real()) < 1e-12);
  CHECK(r.kind == ModulusKind::Constant);
  CHECK(r.replay_ok);
  CMatrix c(1, 1);
  c(0, 0) = Scalar(0.3, 0.4);
  const auto s = adjoint_eigen_obstruction(LinOp::dense(c, NormTag::L2));
  CHECK(std::abs(s.eigenvalue - std::conj(c(0, 0))) < 1e-15);
  CHECK(s.kind == ModulusKind::Decaying);
}

TEST_CASE("adjoint obstruction on random matrices") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    const int d = 1 + t % 4;
    CMatrix m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = Scalar(g(rng), g(rng));
    const auto a = adjoint_eigen_obstruction(LinOp::dense(m, NormTag::L2));
    CHECK(a.replay_ok);
    const CVector& phi = a.functional.coords;
    CHECK((m.adjoint() * phi - a.eigenvalue * phi).norm() <= 1e-9 * m.norm());
  }
}
