#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lindyn/splitting.hpp"
#include "lindyn/suite.hpp"

using namespace lindyn;
using namespace testing_helpers;

namespace {

void check_projections(const Splitting& s) {
  const int d = s.dim;
  const CMatrix I = CMatrix::Identity(d, d);
  CHECK((s.P_S + s.P_U - I).norm() <= 1e-10);
  CHECK((s.P_S * s.P_S - s.P_S).norm() <= 1e-10);
  CHECK((s.P_U * s.P_U - s.P_U).norm() <= 1e-10);
  CHECK((s.P_S * s.P_U).norm() <= 1e-10);
}

}  // namespace

TEST_CASE("spectral split of diag(1/2,2)") {
  const Splitting s = spectral_split(diag2());
  CHECK(s.dim_S() == 1);
  CHECK(s.dim_U() == 1);
  CHECK(s.proj_S_norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.proj_U_norm == doctest::Approx(1.0).epsilon(1e-12));
  check_projections(s);
  CHECK(std::abs(s.P_S(0, 0) - Scalar(1.0)) < 1e-12);
}

TEST_CASE("spectral split rejects the rotation") {
  CHECK(error_of([] { spectral_split(rotation()); }) == ErrorCode::CircleEigenvalue);
}

TEST_CASE("spectral split of an upper triangular matrix") {
  CMatrix m(2, 2);
  m << 1.5, 1.0, 0.0, 1.0 / 3.0;
  const Splitting s = spectral_split(LinOp::dense(m, NormTag::L2));
  check_projections(s);
  // Eigenvectors (1,0) for 3/2 and (1, 1/3 - 3/2) = (6, -7)/.. for 1/3; P_S projects onto the
  // second along the first.
  CVector vs(2);
  vs << 1.0, -7.0 / 6.0;
  CHECK((s.P_S * vs - vs).norm() <= 1e-12);
  CVector vu(2);
  vu << 1.0, 0.0;
  CHECK((s.P_S * vu).norm() <= 1e-12);
}

TEST_CASE("coordinate splits are valid") {
  for (NormTag tag : {NormTag::L1, NormTag::L2, NormTag::LInf}) {
    check_projections(coordinate_split_dense(3, {0, 2}, tag));
    check_projections(coordinate_split_all_dense(3, tag));
  }
  Splitting bad = coordinate_split_dense(2, {0}, NormTag::L2);
  bad.P_S(0, 1) = 0.3;
  CHECK(error_of([&] { validate_splitting(bad); }) == ErrorCode::InvalidSplitting);
}

TEST_CASE("classify lockdown") {
  const auto rep = classify(lockdown(), coordinate_split(0, NormTag::L1));
  CHECK(rep.cls == HypClass::GeneralizedHyperbolic);
  CHECK(rep.r_S == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.r_U_inv == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.invariance.LS_in_S);
  CHECK(rep.invariance.Linv_U_in_U);
  CHECK_FALSE(rep.invariance.S_in_LS);
  REQUIRE(rep.witness.has_value());
  const SparseBiSeq& w = std::get<SparseBiSeq>(*rep.witness);
  CHECK(!w.empty());
  // Witness lies in S and has a preimage in U.
  CHECK(w.max_index() <= 0);
  const SparseBiSeq pre = apply(inverse(lockdown()), w);
  CHECK(pre.min_index() > 0);
}

TEST_CASE("lockdown class is invariant under conjugation by shifts") {
  for (long m = -5; m <= 5; ++m) {
    const LinOp S = LinOp::shift(m, NormTag::L1);
    const LinOp conj = LinOp::compose({S, lockdown(), inverse(S)});
    // S_m maps index k to k - m, so the cutoff moves from 0 to -m.
    const auto rep = classify(conj, coordinate_split(-m, NormTag::L1));
    CHECK(rep.cls == HypClass::GeneralizedHyperbolic);
    CHECK(rep.witness.has_value());
  }
}

TEST_CASE("classify diag and tucides") {
  CHECK(classify(diag2(), spectral_split(diag2())).cls == HypClass::Hyperbolic);
  const auto rep = classify(tucides(), coordinate_split_all(NormTag::L1));
  CHECK(rep.cls == HypClass::Undetermined);
  CHECK(rep.r_S > 1.0 - 1e-6);
  CHECK(rep.r_S <= 1.0);
}

TEST_CASE("perseguido check") {
  const LinOp W = LinOp::diagonal(PiecewiseWeight::by_sign(0.5, 2.0), NormTag::L1);
  const LinOp R = LinOp::shift(1, NormTag::L1);
  const auto rep = perseguido_check(W, R, coordinate_split(0, NormTag::L1));
  CHECK(rep.cls == HypClass::GeneralizedHyperbolic);
  REQUIRE(rep.witness.has_value());
  CHECK(std::get<SparseBiSeq>(*rep.witness) == e(0));

  const LinOp C = LinOp::diagonal(PiecewiseWeight::constant(0.5), NormTag::L1);
  const auto all = perseguido_check(C, LinOp::shift(0, NormTag::L1), coordinate_split_all(NormTag::L1));
  CHECK(all.cls == HypClass::GeneralizedHyperbolic);
  CHECK_FALSE(all.witness.has_value());

  const LinOp W2 = LinOp::diagonal(PiecewiseWeight::by_sign(2.0, 0.5), NormTag::L1);
  CHECK(error_of([&] { perseguido_check(W2, R, coordinate_split(0, NormTag::L1)); }) == ErrorCode::HypothesisFailed);
}

TEST_CASE("hyperbolic classification agrees with the eigenvalue test") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 4;
    const CMatrix m = random_hyperbolic_matrix(d, 0.05, rng);
    const LinOp op = LinOp::dense(m, NormTag::L2);
    const Splitting s = spectral_split(op);
    check_projections(s);
    const auto rep = classify(op, s);
    CHECK(rep.cls == HypClass::Hyperbolic);
    // Invariant in both directions, so L(S) = S and L(U) = U.
    CHECK(rep.invariance.S_in_LS);
    CHECK(rep.invariance.LU_in_U);
    CHECK(rep.r_S < 1.0);
    CHECK(rep.r_U_inv < 1.0);
  }
}
