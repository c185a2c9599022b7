#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lindyn/linf.hpp"
#include "lindyn/shadowing.hpp"
#include "lindyn/splitting.hpp"

using namespace lindyn;
using namespace testing_helpers;

namespace {

double sup_norm(const std::vector<DenseVector>& xs) {
  double m = 0.0;
  for (const auto& x : xs) m = std::max(m, vec_norm(x));
  return m;
}

}  // namespace

TEST_CASE("linf_apply") {
  const WindowedLinf w{diag2(), 4};
  std::vector<DenseVector> orbit;
  DenseVector x(CVector::Ones(2), NormTag::LInf);
  x = apply_power(w.base_op, -4, x);
  for (int n = -4; n <= 4; ++n) {
    orbit.push_back(x);
    x = apply(w.base_op, x);
  }
  const auto out = linf_apply(w, orbit);
  CHECK(out.size() == 8);
  CHECK(sup_norm(out) <= 1e-12);
  const auto zero = linf_apply(w, std::vector<DenseVector>(9, DenseVector::zero(2, NormTag::LInf)));
  CHECK(sup_norm(zero) == 0.0);

  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    std::vector<DenseVector> xi;
    for (int i = 0; i < 9; ++i) xi.emplace_back(CVector::NullaryExpr(2, [&] { return Scalar(g(rng), 0.0); }), NormTag::LInf);
    CHECK(sup_norm(linf_apply(w, xi)) <= 3.0 * sup_norm(xi) + 1e-12);
  }
}

TEST_CASE("injectivity margin") {
  double prev = kInf;
  for (int N : {4, 8, 16}) {
    const double m = linf_injectivity_margin({rotation(), N});
    if (std::isfinite(prev)) CHECK(m <= 0.7 * prev);
    prev = m;
  }
  for (int N : {4, 8, 16}) CHECK(linf_injectivity_margin({diag2(), N}) >= 0.2);
  CHECK(linf_injectivity_margin({diag2(), 0}) == kInf);
}

TEST_CASE("shad estimates") {
  const auto d = shad_estimate_linf({diag2(), 32}, 64, 1);
  CHECK(d.estimate >= 1.95);
  CHECK(d.estimate <= 3.0);
  CHECK(d.estimate >= d.floor - 1e-9);
  const auto h = shad_estimate_linf({half_identity(), 32}, 64, 1);
  CHECK(h.estimate >= 1.9);
  CHECK(h.estimate <= 2.0 + 1e-9);
  const auto r = shad_estimate_linf({rotation(), 64}, 64, 1);
  CHECK(r.estimate >= 10.0);
}

TEST_CASE("estimate stays under the closed-form upper bound") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.2, 0.8);
  for (int t = 0; t < 10; ++t) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = u(rng);
    m(1, 1) = 1.0 / u(rng);
    const LinOp op = LinOp::dense(m, NormTag::LInf);
    const auto b = shad_bounds(op, coordinate_split_dense(2, {0}, NormTag::LInf));
    const auto est = shad_estimate_linf({op, 16}, 16, t);
    CHECK(est.estimate <= b.upper + 1e-6);
    CHECK(est.estimate >= est.floor - 1e-9);
  }
}

TEST_CASE("robustness scan") {
  const auto t = shadowing_robustness_scan(diag2(), {0.0, 0.01, 0.1}, 20, 7);
  CHECK(t.original_upper == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(t.certified_margin == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  for (const auto& row : t.rows) CHECK(row.pass);
  const auto wide = shadowing_robustness_scan(diag2(), {0.6}, 5, 7);
  CHECK(wide.rows.size() == 5);
}
