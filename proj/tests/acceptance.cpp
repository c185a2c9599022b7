// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "lindyn/expansivity.hpp"
#include "lindyn/homoclinic.hpp"
#include "lindyn/hypercyclic.hpp"
#include "lindyn/linf.hpp"
#include "lindyn/shadowing.hpp"
#include "lindyn/splitting.hpp"
#include "lindyn/stability.hpp"
#include "lindyn/suite.hpp"

using namespace lindyn;
using namespace testing_helpers;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) detail << "failed: ";
      else detail << "; ";
      detail << what;
      ok = false;
    }
  }
};

int failures = 0;

void criterion(int id, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception ") + e.what());
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(dt < budget_s, "runtime " + std::to_string(dt) + " s over budget");
  if (!o.ok) ++failures;
  std::printf("%s criterion %2d  %7.3f s / %4.0f s  %s\n", o.ok ? "PASS" : "FAIL", id, dt, budget_s,
              o.detail.str().c_str());
  std::fflush(stdout);
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

DenseVector dense(const CVector& v, NormTag tag) { return DenseVector(v, tag); }

Point pt(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

double min_circle_distance(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  double g = kInf;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) g = std::min(g, std::abs(std::abs(es.eigenvalues()(i)) - 1.0));
  return g;
}

}  // namespace

int main() {
  criterion(1, 5.0, [](Outcome& o) {
    const LinOp op = diag2();
    const auto b = shad_bounds(op, coordinate_split_dense(2, {0}, NormTag::LInf));
    o.require(std::abs(b.upper - 3.0) <= 1e-9, "upper " + num(b.upper));
    o.require(std::abs(b.lower - 2.0) <= 1e-9, "lower " + num(b.lower));
    const auto est = shad_estimate_linf({op, 32}, 64, 2024);
    o.require(est.estimate >= 1.95 && est.estimate <= 3.0, "estimate " + num(est.estimate));
    o.detail << "upper " << num(b.upper) << " lower " << num(b.lower) << " estimate(N=32) " << num(est.estimate);
  });

  criterion(2, 10.0, [](Outcome& o) {
    const LinOp op = diag2();
    const Splitting s = coordinate_split_dense(2, {0}, NormTag::LInf);
    const double delta = 1e-3;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst_series = 0.0, worst_gap = -kInf;
    for (int t = 0; t < 100; ++t) {
      CVector seed(2);
      seed << u(rng), u(rng);
      const auto po = generate_bounded_pseudo_orbit(op, s, dense(seed, NormTag::LInf), 0, 200, delta, rng());
      o.require(po.measured_defect <= delta, "pseudo-orbit defect");
      const auto series = shadow_splitting_series(op, s, po);
      const auto window = shadow_window_solve(op, po);
      worst_series = std::max(worst_series, series.sup_error);
      worst_gap = std::max(worst_gap, window.sup_error - series.sup_error);
    }
    o.require(worst_series <= 3.0 * delta, "series sup_error " + num(worst_series));
    o.require(worst_gap <= 1e-6, "window minus series " + num(worst_gap));

    const LinOp half = half_identity();
    double worst_contraction = 0.0;
    for (int t = 0; t < 100; ++t) {
      CVector seed(2);
      seed << u(rng), u(rng);
      const auto po = generate_pseudo_orbit(half, dense(seed, NormTag::LInf), 0, 200, delta, rng());
      worst_contraction = std::max(worst_contraction, shadow_contraction(half, po).sup_error);
    }
    o.require(worst_contraction <= delta / (1.0 - 0.5), "contraction sup_error " + num(worst_contraction));
    o.detail << "max series/delta " << num(worst_series / delta) << " max window-series " << num(worst_gap)
             << " max contraction/delta " << num(worst_contraction / delta);
  });

  criterion(3, 1.0, [](Outcome& o) {
    const LinOp op = lockdown();
    const Splitting s = coordinate_split(0, NormTag::L1);
    const auto c = classify(op, s);
    o.require(c.cls == HypClass::GeneralizedHyperbolic, std::string("class ") + hyp_class_name(c.cls));
    o.require(c.witness.has_value(), "no classify witness");
    if (c.witness) {
      const SparseBiSeq& w = std::get<SparseBiSeq>(*c.witness);
      // Nonzero, in S, and its preimage lies in U.
      o.require(!w.empty(), "zero witness");
      o.require(project_U(s, w).empty(), "witness not in S");
      o.require(project_S(s, apply(inverse(op), w)).empty(), "witness not in L(U)");
    }
    const auto h = hyperbolic_iff_trivial_H(op, s, 40);
    o.require(!h.hyperbolic_consistent, "verdict Hyperbolic-consistent");
    o.require(h.witness.has_value(), "no homoclinic witness");
    o.require(h.forward_decay.size() == 41 && h.backward_decay.size() == 41, "decay length");
    int exact = 0;
    for (std::size_t n = 0; n < h.forward_decay.size() && n < h.backward_decay.size(); ++n)
      if (h.forward_decay[n] == std::ldexp(1.0, -static_cast<int>(n)) &&
          h.backward_decay[n] == std::ldexp(1.0, -static_cast<int>(n)))
        ++exact;
    o.require(exact == 41, "exact decay terms " + std::to_string(exact));
    o.detail << "GeneralizedHyperbolic, Not-hyperbolic, " << exact << "/41 decay terms equal 2^-n";
  });

  criterion(4, 10.0, [](Outcome& o) {
    const LinOp op = rotation();
    double prev_est = 0.0, prev_margin = 0.0, worst_ratio = 0.0;
    std::ostringstream trail;
    for (int N : {8, 16, 32, 64}) {
      const double est = shad_estimate_linf({op, N}, 64, 99).estimate;
      const double margin = linf_injectivity_margin({op, N});
      o.require(est >= prev_est, "estimate decreased at N=" + std::to_string(N));
      if (prev_margin > 0.0) worst_ratio = std::max(worst_ratio, margin / prev_margin);
      prev_est = est;
      prev_margin = margin;
      trail << " N=" << N << ":" << num(est);
    }
    o.require(prev_est >= 10.0, "estimate at N=64 " + num(prev_est));
    o.require(worst_ratio <= 0.7, "margin ratio " + num(worst_ratio));
    o.detail << "estimates" << trail.str() << " max margin ratio " << num(worst_ratio);
  });

  criterion(5, 60.0, [](Outcome& o) {
    std::mt19937_64 rng(5);
    int disagreements = 0, hyperbolic = 0;
    auto one = [&](const CMatrix& m) {
      const LinOp op = LinOp::dense(m, NormTag::L2);
      const bool eig = min_circle_distance(m) > 1e-6;
      bool finite = false;
      try {
        finite = std::isfinite(shad_bounds(op, spectral_split(op)).upper);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::CircleEigenvalue && e.code() != ErrorCode::NotCertified) throw;
      }
      const bool expansive = expansive_eigen_test(op) == ExpansiveVerdict::Expansive;
      if (!(eig == finite && finite == expansive)) ++disagreements;
      hyperbolic += eig ? 1 : 0;
    };
    for (int t = 0; t < 200; ++t) one(random_hyperbolic_matrix(4, 0.05, rng));
    o.require(hyperbolic == 200, "generator produced a non-hyperbolic case");
    // The converse direction on matrices with a unit-circle pair.
    for (int t = 0; t < 200; ++t) one(random_circle_matrix(4, rng));
    o.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
    o.detail << "400 cases (200 margin >= 0.05, 200 with a circle pair), " << disagreements << " disagreements";
  });

  criterion(6, 30.0, [](Outcome& o) {
    const LinOp op = diag2();
    const Splitting s = coordinate_split_dense(2, {0}, NormTag::LInf);
    const auto beta = LipschitzPerturbation::bump_with_bounds(pt(0, 0), pt(1, 1), 0.01, 0.01, NormTag::LInf);
    o.require(beta.sup_norm <= 0.01 && beta.lip_const <= 0.01, "bump exceeds 0.01");
    const auto f = conjugacy_solve(op, s, beta, 1e-8);
    o.require(f.contraction_factor() <= 0.03 + 1e-9, "factor " + num(f.contraction_factor()));
    const auto pts = stability_test_points(2, 100, 2.0);
    double hmax = 0.0, worst_ratio = 0.0;
    for (const auto& x : pts) hmax = std::max(hmax, norm(f.h(x), NormTag::LInf));
    for (std::size_t i = 0; i < pts.size(); i += 10)
      for (double r : f.trace(pts[i]).ratios) worst_ratio = std::max(worst_ratio, r);
    o.require(hmax <= 0.03, "sup h " + num(hmax));
    o.require(worst_ratio <= 0.03 + 1e-9, "observed Picard ratio " + num(worst_ratio));
    const double res = conjugacy_residual(f, pts);
    o.require(res <= 1e-6, "residual " + num(res));
    const auto fi = inverse_conjugacy(op, s, beta);
    const double inv = inverse_residual(f, fi, pts);
    o.require(inv <= 1e-5, "H'H - I " + num(inv));
    o.detail << "factor " << num(f.contraction_factor()) << " observed " << num(worst_ratio) << " sup h " << num(hmax)
             << " residual " << num(res) << " H'H-I " << num(inv);
  });

  criterion(7, 30.0, [](Outcome& o) {
    const auto F = MapRule::diag_poly({0.5, 2.0}, {0.005, 0.0}, {0.0, -0.005});
    const auto gh = grobman_hartman_local(F, pt(0, 0), 1.0, 1e-8, NormTag::LInf);
    o.require(gh.linearization_radius >= 0.05, "radius " + num(gh.linearization_radius));
    o.require(gh.residual <= 1e-5, "residual " + num(gh.residual));
    // Replay H∘DF = F∘H at fresh points against F itself.
    double replay = 0.0, hmax = 0.0;
    for (const auto& x : stability_test_points(2, 50, gh.linearization_radius * 0.9)) {
      hmax = std::max(hmax, norm(gh.field.h(x), NormTag::LInf));
      const Point lhs = gh.field.H(Point(gh.field.base_op().matrix() * x));
      replay = std::max(replay, norm(Point(lhs - F.f(gh.field.H(x))), NormTag::LInf));
    }
    o.require(replay <= 1e-5, "replay " + num(replay));
    o.require(hmax > 0.0, "h vanishes on the ball");
    o.detail << "radius " << num(gh.linearization_radius) << " residual " << num(gh.residual) << " replay "
             << num(replay) << " sup h " << num(hmax);
  });

  criterion(8, 5.0, [](Outcome& o) {
    const CriterionData cd = rolewicz_criterion(2.0);
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    std::vector<SparseBiSeq> targets;
    for (int j = 0; j < 3; ++j) {
      SparseBiSeq y(NormTag::L2);
      for (long k = 0; k < 4; ++k) y.set(k, g(rng));
      targets.push_back(y);
    }
    const auto w = criterion_witness(cd, targets, 1e-6);
    o.require(w.visit_times.size() == 3, "visit count");
    double worst = 0.0;
    for (std::size_t j = 0; j < w.visit_times.size() && j < targets.size(); ++j) {
      SparseBiSeq orbit = w.seed;
      for (long n = 0; n < w.visit_times[j]; ++n) orbit = apply(cd.op, orbit);
      const double err = vec_norm(orbit - targets[j]);
      worst = std::max(worst, err);
      o.require(err <= 1e-6, "replayed visit error " + num(err));
      o.require(w.visit_errors[j] <= 1e-6, "reported visit error " + num(w.visit_errors[j]));
    }
    int obstruction_fail = 0;
    for (int t = 0; t < 100; ++t) {
      const int d = 1 + t % 4;
      CMatrix m(d, d);
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) m(i, k) = Scalar(g(rng), t % 2 ? g(rng) : 0.0);
      const auto a = adjoint_eigen_obstruction(LinOp::dense(m, NormTag::L2));
      if (!a.replay_ok) ++obstruction_fail;
    }
    o.require(obstruction_fail == 0, std::to_string(obstruction_fail) + " obstruction failures");
    o.detail << "visits";
    for (long n : w.visit_times) o.detail << " " << n;
    o.detail << " max replay error " << num(worst) << ", 100/100 obstructions";
  });

  criterion(9, 1.0, [](Outcome& o) {
    const LinOp op = lockdown();
    const Splitting s = coordinate_split(0, NormTag::L1);
    const SparseBiSeq x = e(0) + e(1, 0.5);
    o.require(is_homoclinic(op, x, 60, 1e-9).verdict, "x not homoclinic");
    double prev = -1.0;
    for (long n : {5L, 10L, 15L}) {
      const auto a = hhat_approximate(op, s, x, n);
      const double err = a.error_S + a.error_U;
      o.require(a.first_member && a.second_member, "approximant outside hhat at n=" + std::to_string(n));
      if (prev >= 0.0) o.require(err <= 0.55 * prev, "ratio at n=" + std::to_string(n));
      prev = err;
      o.detail << "n=" << n << " err " << num(err) << " ";
    }
  });

  criterion(10, 60.0, [](Outcome& o) {
    std::mt19937_64 rng(10);
    std::uniform_int_distribution<int> dd(1, 4);
    int violations = 0, shadow_fail = 0;
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      const CMatrix m = random_contraction_matrix(dd(rng), rng);
      Eigen::ComplexEigenSolver<CMatrix> es(m, false);
      o.require(es.eigenvalues().cwiseAbs().maxCoeff() <= 0.9 + 1e-12, "spectral radius above 0.9");
      const auto c = car_verify(LinOp::dense(m, NormTag::L2), 20, 50, rng());
      violations += c.violations;
      shadow_fail += c.shadow_ok ? 0 : 1;
      worst = std::max(worst, c.max_ratio / c.gamma);
    }
    o.require(violations == 0, std::to_string(violations) + " violations");
    o.require(shadow_fail == 0, std::to_string(shadow_fail) + " shadow replays failed");
    o.detail << "50 ops x 20 sequences, max ratio/gamma " << num(worst);
  });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
