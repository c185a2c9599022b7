#include "lindyn/suite.hpp"

#include <algorithm>
#include <sstream>

namespace lindyn {

namespace {

double circle_margin(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  double g = kInf;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) g = std::min(g, std::abs(std::abs(es.eigenvalues()(i)) - 1.0));
  return g;
}

double spectral_radius_of(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

CMatrix gaussian(int d, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, sigma);
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = g(rng);
  return m;
}

CMatrix well_conditioned(int d, std::mt19937_64& rng) {
  for (;;) {
    CMatrix h = CMatrix::Identity(d, d) + gaussian(d, 0.3, rng);
    Eigen::JacobiSVD<CMatrix> svd(h);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) > 0.2 && s(0) / s(s.size() - 1) < 20.0) return h;
  }
}

CMatrix block_diag(const CMatrix& a, const CMatrix& b) {
  CMatrix m = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

bool intersects(const Interval& a, const Interval& b) {
  return std::max(a.lo, b.lo) <= std::min(a.hi, b.hi) * (1.0 + 1e-9);
}

Interval bounds_interval(const LinOp& op) {
  const ShadBounds b = shad_bounds(op, spectral_split(op));
  return {b.lower, b.upper};
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

template <class Case>
SuiteResult run_cases(const std::string& name, int size, std::uint64_t seed, const Case& one) {
  SuiteResult r;
  r.name = name;
  r.total = size;
  for (int i = 0; i < size; ++i) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(i) * 0x2545f4914f6cdd1dULL +
                        fnv1a(name));
    std::string why;
    bool ok = false;
    try {
      ok = one(rng, why);
    } catch (const Error& e) {
      why = e.what();
    }
    if (ok) {
      ++r.passed;
    } else if (r.failures.size() < 5) {
      r.failures.push_back("case " + std::to_string(i) + ": " + why);
    }
  }
  return r;
}

}  // namespace

CMatrix random_hyperbolic_matrix(int d, double margin, std::mt19937_64& rng) {
  for (;;) {
    CMatrix m = gaussian(d, 0.6, rng);
    if (circle_margin(m) >= margin) return m;
  }
}

CMatrix random_circle_matrix(int d, std::mt19937_64& rng) {
  if (d < 2) fail(ErrorCode::InvalidArgument, "a real circle pair needs d >= 2");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double th = 0.3 + 2.5 * u(rng);
  CMatrix D = CMatrix::Zero(d, d);
  D(0, 0) = std::cos(th);
  D(0, 1) = -std::sin(th);
  D(1, 0) = std::sin(th);
  D(1, 1) = std::cos(th);
  // Moduli stay within [0.7, 1.4] so that 40 powers of L and L^-1 keep the
  // circle pair resolvable in double precision.
  for (int i = 2; i < d; ++i) {
    const double m = u(rng) < 0.5 ? 0.7 + 0.15 * u(rng) : 1.2 + 0.2 * u(rng);
    D(i, i) = m * (u(rng) < 0.5 ? -1.0 : 1.0);
  }
  const CMatrix V = well_conditioned(d, rng);
  return V * D * V.inverse();
}

CMatrix random_contraction_matrix(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.3, 0.9);
  for (;;) {
    CMatrix m = gaussian(d, 1.0, rng);
    const double r = spectral_radius_of(m);
    if (r > 1e-3) return m * (u(rng) / r);
  }
}

ThA1Outcome thA1_check(const LinOp& op) {
  ThA1Outcome o;
  o.eigen_hyperbolic = circle_margin(op.matrix()) > 1e-6;
  try {
    o.bounds_finite = std::isfinite(shad_bounds(op, spectral_split(op)).upper);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CircleEigenvalue && e.code() != ErrorCode::NotCertified) throw;
  }
  o.expansive = expansive_eigen_test(op) == ExpansiveVerdict::Expansive;
  const auto g = central_window_growth(op, {20, 40});
  o.growth_unbounded = g[1].value >= 1.5 * g[0].value;
  return o;
}

bool SuiteReport::all_pass() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.pass(); });
}

SuiteReport run_suite(std::uint64_t seed, int size) {
  if (size < 0 || size > 10000) fail(ErrorCode::InvalidArgument, "suite size must lie in [0, 10000]");
  SuiteReport rep;
  rep.seed = seed;
  rep.size = size;

  rep.suites.push_back(run_cases("thA-1 finite-dim", size, seed, [](std::mt19937_64& rng, std::string& why) {
    std::uniform_int_distribution<int> dd(2, 4);
    const int d = dd(rng);
    const bool hyperbolic = rng() % 2 == 0;
    const CMatrix m = hyperbolic ? random_hyperbolic_matrix(d, 0.05, rng) : random_circle_matrix(d, rng);
    const ThA1Outcome o = thA1_check(LinOp::dense(m, NormTag::LInf));
    why = std::string("eigen ") + (o.eigen_hyperbolic ? "1" : "0") + " bounds " + (o.bounds_finite ? "1" : "0") +
          " expansive " + (o.expansive ? "1" : "0") + " growth " + (o.growth_unbounded ? "1" : "0");
    return o.agree() && o.eigen_hyperbolic == hyperbolic;
  }));

  rep.suites.push_back(run_cases("agripino block", size, seed, [](std::mt19937_64& rng, std::string& why) {
    std::uniform_int_distribution<int> dd(1, 2);
    const CMatrix a = random_hyperbolic_matrix(dd(rng), 0.2, rng);
    const CMatrix b = random_hyperbolic_matrix(dd(rng), 0.2, rng);
    const std::uint64_t s = rng();
    const double ea = shad_estimate_linf({LinOp::dense(a, NormTag::LInf), 8}, 16, s).estimate;
    const double eb = shad_estimate_linf({LinOp::dense(b, NormTag::LInf), 8}, 16, s).estimate;
    const double ew = shad_estimate_linf({LinOp::dense(block_diag(a, b), NormTag::LInf), 8}, 16, s).estimate;
    // Coordinate block projections have norm 1 under the sup norm.
    const double blocks = std::max(ea, eb);
    why = "whole " + fmt(ew) + " blocks " + fmt(blocks);
    return ew <= 2.0 * blocks && blocks <= 2.0 * ew;
  }));

  rep.suites.push_back(run_cases("arab calculus", size, seed, [](std::mt19937_64& rng, std::string& why) {
    std::uniform_int_distribution<int> dd(1, 3);
    const int d = dd(rng);
    const CMatrix m = random_hyperbolic_matrix(d, 0.1, rng);
    const LinOp L = LinOp::dense(m, NormTag::L2);
    const Interval iL = bounds_interval(L);

    const CMatrix H = well_conditioned(d, rng);
    const CMatrix Hi = H.inverse();
    const Interval conj_pred = shad_conjugacy(iL, matrix_norm(H, NormTag::L2), matrix_norm(Hi, NormTag::L2));
    const Interval conj_direct = bounds_interval(LinOp::dense(H * m * Hi, NormTag::L2));

    const CMatrix m2 = random_hyperbolic_matrix(dd(rng), 0.1, rng);
    const Interval prod_pred = shad_product(iL, bounds_interval(LinOp::dense(m2, NormTag::L2)));
    const Interval prod_direct = bounds_interval(LinOp::dense(block_diag(m, m2), NormTag::L2));

    const Interval inv_pred = shad_inverse(iL, operator_norm(L), operator_norm(inverse(L)));
    const Interval inv_direct = bounds_interval(LinOp::dense(m.inverse(), NormTag::L2));

    why = "conjugacy [" + fmt(conj_pred.lo) + "," + fmt(conj_pred.hi) + "] vs [" + fmt(conj_direct.lo) + "," +
          fmt(conj_direct.hi) + "]; product [" + fmt(prod_pred.lo) + "," + fmt(prod_pred.hi) + "] vs [" +
          fmt(prod_direct.lo) + "," + fmt(prod_direct.hi) + "]; inverse [" + fmt(inv_pred.lo) + "," +
          fmt(inv_pred.hi) + "] vs [" + fmt(inv_direct.lo) + "," + fmt(inv_direct.hi) + "]";
    return intersects(conj_pred, conj_direct) && intersects(prod_pred, prod_direct) && intersects(inv_pred, inv_direct);
  }));

  rep.suites.push_back(run_cases("car bound", size, seed, [](std::mt19937_64& rng, std::string& why) {
    std::uniform_int_distribution<int> dd(1, 4);
    const LinOp L = LinOp::dense(random_contraction_matrix(dd(rng), rng), NormTag::L2);
    const CarReport c = car_verify(L, 20, 50, rng());
    why = "gamma " + fmt(c.gamma) + " max_ratio " + fmt(c.max_ratio) + " violations " + std::to_string(c.violations) +
          " shadow " + fmt(c.shadow_sup_error);
    return c.violations == 0 && c.shadow_ok;
  }));
  return rep;
}

Json to_json(const SuiteReport& r) {
  Json suites = Json::array();
  for (const SuiteResult& s : r.suites)
    suites.push_back(Json{{"name", s.name}, {"passed", s.passed}, {"total", s.total}, {"pass", s.pass()}, {"failures", s.failures}});
  return Json{{"seed", r.seed}, {"size", r.size}, {"all_pass", r.all_pass()}, {"suites", suites}};
}

}  // namespace lindyn
