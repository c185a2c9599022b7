#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "lindyn/splitting.hpp"

namespace lindyn {

template <class V>
struct PseudoOrbit {
  long n0 = 0;
  std::vector<V> points;  // points[i] is x_{n0+i}
  double delta = 0.0;
  double measured_defect = 0.0;

  long n1() const { return n0 + static_cast<long>(points.size()) - 1; }
  std::size_t size() const { return points.size(); }
};

// Max over the window of ‖L x_n - x_{n+1}‖.
template <class V>
double pseudo_orbit_defect(const LinOp& op, const std::vector<V>& points);

// Seed sits at n0 when n0 >= 0; otherwise at n = 0, with the points before it
// produced by the inverse. Perturbations are iid with norm <= delta.
template <class V>
PseudoOrbit<V> generate_pseudo_orbit(const LinOp& op, const V& seed, long n0, long n1, double delta,
                                     std::uint64_t rng_seed);

// Pseudo-orbit that stays bounded on long windows: the S component runs forward
// from P_S seed at n0, the U component backward from P_U seed at n1.
template <class V>
PseudoOrbit<V> generate_bounded_pseudo_orbit(const LinOp& op, const Splitting& split, const V& seed, long n0, long n1,
                                             double delta, std::uint64_t rng_seed);

enum class ShadowMethod { SplittingSeries, ContractionFixpoint, WindowSolve };
const char* shadow_method_name(ShadowMethod m);

template <class V>
struct ShadowResult {
  V shadow_seed;
  long n0 = 0;
  std::vector<V> trajectory;
  double sup_error = 0.0;
  double constant_used = 0.0;
  ShadowMethod method = ShadowMethod::SplittingSeries;
  double orbit_residual = 0.0;  // max ‖y_{n+1} - L y_n‖ / max(1, ‖y_n‖)
};

struct ShadBounds {
  double upper = kInf;
  double lower = 0.0;
  double proj_S_norm = 0.0;
  double series_A = 0.0;
  double proj_U_norm = 0.0;
  double series_B = 0.0;
  bool lower_exact = true;
};

ShadBounds shad_bounds(const LinOp& op, const Splitting& split);

// Bounded solution e of e_{n+1} = L e_n + z_n with z extended by zero outside
// the window, built from the stable forward sum and the unstable backward sum.
// The sums are finite on a finite window and are evaluated exactly by
// recursion, so tail_tol only guards the certificate.
template <class V>
ShadowResult<V> shadow_splitting_series(const LinOp& op, const Splitting& split, const PseudoOrbit<V>& po,
                                        double tail_tol = 1e-12);

template <class V>
ShadowResult<V> shadow_contraction(const LinOp& op, const PseudoOrbit<V>& po, double tol = 1e-12);

ShadowResult<DenseVector> shadow_window_solve(const LinOp& op, const PseudoOrbit<DenseVector>& po);

struct Interval {
  double lo = 0.0;
  double hi = kInf;
};

// Shad(H L H^-1) from Shad(L).
Interval shad_conjugacy(const Interval& shad_L, double norm_H, double norm_H_inv);
// Shad(L1 x L2) from the factors.
Interval shad_product(const Interval& a, const Interval& b);
// Shad(L^-1) from Shad(L): [Shad(L)/‖L^-1‖, ‖L‖ Shad(L)].
Interval shad_inverse(const Interval& shad_L, double norm_L, double norm_L_inv);

template <class V>
std::string trajectory_csv(const ShadowResult<V>& r);

}  // namespace lindyn
