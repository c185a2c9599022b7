#pragma once

#include "lindyn/splitting.hpp"

namespace lindyn {

template <class V>
struct HomoclinicEvidence {
  V vector;
  int horizon = 0;
  double tol = 0.0;
  std::vector<double> forward_decay;   // ‖L^n x‖, n = 0..horizon
  std::vector<double> backward_decay;  // ‖L^{-n} x‖
  bool verdict = false;
};

// Decay to 0 in both time directions, judged at the horizon: both norms <= tol
// and the running-max envelope still falling over the last quarter.
template <class V>
HomoclinicEvidence<V> is_homoclinic(const LinOp& op, const V& x, int horizon, double tol);

// supp(L^{-n} x) ⊆ U and supp(L^m x) ⊆ S. Dense splittings test the
// complementary projection against 1e-12 relative.
template <class V>
bool hhat_member(const LinOp& op, const Splitting& split, const V& x, long n, long m);

template <class V>
struct HhatApproximation {
  V first;   // L^n P_U L^{-n} P_S x
  V second;  // L^{-n} P_S L^n P_U x
  double error_S = 0.0;  // ‖P_S x - first‖
  double error_U = 0.0;  // ‖P_U x - second‖
  bool first_member = false;
  bool second_member = false;
};

template <class V>
HhatApproximation<V> hhat_approximate(const LinOp& op, const Splitting& split, const V& x, long n,
                                      int horizon = 60, double tol = 1e-9);

constexpr long kHhatSearchBound = 64;

struct TrivialHVerdict {
  bool hyperbolic_consistent = false;
  HypClass cls = HypClass::Undetermined;
  std::optional<AnyVector> witness;
  std::vector<double> forward_decay, backward_decay;
  long search_bound = kHhatSearchBound;
  int basis_checked = 0;
  std::string note;
};

TrivialHVerdict hyperbolic_iff_trivial_H(const LinOp& op, const Splitting& split, int horizon = 40,
                                         double tol = 1e-9);

template <class V>
struct Chain {
  std::vector<V> points;
  double defect = 0.0;
  std::string method;
};

// Max of ‖L c_i - c_{i+1}‖.
template <class V>
double chain_defect(const LinOp& op, const std::vector<V>& points);

// δ-chain from x+y to itself out of δ/2-chains from x and from y to themselves.
// The padded sum (shorter chain held at its endpoint) is tried first, then the
// sum of both chains repeated to a common period.
template <class V>
Chain<V> chain_combine(const std::vector<V>& chain_x, const std::vector<V>& chain_y, const LinOp& op, double delta);

template <class V>
Chain<V> chain_scale(const std::vector<V>& chain, Scalar lambda, const LinOp& op, double delta);

template <class V>
std::string decay_csv(const HomoclinicEvidence<V>& ev);

}  // namespace lindyn
