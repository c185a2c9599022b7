#pragma once

#include <cstdint>

#include "lindyn/splitting.hpp"

namespace lindyn {

enum class ExpansiveVerdict { Expansive, NotExpansive, NotApplicable };
const char* expansive_verdict_name(ExpansiveVerdict v);

ExpansiveVerdict expansive_eigen_test(const LinOp& op, double gap = 1e-6);

struct UniformSearch {
  std::optional<int> m;                        // smallest m that works for every sample
  std::vector<std::optional<int>> first_m;     // per sample
};

template <class V>
UniformSearch uniform_expansivity_search(const LinOp& op, int m_max, const std::vector<V>& samples);

// Basis vectors followed by `mixtures` normalized pseudo-random combinations.
std::vector<DenseVector> default_samples(int d, NormTag tag, std::uint64_t seed, int mixtures = 64);
// Basis vectors e_k, |k| <= radius, then random mixtures supported in [-radius, radius].
std::vector<SparseBiSeq> default_sequence_samples(NormTag tag, std::uint64_t seed, long radius = 8,
                                                  int mixtures = 64);

struct GrowthPoint {
  int N = 0;
  double value = 0.0;        // min over ‖x‖ = 1 of max_{|n|<=N} ‖L^n x‖
  double lower_bound = 0.0;
  bool exact = false;        // LINF: every extreme dual direction is enumerated
};

std::vector<GrowthPoint> central_window_growth(const LinOp& op, const std::vector<int>& N_list);

template <class V>
bool ecs_membership(const LinOp& op, const V& x, double c, double beta, int horizon);

struct EcsCertificate {
  double c = 0.0;
  double beta = 0.0;
  int horizon = 0;
};
// c and beta with ‖L^n|_S‖ <= c beta^n for n <= horizon.
std::optional<EcsCertificate> ecs_certificate(const LinOp& op, const Splitting& split, int horizon = 50);

struct ExpansivityReport {
  ExpansiveVerdict eigen_verdict = ExpansiveVerdict::NotApplicable;
  UniformSearch uniform;
  std::vector<GrowthPoint> window_growth;
  std::optional<EcsCertificate> ecs_certificate;
};

std::string growth_csv(const std::vector<GrowthPoint>& g);

}  // namespace lindyn
