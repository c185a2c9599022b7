#pragma once

#include <random>

#include "lindyn/serialize.hpp"

namespace lindyn {

// Real d×d matrix whose eigenvalues keep at least `margin` from the unit circle.
CMatrix random_hyperbolic_matrix(int d, double margin, std::mt19937_64& rng);
// Real d×d matrix (d >= 2) with a conjugate pair on the unit circle; the
// remaining eigenvalues have modulus in [0.7, 0.85] or [1.2, 1.4].
CMatrix random_circle_matrix(int d, std::mt19937_64& rng);
// Real matrix with spectral radius in [0.3, 0.9].
CMatrix random_contraction_matrix(int d, std::mt19937_64& rng);

// Four independent routes to hyperbolicity of a dense operator.
struct ThA1Outcome {
  bool eigen_hyperbolic = false;  // min ||λ| - 1| > 1e-6 from the eigenvalues
  bool bounds_finite = false;     // shad_bounds on the spectral split
  bool expansive = false;         // expansive_eigen_test
  bool growth_unbounded = false;  // central window growth ratio >= 1.5 from N = 20 to 40
  bool agree() const {
    return eigen_hyperbolic == bounds_finite && bounds_finite == expansive && expansive == growth_unbounded;
  }
};
ThA1Outcome thA1_check(const LinOp& op);

struct SuiteResult {
  std::string name;
  int passed = 0;
  int total = 0;
  std::vector<std::string> failures;  // first few, with the case index
  bool pass() const { return passed == total; }
};

struct SuiteReport {
  std::uint64_t seed = 0;
  int size = 0;
  std::vector<SuiteResult> suites;
  bool all_pass() const;
};

// Each suite runs `size` random cases; size 0 passes vacuously.
SuiteReport run_suite(std::uint64_t seed, int size);
Json to_json(const SuiteReport& r);

}  // namespace lindyn
