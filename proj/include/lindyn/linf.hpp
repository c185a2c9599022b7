#pragma once

#include <cstdint>

#include "lindyn/splitting.hpp"

namespace lindyn {

// (L∞ xi)_n = xi_{n+1} - L xi_n on indices -N..N, zero beyond the window.
struct WindowedLinf {
  LinOp base_op;
  int N = 0;
};

// Interior outputs n = -N .. N-1 (2N entries) for 2N+1 inputs.
template <class V>
std::vector<V> linf_apply(const WindowedLinf& w, const std::vector<V>& xi);

// min ‖L∞ xi‖ over ‖xi‖ = 1 in the sup-block norm. The windowed map includes
// the two boundary outputs xi_{-N} and -L xi_N implied by zero extension, so it
// is injective and the margin equals 1/‖left inverse on the range‖. That norm
// is computed by duality; exact for LINF, sampled dual directions otherwise.
// N = 0 returns +inf.
double linf_injectivity_margin(const WindowedLinf& w);

struct ShadEstimate {
  double estimate = 0.0;            // max over samples of a certified lower bound of the sample's minimum
  std::vector<double> sample_min;   // per sample, best value found
  double floor = 0.0;               // 1/(1 + ‖L‖)
};

ShadEstimate shad_estimate_linf(const WindowedLinf& w, int z_samples, std::uint64_t rng_seed);

struct ScanRow {
  double radius = 0.0;
  int trial = 0;
  bool pass = false;
  double estimate = 0.0;
};

struct ScanTable {
  double original_upper = 0.0;
  double certified_margin = 0.0;  // 1/(2·upper): perturbations below this keep Shad <= 2·upper
  std::vector<ScanRow> rows;
};

ScanTable shadowing_robustness_scan(const LinOp& op, const std::vector<double>& radii, int trials,
                                    std::uint64_t rng_seed, int window_N = 16, int z_samples = 16);

std::string scan_csv(const ScanTable& t);

}  // namespace lindyn
