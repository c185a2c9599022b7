#pragma once

#include <mutex>

#include "lindyn/shadowing.hpp"

namespace lindyn {

// Stability works on dense operators; points are coordinate vectors under the
// operator's norm tag.
using Point = CVector;

constexpr double kBumpSlopeMax = 1.5396007178390020;  // max |φ'| for φ(t) = (1 - t²)², 8/(3√3)

double bump_profile(double t);

struct LipschitzPerturbation {
  std::string kind = "zero";
  std::function<Point(const Point&)> evaluate;
  double sup_norm = 0.0;
  double lip_const = 0.0;
  double support_radius = kInf;
  Point center;

  static LipschitzPerturbation zero(int d);
  // direction·φ(‖x - center‖/radius).
  static LipschitzPerturbation bump(const Point& center, const Point& direction, double radius, NormTag tag);
  // Widest bump whose sup and Lipschitz constants are both within the given values.
  static LipschitzPerturbation bump_with_bounds(const Point& center, const Point& direction, double sup, double lip,
                                                NormTag tag);
  static LipschitzPerturbation constant(const Point& v, NormTag tag);
};

struct MapRule {
  std::function<Point(const Point&)> f;
  std::function<CMatrix(const Point&)> jacobian;
  int dim = 0;

  // F_i(x) = linear_i·x_i + quadratic_i·x_i² + cubic_i·x_i³.
  static MapRule diag_poly(const std::vector<double>& linear, const std::vector<double>& quadratic,
                           const std::vector<double>& cubic);
  static MapRule linear(const CMatrix& m);
};

// A point map with its inverse, used as R in Γ.
struct InvertibleMap {
  std::function<Point(const Point&)> forward;
  std::function<Point(const Point&)> backward;
};

// L + β, inverted by the fixed point x = L⁻¹(y - β(x)); requires Lip(β)·‖L⁻¹‖ < 1.
InvertibleMap perturbed_map(const LinOp& op, const LipschitzPerturbation& beta);
InvertibleMap linear_map(const LinOp& op);

// Truncated Γ series: matrices L^k P_S for k < stable.size(), L^{-k} P_U for
// 1 <= k <= unstable.size().
struct GammaKernel {
  NormTag tag = NormTag::L2;
  double gamma_bound = 0.0;  // d(A+B)
  double proj_norm = 0.0;    // d
  double series_A = 0.0, series_B = 0.0;
  std::vector<CMatrix> stable;
  std::vector<CMatrix> unstable;
  double tail_tol = 0.0;
};

GammaKernel gamma_kernel(const LinOp& op, const Splitting& split, double alpha_sup, double tail_tol);

Point gamma_eval(const GammaKernel& kernel, const std::function<Point(const Point&)>& alpha, const InvertibleMap& R,
                 const Point& x);
Point gamma_eval(const LinOp& op, const Splitting& split, const std::function<Point(const Point&)>& alpha,
                 double alpha_sup, const InvertibleMap& R, const Point& x, double tail_tol);

struct PicardTrace {
  std::vector<Point> iterates;   // h_0(x), ..., h_D(x)
  std::vector<double> window_diff;  // sup over the orbit window of ‖h_{m+1} - h_m‖
  std::vector<double> ratios;       // window_diff[m] / window_diff[m-1], above the noise floor
};

class ConjugacyField {
 public:
  enum class Mode { Picard, Direct };

  NormTag tag() const { return kernel_.tag; }
  const LinOp& base_op() const { return op_; }
  const LipschitzPerturbation& perturbation() const { return beta_; }
  const Splitting& split() const { return split_; }
  const GammaKernel& kernel() const { return kernel_; }
  Mode mode() const { return mode_; }
  int picard_depth() const { return depth_; }
  double contraction_factor() const { return q_; }
  double tail_tol() const { return kernel_.tail_tol; }

  Point h(const Point& x) const;
  Point H(const Point& x) const { return x + h(x); }
  // Picard mode only.
  PicardTrace trace(const Point& x) const;
  std::size_t memo_size() const;

 private:
  friend ConjugacyField conjugacy_solve(const LinOp&, const Splitting&, const LipschitzPerturbation&, double, int,
                                        double);
  friend ConjugacyField inverse_conjugacy(const LinOp&, const Splitting&, const LipschitzPerturbation&, double);
  ConjugacyField(LinOp op, Splitting split, LipschitzPerturbation beta, GammaKernel kernel, Mode mode, int depth,
                 double q);
  PicardTrace picard(const Point& x, bool keep_trace) const;

  LinOp op_;
  Splitting split_;
  LipschitzPerturbation beta_;
  GammaKernel kernel_;
  Mode mode_;
  int depth_ = 0;
  double q_ = 0.0;
  InvertibleMap R_;

  struct Memo {
    std::mutex mu;
    std::map<std::vector<double>, std::pair<Point, Point>> table;  // key -> (exact x, h(x))
  };
  std::shared_ptr<Memo> memo_;
};

// h with H = I + h conjugating L to L + β: H∘L = (L+β)∘H.
ConjugacyField conjugacy_solve(const LinOp& op, const Splitting& split, const LipschitzPerturbation& beta, double tol,
                               int max_depth = 64, double tail_tol = 1e-14);
// h' = Γ_M(-β) with M = L + β, so that H' = I + h' satisfies H'∘M = L∘H'.
ConjugacyField inverse_conjugacy(const LinOp& op, const Splitting& split, const LipschitzPerturbation& beta,
                                 double tail_tol = 1e-14);

double conjugacy_residual(const ConjugacyField& field, const std::vector<Point>& test_points);
// sup ‖H'(H(x)) - x‖.
double inverse_residual(const ConjugacyField& field, const ConjugacyField& inverse_field,
                        const std::vector<Point>& test_points);

// Deterministic Halton points in the box [-radius, radius]^d.
std::vector<Point> stability_test_points(int d, int count, double radius);

struct LocalLinearization {
  ConjugacyField field;
  Point p;
  double box_radius = 0.0;            // support of the cut-off remainder
  double linearization_radius = 0.0;  // box_radius / 2, where the cutoff is 1
  double alpha_sup = 0.0;
  double alpha_lip = 0.0;
  double residual = 0.0;  // conjugacy residual on points inside the linearization ball
  int shrink_steps = 0;
};

// Conjugates y ↦ F(y + p) - p to DF_p near 0.
LocalLinearization grobman_hartman_local(const MapRule& F, const Point& p, double box_radius, double tol,
                                         NormTag tag, int test_points = 100);

struct CarReport {
  double gamma = 0.0;
  double max_ratio = 0.0;
  int violations = 0;
  int trials = 0;
  double shadow_sup_error = 0.0;
  double shadow_delta = 0.0;
  bool shadow_ok = false;
};

CarReport car_verify(const LinOp& op, int trials, int seq_len, std::uint64_t rng_seed);

// Columns x_1..x_d, H_1..H_d (real parts).
std::string conjugacy_grid_csv(const ConjugacyField& field, const std::vector<Point>& points);

}  // namespace lindyn
