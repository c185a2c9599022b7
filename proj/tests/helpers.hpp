#pragma once

#include "lindyn/core_linalg.hpp"
#include "lindyn/operators.hpp"

namespace testing_helpers {

using namespace lindyn;

inline LinOp lockdown(double alpha = 0.5) {
  return LinOp::compose({LinOp::shift(1, NormTag::L1),
                         LinOp::diagonal(PiecewiseWeight::by_sign(alpha, 1.0 / alpha), NormTag::L1)});
}

inline LinOp tucides() {
  std::map<long, Scalar> t;
  for (long k = 1; k <= 40; ++k) t[k] = -(1.0 - std::ldexp(1.0, static_cast<int>(-k)));
  return LinOp::diagonal(PiecewiseWeight::from_table(t, 0.5), NormTag::L1);
}

inline LinOp diag2(NormTag tag = NormTag::LInf) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 0.5;
  m(1, 1) = 2.0;
  return LinOp::dense(m, tag);
}

inline LinOp rotation(NormTag tag = NormTag::LInf) {
  CMatrix m(2, 2);
  m << 0.0, -1.0, 1.0, 0.0;
  return LinOp::dense(m, tag);
}

inline LinOp half_identity(int d = 2, NormTag tag = NormTag::LInf) {
  return LinOp::dense(0.5 * CMatrix::Identity(d, d), tag);
}

inline SparseBiSeq e(long k, Scalar v = 1.0) { return SparseBiSeq::basis(k, NormTag::L1, v); }

template <class F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& err) {
    return err.code();
  }
  return ErrorCode::Ok;
}

}  // namespace testing_helpers
