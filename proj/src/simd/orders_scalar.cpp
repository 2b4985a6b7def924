#include <cmath>

#include "plate/simd.hpp"

namespace plate::simd::scalar {

cplx order_sum(cplx beta2, cplx kappa, double step, int p_lo, int p_hi) {
  cplx acc = 0.0;
  for (int p = p_lo; p <= p_hi; ++p) {
    const cplx kp = kappa + double(p) * step;
    const cplx k2 = kp * kp;
    const cplx chi = sqrt_upper(beta2 - k2);
    const cplx tau = std::sqrt(beta2 + k2);
    acc += 1.0 / chi + I / tau;
  }
  return acc;
}

}  // namespace plate::simd::scalar
