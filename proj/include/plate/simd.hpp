#pragma once

#include "plate/types.hpp"

// Batched sum over diffraction orders,
//   sum_{p = p_lo}^{p_hi} 1/chi_p + i/tau_p,
//   kappa_p = kappa + p*step, chi_p = sqrt_upper(beta2 - kappa_p^2),
//   tau_p = sqrt(beta2 + kappa_p^2) (principal root).
// This is the inner loop of every on-axis lattice sum and of the kernel
// evaluation used by the factorization.
namespace plate::simd {

cplx order_sum(cplx beta2, cplx kappa, double step, int p_lo, int p_hi);

// Backend name selected at startup: "avx2" or "scalar".
const char* active_backend();
bool avx2_available();

namespace scalar {
cplx order_sum(cplx beta2, cplx kappa, double step, int p_lo, int p_hi);
}

namespace avx2 {
// Only callable when avx2_available(); declared unconditionally so the
// equivalence tests can link against it.
cplx order_sum(cplx beta2, cplx kappa, double step, int p_lo, int p_hi);
}

}  // namespace plate::simd
