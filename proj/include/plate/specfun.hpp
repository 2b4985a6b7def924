#pragma once

#include "plate/types.hpp"

namespace plate::specfun {

// H0^(1)(z), Im z >= 0, z != 0.
cplx hankel1_0(cplx z);

// K0(z), Re z > 0.
cplx bessel_k0(cplx z);

// H0^(1)(z) + (2i/pi) K0(z); finite at z = 0 where it equals 1.
// The logarithms of the two terms cancel, so small |z| is evaluated from a
// combined series.
cplx biharmonic_bracket(cplx z);

namespace detail {

cplx hankel1_1(cplx z);

// Regime evaluators, exposed for the crossover tests.
cplx h0_series(cplx z);
cplx h1_series(cplx z);
cplx k0_series(cplx z);
cplx h0_integral(cplx z);
cplx h1_integral(cplx z);
cplx k0_integral(cplx z);
cplx h0_asymptotic(cplx z);
cplx h1_asymptotic(cplx z);
cplx k0_asymptotic(cplx z);

inline constexpr double series_radius = 4.0;
inline constexpr double asymptotic_radius = 17.0;

}  // namespace detail
}  // namespace plate::specfun
