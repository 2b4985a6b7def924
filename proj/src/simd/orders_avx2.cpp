#include <immintrin.h>

#include "plate/simd.hpp"

namespace plate::simd::avx2 {

namespace {

// Principal square root of (a + ib), four lanes.
inline void csqrt(__m256d a, __m256d b, __m256d& re, __m256d& im) {
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d r = _mm256_sqrt_pd(_mm256_fmadd_pd(a, a, _mm256_mul_pd(b, b)));
  const __m256d aa = _mm256_andnot_pd(sign, a);
  const __m256d t = _mm256_sqrt_pd(_mm256_mul_pd(half, _mm256_add_pd(r, aa)));
  const __m256d bb = _mm256_andnot_pd(sign, b);
  const __m256d u = _mm256_div_pd(_mm256_mul_pd(half, bb), t);
  const __m256d neg = _mm256_cmp_pd(a, _mm256_setzero_pd(), _CMP_LT_OQ);
  // a >= 0: (t, b/(2t));  a < 0: (|b|/(2t), sign(b) t)
  re = _mm256_blendv_pd(t, u, neg);
  const __m256d bsign = _mm256_and_pd(sign, b);
  im = _mm256_blendv_pd(_mm256_or_pd(u, bsign), _mm256_or_pd(t, bsign), neg);
}

inline void crecip(__m256d re, __m256d im, __m256d& ore, __m256d& oim) {
  const __m256d d = _mm256_fmadd_pd(re, re, _mm256_mul_pd(im, im));
  ore = _mm256_div_pd(re, d);
  oim = _mm256_div_pd(_mm256_xor_pd(im, _mm256_set1_pd(-0.0)), d);
}

}  // namespace

cplx order_sum(cplx beta2, cplx kappa, double step, int p_lo, int p_hi) {
  const __m256d b2r = _mm256_set1_pd(beta2.real());
  const __m256d b2i = _mm256_set1_pd(beta2.imag());
  const __m256d kr0 = _mm256_set1_pd(kappa.real());
  const __m256d ki = _mm256_set1_pd(kappa.imag());
  const __m256d st = _mm256_set1_pd(step);
  const __m256d lane = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d zero = _mm256_setzero_pd();
  __m256d accr = zero, acci = zero;
  int p = p_lo;
  for (; p + 3 <= p_hi; p += 4) {
    const __m256d pp = _mm256_add_pd(_mm256_set1_pd(double(p)), lane);
    const __m256d kr = _mm256_fmadd_pd(pp, st, kr0);
    // kp^2 = (kr^2 - ki^2) + 2 i kr ki
    const __m256d k2r = _mm256_fmsub_pd(kr, kr, _mm256_mul_pd(ki, ki));
    const __m256d k2i = _mm256_mul_pd(_mm256_add_pd(kr, kr), ki);
    __m256d cr, ci, tr, ti;
    csqrt(_mm256_sub_pd(b2r, k2r), _mm256_sub_pd(b2i, k2i), cr, ci);
    // upper branch: flip lanes with Im < 0, or Im == 0 and Re < 0
    const __m256d flip = _mm256_or_pd(
        _mm256_cmp_pd(ci, zero, _CMP_LT_OQ),
        _mm256_and_pd(_mm256_cmp_pd(ci, zero, _CMP_EQ_OQ), _mm256_cmp_pd(cr, zero, _CMP_LT_OQ)));
    const __m256d fm = _mm256_and_pd(flip, _mm256_set1_pd(-0.0));
    cr = _mm256_xor_pd(cr, fm);
    ci = _mm256_xor_pd(ci, fm);
    csqrt(_mm256_add_pd(b2r, k2r), _mm256_add_pd(b2i, k2i), tr, ti);
    __m256d ir, ii, jr, ji;
    crecip(cr, ci, ir, ii);
    crecip(tr, ti, jr, ji);
    // 1/chi + i/tau = (ir - ji) + i (ii + jr)
    accr = _mm256_add_pd(accr, _mm256_sub_pd(ir, ji));
    acci = _mm256_add_pd(acci, _mm256_add_pd(ii, jr));
  }
  alignas(32) double r[4], m[4];
  _mm256_store_pd(r, accr);
  _mm256_store_pd(m, acci);
  cplx acc((r[0] + r[1]) + (r[2] + r[3]), (m[0] + m[1]) + (m[2] + m[3]));
  if (p <= p_hi) acc += scalar::order_sum(beta2, kappa, step, p, p_hi);
  return acc;
}

}  // namespace plate::simd::avx2
