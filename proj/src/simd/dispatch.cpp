#include "plate/simd.hpp"

namespace plate::simd {

namespace {

using order_sum_fn = cplx (*)(cplx, cplx, double, int, int);

bool detect_avx2() {
#if defined(PLATE_BUILD_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

struct Backend {
  bool avx2;
  order_sum_fn order_sum;
};

const Backend& backend() {
  static const Backend b = [] {
    Backend out{detect_avx2(), &scalar::order_sum};
#if defined(PLATE_BUILD_AVX2)
    if (out.avx2) out.order_sum = &avx2::order_sum;
#endif
    return out;
  }();
  return b;
}

}  // namespace

#if !defined(PLATE_BUILD_AVX2)
namespace avx2 {
cplx order_sum(cplx beta2, cplx kappa, double step, int p_lo, int p_hi) {
  return scalar::order_sum(beta2, kappa, step, p_lo, p_hi);
}
}  // namespace avx2
#endif

cplx order_sum(cplx beta2, cplx kappa, double step, int p_lo, int p_hi) {
  return backend().order_sum(beta2, kappa, step, p_lo, p_hi);
}

bool avx2_available() { return backend().avx2; }

const char* active_backend() { return backend().avx2 ? "avx2" : "scalar"; }

}  // namespace plate::simd
