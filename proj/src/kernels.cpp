#include "projconst/kernels.hpp"

#include <cmath>
#include <cstdlib>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define PROJCONST_X86 1
#endif
#if defined(__aarch64__)
#include <arm_neon.h>
#define PROJCONST_NEON 1
#endif

namespace projconst::kern {

namespace {

inline double ipow(double b, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

double s_dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double s_nrm2sq(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

void s_axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double s_max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = std::fabs(x[i]);
    if (v > m) m = v;
  }
  return m;
}

double s_pow_sum(const double* x, std::size_t n, int e, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += ipow(s * std::fabs(x[i]), e);
  return acc;
}

void s_spow_scale(const double* x, std::size_t n, int e, double s,
                  double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = ipow(s * std::fabs(x[i]), e);
    out[i] = x[i] < 0.0 ? -v : v;
  }
}

void s_matvec(const double* a, std::size_t m, std::size_t n, const double* x,
              double* out) {
  for (std::size_t i = 0; i < m; ++i) out[i] = s_dot(a + i * n, x, n);
}

void s_matvec_t(const double* a, std::size_t m, std::size_t n,
                const double* y, double* out) {
  for (std::size_t j = 0; j < n; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < m; ++i) s_axpy(y[i], a + i * n, out, n);
}

constexpr Ops scalar_table = {
    "scalar",  s_dot,        s_nrm2sq, s_axpy,
    s_max_abs, s_pow_sum,    s_spow_scale,
    s_matvec,  s_matvec_t,
};

#ifdef PROJCONST_X86

__attribute__((target("avx2,fma"))) inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

__attribute__((target("avx2,fma"))) inline __m256d vipow(__m256d b, int e) {
  __m256d r = _mm256_set1_pd(1.0);
  while (e > 0) {
    if (e & 1) r = _mm256_mul_pd(r, b);
    b = _mm256_mul_pd(b, b);
    e >>= 1;
  }
  return r;
}

__attribute__((target("avx2,fma"))) double v_dot(const double* x,
                                                 const double* y,
                                                 std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

__attribute__((target("avx2,fma"))) double v_nrm2sq(const double* x,
                                                    std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

__attribute__((target("avx2,fma"))) void v_axpy(double a, const double* x,
                                                double* y, std::size_t n) {
  __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, v);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

__attribute__((target("avx2,fma"))) double v_max_abs(const double* x,
                                                     std::size_t n) {
  const __m256d mask = _mm256_set1_pd(-0.0);
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    best = _mm256_max_pd(best, _mm256_andnot_pd(mask, _mm256_loadu_pd(x + i)));
  double m = 0.0;
  alignas(32) double tmp[4];
  _mm256_store_pd(tmp, best);
  for (int k = 0; k < 4; ++k)
    if (tmp[k] > m) m = tmp[k];
  for (; i < n; ++i) {
    double v = std::fabs(x[i]);
    if (v > m) m = v;
  }
  return m;
}

__attribute__((target("avx2,fma"))) double v_pow_sum(const double* x,
                                                     std::size_t n, int e,
                                                     double s) {
  const __m256d mask = _mm256_set1_pd(-0.0);
  const __m256d vs = _mm256_set1_pd(s);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_andnot_pd(mask, _mm256_loadu_pd(x + i));
    acc = _mm256_add_pd(acc, vipow(_mm256_mul_pd(vs, v), e));
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += ipow(s * std::fabs(x[i]), e);
  return out;
}

__attribute__((target("avx2,fma"))) void v_spow_scale(const double* x,
                                                      std::size_t n, int e,
                                                      double s, double* out) {
  const __m256d mask = _mm256_set1_pd(-0.0);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d sgn = _mm256_and_pd(mask, v);
    __m256d p = vipow(_mm256_mul_pd(vs, _mm256_andnot_pd(mask, v)), e);
    _mm256_storeu_pd(out + i, _mm256_or_pd(p, sgn));
  }
  for (; i < n; ++i) {
    double v = ipow(s * std::fabs(x[i]), e);
    out[i] = x[i] < 0.0 ? -v : v;
  }
}

__attribute__((target("avx2,fma"))) void v_matvec(const double* a,
                                                  std::size_t m, std::size_t n,
                                                  const double* x,
                                                  double* out) {
  for (std::size_t i = 0; i < m; ++i) out[i] = v_dot(a + i * n, x, n);
}

__attribute__((target("avx2,fma"))) void v_matvec_t(const double* a,
                                                    std::size_t m,
                                                    std::size_t n,
                                                    const double* y,
                                                    double* out) {
  for (std::size_t j = 0; j < n; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < m; ++i) v_axpy(y[i], a + i * n, out, n);
}

constexpr Ops avx2_table = {
    "avx2",    v_dot,        v_nrm2sq, v_axpy,
    v_max_abs, v_pow_sum,    v_spow_scale,
    v_matvec,  v_matvec_t,
};

#endif  // PROJCONST_X86

#ifdef PROJCONST_NEON

inline float64x2_t n_ipow(float64x2_t b, int e) {
  float64x2_t r = vdupq_n_f64(1.0);
  while (e > 0) {
    if (e & 1) r = vmulq_f64(r, b);
    b = vmulq_f64(b, b);
    e >>= 1;
  }
  return r;
}

double n_dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double n_nrm2sq(const double* x, std::size_t n) { return n_dot(x, x, n); }

void n_axpy(double a, const double* x, double* y, std::size_t n) {
  float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

double n_max_abs(const double* x, std::size_t n) {
  float64x2_t best = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    best = vmaxq_f64(best, vabsq_f64(vld1q_f64(x + i)));
  double m = vmaxvq_f64(best);
  for (; i < n; ++i) {
    double v = std::fabs(x[i]);
    if (v > m) m = v;
  }
  return m;
}

double n_pow_sum(const double* x, std::size_t n, int e, double s) {
  float64x2_t vs = vdupq_n_f64(s);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vabsq_f64(vld1q_f64(x + i));
    acc = vaddq_f64(acc, n_ipow(vmulq_f64(vs, v), e));
  }
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += ipow(s * std::fabs(x[i]), e);
  return out;
}

void n_spow_scale(const double* x, std::size_t n, int e, double s,
                  double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = ipow(s * std::fabs(x[i]), e);
    out[i] = x[i] < 0.0 ? -v : v;
  }
}

void n_matvec(const double* a, std::size_t m, std::size_t n, const double* x,
              double* out) {
  for (std::size_t i = 0; i < m; ++i) out[i] = n_dot(a + i * n, x, n);
}

void n_matvec_t(const double* a, std::size_t m, std::size_t n,
                const double* y, double* out) {
  for (std::size_t j = 0; j < n; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < m; ++i) n_axpy(y[i], a + i * n, out, n);
}

constexpr Ops neon_table = {
    "neon",    n_dot,        n_nrm2sq, n_axpy,
    n_max_abs, n_pow_sum,    n_spow_scale,
    n_matvec,  n_matvec_t,
};

#endif  // PROJCONST_NEON

const Ops& resolve() {
  const char* force = std::getenv("PROJCONST_FORCE_SCALAR");
  if (force && force[0] == '1') return scalar_table;
#ifdef PROJCONST_X86
  if (__builtin_cpu_supports("avx2")) return avx2_table;
#endif
#ifdef PROJCONST_NEON
  return neon_table;
#endif
  return scalar_table;
}

}  // namespace

const Ops& scalar_ops() { return scalar_table; }

const Ops& active() {
  static const Ops& picked = resolve();
  return picked;
}

}  // namespace projconst::kern
