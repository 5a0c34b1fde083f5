#include "pulsedg/kernels.hpp"

#include <stdexcept>

#if defined(PULSEDG_HAVE_AVX2)
#include <immintrin.h>
#endif

namespace pulsedg::kernels {

#if defined(PULSEDG_HAVE_AVX2)
namespace {

constexpr std::size_t kLanes = 4;

void apply_rows_avx2(std::span<const double> matrix, std::size_t rows, std::size_t cols,
                     std::span<const double> in, std::size_t n, std::span<double> out) {
  const std::size_t n_vec = n - n % kLanes;
  for (std::size_t r = 0; r < rows; ++r) {
    double* dst = out.data() + r * n;
    const double* mrow = matrix.data() + r * cols;
    std::size_t j = 0;
    // Two independent accumulators hide the FMA latency on the common
    // cols <= 8 shapes.
    for (; j + 2 * kLanes <= n_vec; j += 2 * kLanes) {
      __m256d acc0 = _mm256_setzero_pd();
      __m256d acc1 = _mm256_setzero_pd();
      for (std::size_t c = 0; c < cols; ++c) {
        const __m256d m = _mm256_set1_pd(mrow[c]);
        const double* src = in.data() + c * n + j;
        acc0 = _mm256_fmadd_pd(m, _mm256_loadu_pd(src), acc0);
        acc1 = _mm256_fmadd_pd(m, _mm256_loadu_pd(src + kLanes), acc1);
      }
      _mm256_storeu_pd(dst + j, acc0);
      _mm256_storeu_pd(dst + j + kLanes, acc1);
    }
    for (; j < n_vec; j += kLanes) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t c = 0; c < cols; ++c) {
        acc = _mm256_fmadd_pd(_mm256_set1_pd(mrow[c]), _mm256_loadu_pd(in.data() + c * n + j), acc);
      }
      _mm256_storeu_pd(dst + j, acc);
    }
    for (; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < cols; ++c) acc += mrow[c] * in[c * n + j];
      dst[j] = acc;
    }
  }
}

void multiply_avx2(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out.data() + i,
                     _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void multiply_add_avx2(double scale, std::span<const double> a, std::span<const double> b,
                       std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    _mm256_storeu_pd(out.data() + i, _mm256_fmadd_pd(s, ab, _mm256_loadu_pd(out.data() + i)));
  }
  for (; i < n; ++i) out[i] += scale * a[i] * b[i];
}

void axpy_avx2(double alpha, std::span<const double> x, std::span<double> y) {
  const std::size_t n = y.size();
  const __m256d al = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(y.data() + i,
                     _mm256_fmadd_pd(al, _mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void add_scaled_avx2(std::span<const double> x, double alpha, std::span<const double> y,
                     std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d al = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out.data() + i,
                     _mm256_fmadd_pd(al, _mm256_loadu_pd(y.data() + i), _mm256_loadu_pd(x.data() + i)));
  }
  for (; i < n; ++i) out[i] = x[i] + alpha * y[i];
}

}  // namespace

bool avx2_available() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const KernelTable& avx2_table() {
  if (!avx2_available()) throw std::runtime_error("AVX2/FMA kernels requested on a CPU without AVX2/FMA");
  static const KernelTable t{Isa::avx2,        apply_rows_avx2, multiply_avx2,
                             multiply_add_avx2, axpy_avx2,       add_scaled_avx2};
  return t;
}

#else

bool avx2_available() { return false; }

const KernelTable& avx2_table() {
  throw std::runtime_error("AVX2 kernels were not compiled for this target");
}

#endif

}  // namespace pulsedg::kernels
