#include "mlsvm/simd.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define MLSVM_HAVE_AVX2 1
#include <immintrin.h>
#endif

namespace mlsvm::simd::detail {

#if MLSVM_HAVE_AVX2
namespace {

#define MLSVM_AVX2 __attribute__((target("avx2,fma")))

MLSVM_AVX2 inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

MLSVM_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
    }
    for (; k + 4 <= n; k += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (; k < n; ++k) sum += a[k] * b[k];
    return sum;
}

MLSVM_AVX2 double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    for (; k + 4 <= n; k += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
        acc0 = _mm256_fmadd_pd(d, d, acc0);
    }
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (; k < n; ++k) {
        const double d = a[k] - b[k];
        sum += d * d;
    }
    return sum;
}

MLSVM_AVX2 void squared_distances_avx2(const double* x, const double* rows, std::size_t n_rows,
                                       std::size_t dim, double* out) {
    for (std::size_t r = 0; r < n_rows; ++r) out[r] = squared_distance_avx2(x, rows + r * dim, dim);
}

MLSVM_AVX2 void dots_avx2(const double* x, const double* rows, std::size_t n_rows,
                          std::size_t dim, double* out) {
    for (std::size_t r = 0; r < n_rows; ++r) out[r] = dot_avx2(x, rows + r * dim, dim);
}

// No FMA here: keeps the update bit-identical to the scalar reference.
MLSVM_AVX2 void signed_axpy2_avx2(double a, const double* u, double b, const double* v,
                                  const double* s, double* g, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d au = _mm256_mul_pd(va, _mm256_loadu_pd(u + k));
        const __m256d bv = _mm256_mul_pd(vb, _mm256_loadu_pd(v + k));
        const __m256d step = _mm256_mul_pd(_mm256_loadu_pd(s + k), _mm256_add_pd(au, bv));
        _mm256_storeu_pd(g + k, _mm256_add_pd(_mm256_loadu_pd(g + k), step));
    }
    for (; k < n; ++k) {
        const double au = a * u[k];
        const double bv = b * v[k];
        g[k] += s[k] * (au + bv);
    }
}

MLSVM_AVX2 void accumulate_avx2(const double* x, double* acc, std::size_t n) {
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4)
        _mm256_storeu_pd(acc + k, _mm256_add_pd(_mm256_loadu_pd(acc + k), _mm256_loadu_pd(x + k)));
    for (; k < n; ++k) acc[k] += x[k];
}

constexpr KernelTable kAvx2{
    Isa::avx2, dot_avx2,          squared_distance_avx2, squared_distances_avx2,
    dots_avx2, signed_axpy2_avx2, accumulate_avx2,
};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

bool cpu_has_avx2_fma() {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#else

const KernelTable* avx2_table() { return nullptr; }
bool cpu_has_avx2_fma() { return false; }

#endif

}  // namespace mlsvm::simd::detail
