#include "mlsvm/simd.hpp"

#if defined(__aarch64__)
#define MLSVM_HAVE_NEON 1
#include <arm_neon.h>
#endif

namespace mlsvm::simd::detail {

#if MLSVM_HAVE_NEON
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + k), vld1q_f64(b + k));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + k + 2), vld1q_f64(b + k + 2));
    }
    double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; k < n; ++k) sum += a[k] * b[k];
    return sum;
}

double squared_distance_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const float64x2_t d0 = vsubq_f64(vld1q_f64(a + k), vld1q_f64(b + k));
        const float64x2_t d1 = vsubq_f64(vld1q_f64(a + k + 2), vld1q_f64(b + k + 2));
        acc0 = vfmaq_f64(acc0, d0, d0);
        acc1 = vfmaq_f64(acc1, d1, d1);
    }
    double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; k < n; ++k) {
        const double d = a[k] - b[k];
        sum += d * d;
    }
    return sum;
}

void squared_distances_neon(const double* x, const double* rows, std::size_t n_rows,
                            std::size_t dim, double* out) {
    for (std::size_t r = 0; r < n_rows; ++r) out[r] = squared_distance_neon(x, rows + r * dim, dim);
}

void dots_neon(const double* x, const double* rows, std::size_t n_rows, std::size_t dim,
               double* out) {
    for (std::size_t r = 0; r < n_rows; ++r) out[r] = dot_neon(x, rows + r * dim, dim);
}

void signed_axpy2_neon(double a, const double* u, double b, const double* v, const double* s,
                       double* g, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    const float64x2_t vb = vdupq_n_f64(b);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const float64x2_t au = vmulq_f64(va, vld1q_f64(u + k));
        const float64x2_t bv = vmulq_f64(vb, vld1q_f64(v + k));
        const float64x2_t step = vmulq_f64(vld1q_f64(s + k), vaddq_f64(au, bv));
        vst1q_f64(g + k, vaddq_f64(vld1q_f64(g + k), step));
    }
    for (; k < n; ++k) {
        const double au = a * u[k];
        const double bv = b * v[k];
        g[k] += s[k] * (au + bv);
    }
}

void accumulate_neon(const double* x, double* acc, std::size_t n) {
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) vst1q_f64(acc + k, vaddq_f64(vld1q_f64(acc + k), vld1q_f64(x + k)));
    for (; k < n; ++k) acc[k] += x[k];
}

constexpr KernelTable kNeon{
    Isa::neon, dot_neon,          squared_distance_neon, squared_distances_neon,
    dots_neon, signed_axpy2_neon, accumulate_neon,
};

}  // namespace

const KernelTable* neon_table() { return &kNeon; }

#else

const KernelTable* neon_table() { return nullptr; }

#endif

}  // namespace mlsvm::simd::detail
