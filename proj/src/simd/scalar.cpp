#include "mlsvm/simd.hpp"

namespace mlsvm::simd::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += a[k] * b[k];
    return sum;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = a[k] - b[k];
        sum += d * d;
    }
    return sum;
}

void squared_distances_scalar(const double* x, const double* rows, std::size_t n_rows,
                              std::size_t dim, double* out) {
    for (std::size_t r = 0; r < n_rows; ++r) out[r] = squared_distance_scalar(x, rows + r * dim, dim);
}

void dots_scalar(const double* x, const double* rows, std::size_t n_rows, std::size_t dim,
                 double* out) {
    for (std::size_t r = 0; r < n_rows; ++r) out[r] = dot_scalar(x, rows + r * dim, dim);
}

void signed_axpy2_scalar(double a, const double* u, double b, const double* v, const double* s,
                         double* g, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        const double au = a * u[k];
        const double bv = b * v[k];
        g[k] += s[k] * (au + bv);
    }
}

void accumulate_scalar(const double* x, double* acc, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) acc[k] += x[k];
}

constexpr KernelTable kScalar{
    Isa::scalar,         dot_scalar,          squared_distance_scalar, squared_distances_scalar,
    dots_scalar,         signed_axpy2_scalar, accumulate_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace mlsvm::simd::detail
