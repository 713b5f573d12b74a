#pragma once

// Data-parallel inner loops shared by the kernel, solver, kNN and k-means code.
//
// Every routine has a scalar reference implementation plus vectorized variants
// (AVX2+FMA on x86-64, NEON on AArch64). The variant is picked once per process
// from the running CPU; MLSVM_SIMD=scalar|avx2|neon in the environment pins it.
// Reductions (dot, squared distance) may differ from the scalar reference in the
// last bits because lanes are summed in a different order; element-wise routines
// are bit-identical across variants.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace mlsvm::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

struct KernelTable {
    Isa isa;
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    // out[r] = ||x - rows[r]||^2 for a row-major (n_rows x dim) block.
    void (*squared_distances)(const double* x, const double* rows, std::size_t n_rows,
                              std::size_t dim, double* out);
    // out[r] = <x, rows[r]>
    void (*dots)(const double* x, const double* rows, std::size_t n_rows, std::size_t dim,
                 double* out);
    // g[k] += s[k] * (a * u[k] + b * v[k])
    void (*signed_axpy2)(double a, const double* u, double b, const double* v, const double* s,
                         double* g, std::size_t n);
    // acc[k] += x[k]
    void (*accumulate)(const double* x, double* acc, std::size_t n);
};

/// Variants compiled into this binary and runnable on this CPU. Scalar is always first.
std::vector<Isa> available();
bool supported(Isa isa);

/// Table for a specific variant; throws std::invalid_argument when unsupported.
const KernelTable& table(Isa isa);

/// The process-wide active table.
const KernelTable& active();

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
const KernelTable* neon_table();
bool cpu_has_avx2_fma();
}  // namespace detail

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    return active().squared_distance(a.data(), b.data(), a.size());
}

}  // namespace mlsvm::simd
