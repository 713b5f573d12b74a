#pragma once

// Nested uniform-design (UD) search over (log2 C, log2 gamma) scored by
// cross-validated G-mean. Stage one lays a 9-run centered lattice over the
// whole box; stage two lays a 5-run lattice over a box of half the side
// lengths centered on the stage-one winner (or on a supplied warm-start
// center, in which case stage one is skipped).

#include "mlsvm/data.hpp"
#include "mlsvm/svm_solver.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mlsvm {

struct UdPoint {
    double log2_c = 0.0;
    double log2_gamma = 0.0;

    double c() const;
    double gamma() const;
    static UdPoint from_values(double c, double gamma);
    bool operator==(const UdPoint&) const = default;
};

struct ParamBox {
    double log2_c_lo = -5.0;
    double log2_c_hi = 15.0;
    double log2_gamma_lo = -15.0;
    double log2_gamma_hi = 3.0;

    /// Requires lo <= hi in both dimensions (a flat dimension is allowed).
    void validate() const;
    bool contains(const UdPoint& p) const;
    UdPoint center() const;
    UdPoint clamp(const UdPoint& p) const;
    bool operator==(const ParamBox&) const = default;
};

enum class UdStage { first, second };

/// Centered lattice points mapped affinely into `box`, in run order m = 1..N.
/// First stage: N = 9, second coordinate order sigma(m) = (5(m-1) mod 9) + 1.
/// Second stage: N = 5, sigma(m) = (2(m-1) mod 5) + 1.
std::vector<UdPoint> ud_points(const ParamBox& box, UdStage stage);

/// Box of half the side lengths of `outer` centered at `center`, clipped to `outer`.
ParamBox nested_box(const ParamBox& outer, const UdPoint& center);

struct UdEvaluation {
    int stage = 1;
    UdPoint point;
    double gmean = 0.0;
};

struct UdResult {
    double best_c = 0.0;
    double best_gamma = 0.0;
    double best_gmean = 0.0;
    std::vector<UdEvaluation> evaluations;
};

struct UdOptions {
    bool weighted = false;
    ParamBox box{};
    KernelKind kernel = KernelKind::rbf;
    std::size_t folds = 5;
    std::uint64_t seed = 0;
    std::optional<UdPoint> warm_center;
    /// Class sizes behind weighted penalties; unset means each training fold's own sizes.
    std::optional<ClassSizes> weight_basis;
    SolverOptions solver{};
    std::size_t threads = 1;
};

/// Mean G-mean over stratified folds of `subset` (fold count reduced to the
/// minority count when smaller; resubstitution when a class has < 2 members).
double cross_validated_gmean(const Dataset& data, std::span<const std::size_t> subset,
                             const UdPoint& point, const UdOptions& options);

/// Throws invalid_argument when `subset` lacks a class. Ties on G-mean go to the
/// smaller C, then the smaller gamma.
UdResult ud_search(const Dataset& data, std::span<const std::size_t> subset, const UdOptions& options);

}  // namespace mlsvm
