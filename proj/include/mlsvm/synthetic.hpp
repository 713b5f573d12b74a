#pragma once

// Seeded synthetic datasets. Class counts are exact; the larger class is +1.

#include "mlsvm/data.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace mlsvm {

/// Two unit-covariance Gaussians in 20-D with means +-(2/sqrt(20)) * 1.
/// Class proportions 3703 : 3697 (+1 : -1).
Dataset make_twonorm(std::size_t size, std::uint64_t seed);

/// +1: N(0, 4I); -1: N((1/sqrt(20)) * 1, I), in 20-D. Proportions 3736 : 3664.
Dataset make_ringnorm(std::size_t size, std::uint64_t seed);

struct BlobsOptions {
    std::size_t dim = 2;
    double separation = 4.0;         // class means at +-separation on the first axis, unit variance
    double minority_fraction = 0.5;  // share of the -1 class
};

Dataset make_blobs(std::size_t size, std::uint64_t seed, const BlobsOptions& options = {});

/// Dispatch by name: "twonorm", "ringnorm" or "blobs". Throws invalid_argument otherwise.
Dataset make_synthetic(std::string_view name, std::size_t size, std::uint64_t seed,
                       const BlobsOptions& blobs = {});

}  // namespace mlsvm
