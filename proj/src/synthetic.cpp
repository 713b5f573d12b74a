#include "mlsvm/synthetic.hpp"

#include "mlsvm/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace mlsvm {

namespace {

constexpr std::size_t kNormDim = 20;

// Draws `minus` points of class -1 and the rest of class +1, in shuffled order.
Dataset draw(std::size_t size, std::size_t minus, std::size_t dim, std::uint64_t seed,
             const std::function<void(int, std::mt19937_64&, std::span<double>)>& sample) {
    if (size < 2) throw invalid_argument("synthetic datasets need at least 2 points");
    minus = std::clamp<std::size_t>(minus, 1, size / 2);  // -1 is never the larger class
    std::mt19937_64 rng(seed);
    std::vector<int> labels(size, 1);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(minus), -1);
    std::shuffle(labels.begin(), labels.end(), rng);
    std::vector<double> features(size * dim);
    for (std::size_t i = 0; i < size; ++i) sample(labels[i], rng, {features.data() + i * dim, dim});
    return Dataset(dim, std::move(features), std::move(labels));
}

std::size_t share(std::size_t size, double fraction) {
    return static_cast<std::size_t>(std::llround(static_cast<double>(size) * fraction));
}

}  // namespace

Dataset make_twonorm(std::size_t size, std::uint64_t seed) {
    const double a = 2.0 / std::sqrt(static_cast<double>(kNormDim));
    return draw(size, share(size, 3697.0 / 7400.0), kNormDim, seed, [a](int y, std::mt19937_64& rng, std::span<double> x) {
        std::normal_distribution<double> n(y * a, 1.0);
        for (double& v : x) v = n(rng);
    });
}

Dataset make_ringnorm(std::size_t size, std::uint64_t seed) {
    const double a = 1.0 / std::sqrt(static_cast<double>(kNormDim));
    return draw(size, share(size, 3664.0 / 7400.0), kNormDim, seed, [a](int y, std::mt19937_64& rng, std::span<double> x) {
        std::normal_distribution<double> n(y == 1 ? 0.0 : a, y == 1 ? 2.0 : 1.0);
        for (double& v : x) v = n(rng);
    });
}

Dataset make_blobs(std::size_t size, std::uint64_t seed, const BlobsOptions& options) {
    if (options.dim == 0) throw invalid_argument("blobs need at least one dimension");
    if (!(options.minority_fraction > 0.0 && options.minority_fraction <= 0.5))
        throw invalid_argument(fmt::format("minority fraction {} outside (0, 0.5]", options.minority_fraction));
    const double s = options.separation;
    return draw(size, share(size, options.minority_fraction), options.dim, seed,
                [s](int y, std::mt19937_64& rng, std::span<double> x) {
                    std::normal_distribution<double> n(0.0, 1.0);
                    for (double& v : x) v = n(rng);
                    x[0] += y * s;
                });
}

Dataset make_synthetic(std::string_view name, std::size_t size, std::uint64_t seed, const BlobsOptions& blobs) {
    if (name == "twonorm") return make_twonorm(size, seed);
    if (name == "ringnorm") return make_ringnorm(size, seed);
    if (name == "blobs") return make_blobs(size, seed, blobs);
    throw invalid_argument(fmt::format("unknown synthetic dataset '{}'", name));
}

}  // namespace mlsvm
