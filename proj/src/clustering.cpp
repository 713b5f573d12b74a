#include "mlsvm/clustering.hpp"

#include "mlsvm/error.hpp"
#include "mlsvm/log.hpp"
#include "mlsvm/simd.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <tuple>

namespace mlsvm {

namespace {

// Nearest centroid (lowest id on ties) and its squared distance.
std::pair<std::size_t, double> nearest(const double* x, const std::vector<double>& centroids, std::size_t k,
                                       std::size_t dim, std::vector<double>& scratch) {
    simd::active().squared_distances(x, centroids.data(), k, dim, scratch.data());
    std::size_t best = 0;
    for (std::size_t c = 1; c < k; ++c)
        if (scratch[c] < scratch[best]) best = c;
    return {best, scratch[best]};
}

}  // namespace

Clustering kmeans(std::span<const double> points, std::size_t dim, std::size_t k, std::uint64_t /*seed*/,
                  std::size_t max_iter) {
    if (dim == 0 && !points.empty()) throw invalid_argument("k-means needs a positive dimension");
    const std::size_t n = dim ? points.size() / dim : 0;
    if (n == 0) throw invalid_argument("k-means needs at least one point");
    if (k < 1 || k > n) throw invalid_argument(fmt::format("k-means k = {} outside [1, {}]", k, n));
    const auto& kt = simd::active();
    const double* x = points.data();
    auto row = [&](std::size_t i) { return x + i * dim; };

    Clustering out;
    out.dim = dim;
    out.centroids.assign(k * dim, 0.0);

    // Seeding.
    std::vector<double> mean(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) kt.accumulate(row(i), mean.data(), dim);
    for (double& m : mean) m /= static_cast<double>(n);
    std::vector<double> min_sq(n);
    kt.squared_distances(mean.data(), x, n, dim, min_sq.data());
    std::size_t first = static_cast<std::size_t>(std::min_element(min_sq.begin(), min_sq.end()) - min_sq.begin());
    std::copy(row(first), row(first) + dim, out.centroids.begin());
    kt.squared_distances(row(first), x, n, dim, min_sq.data());
    std::vector<double> tmp(n);
    for (std::size_t c = 1; c < k; ++c) {
        const std::size_t far =
            static_cast<std::size_t>(std::max_element(min_sq.begin(), min_sq.end()) - min_sq.begin());
        std::copy(row(far), row(far) + dim, out.centroids.begin() + static_cast<std::ptrdiff_t>(c * dim));
        kt.squared_distances(row(far), x, n, dim, tmp.data());
        for (std::size_t i = 0; i < n; ++i) min_sq[i] = std::min(min_sq[i], tmp[i]);
    }

    out.assignment.assign(n, std::numeric_limits<std::size_t>::max());
    std::vector<double> scratch(k);
    std::vector<double> point_sq(n);
    std::vector<std::size_t> counts(k);
    for (std::size_t iter = 0; iter < std::max<std::size_t>(max_iter, 1); ++iter) {
        bool changed = false;
        double distortion = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto [c, sq] = nearest(row(i), out.centroids, k, dim, scratch);
            if (c != out.assignment[i]) changed = true;
            out.assignment[i] = c;
            point_sq[i] = sq;
            distortion += sq;
        }
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t c : out.assignment) ++counts[c];

        // Repair empty clusters before the update step.
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] != 0) continue;
            const std::size_t largest =
                static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
            std::size_t victim = n;
            for (std::size_t i = 0; i < n; ++i)
                if (out.assignment[i] == largest && (victim == n || point_sq[i] > point_sq[victim])) victim = i;
            distortion -= point_sq[victim];
            point_sq[victim] = 0.0;
            out.assignment[victim] = c;
            --counts[largest];
            counts[c] = 1;
            changed = true;
        }
        out.distortion_history.push_back(distortion);
        out.iterations = iter + 1;

        std::fill(out.centroids.begin(), out.centroids.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) kt.accumulate(row(i), out.centroids.data() + out.assignment[i] * dim, dim);
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t d = 0; d < dim; ++d) out.centroids[c * dim + d] /= static_cast<double>(counts[c]);
        if (!changed) break;
    }

    out.members.assign(k, {});
    for (std::size_t i = 0; i < n; ++i) out.members[out.assignment[i]].push_back(i);
    for (std::size_t c = 0; c < k; ++c)
        if (out.members[c].size() < 10 && n >= 10)
            log::warn("k-means cluster {} of {} has {} members, fewer than 10", c, k, out.members[c].size());
    return out;
}

Clustering kmeans(const Dataset& data, std::span<const std::size_t> ids, std::size_t k, std::uint64_t seed,
                  std::size_t max_iter) {
    const auto packed = data.gather(ids);
    Clustering out = kmeans(packed, data.n_features(), k, seed, max_iter);
    if (!ids.empty()) {
        const int first = data.label(ids.front());
        const bool pure = std::all_of(ids.begin(), ids.end(), [&](std::size_t i) { return data.label(i) == first; });
        out.label = pure ? first : 0;
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> pair_opposite_clusters(const Clustering& plus,
                                                                        const Clustering& minus, std::size_t p) {
    if (plus.k() == 0 || minus.k() == 0) throw invalid_argument("both clusterings must be non-empty");
    if (plus.dim != minus.dim) throw dimension_error("clusterings have different dimensions");
    if (p == 0) throw invalid_argument("p must be at least 1");
    const auto& kt = simd::active();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    auto nearest_p = [&](const Clustering& from, const Clustering& to, bool from_plus) {
        std::vector<double> sq(to.k());
        std::vector<std::size_t> order(to.k());
        for (std::size_t a = 0; a < from.k(); ++a) {
            kt.squared_distances(from.centroid(a).data(), to.centroids.data(), to.k(), to.dim, sq.data());
            for (std::size_t b = 0; b < to.k(); ++b) order[b] = b;
            const std::size_t take = std::min(p, to.k());
            std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                              [&](std::size_t l, std::size_t r) { return std::tie(sq[l], l) < std::tie(sq[r], r); });
            for (std::size_t t = 0; t < take; ++t)
                pairs.emplace_back(from_plus ? a : order[t], from_plus ? order[t] : a);
        }
    };
    nearest_p(plus, minus, true);
    nearest_p(minus, plus, false);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

}  // namespace mlsvm
