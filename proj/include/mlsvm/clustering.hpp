#pragma once

#include "mlsvm/data.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace mlsvm {

struct Clustering {
    std::size_t dim = 0;
    std::vector<double> centroids;                   // row-major, k x dim
    std::vector<std::size_t> assignment;             // cluster per point
    std::vector<std::vector<std::size_t>> members;   // point positions per cluster
    std::vector<double> distortion_history;          // sum of squared distances after each assignment
    std::size_t iterations = 0;
    int label = 0;                                   // class of the clustered points, 0 if mixed/unknown

    std::size_t k() const { return members.size(); }
    std::span<const double> centroid(std::size_t c) const { return {centroids.data() + c * dim, dim}; }
    double distortion() const { return distortion_history.empty() ? 0.0 : distortion_history.back(); }
};

/// Lloyd's k-means over row-major `points` (n x dim). Seeding is deterministic:
/// the point nearest the mean, then farthest-point traversal. Stops at an
/// assignment fixpoint or after max_iter rounds. Empty clusters take the point
/// farthest from its centroid in the largest cluster. Ties go to the lowest
/// cluster id. Throws invalid_argument unless 1 <= k <= n.
Clustering kmeans(std::span<const double> points, std::size_t dim, std::size_t k, std::uint64_t seed,
                  std::size_t max_iter = 50);

/// k-means over dataset rows `ids`; member lists hold positions into `ids`.
Clustering kmeans(const Dataset& data, std::span<const std::size_t> ids, std::size_t k, std::uint64_t seed,
                  std::size_t max_iter = 50);

/// For every cluster of either class, its p nearest opposite-class clusters by
/// centroid distance. Result holds (plus cluster, minus cluster) pairs, sorted and unique.
std::vector<std::pair<std::size_t, std::size_t>> pair_opposite_clusters(const Clustering& plus,
                                                                        const Clustering& minus, std::size_t p);

}  // namespace mlsvm
