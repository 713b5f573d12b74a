#pragma once

// k-nearest-neighbor graphs over the points of one class.
//
// Nodes are addressed by position 0..size()-1; node_ids() maps positions back to
// dataset indices. knn(u) is the directed list, neighbors(u) the symmetrized
// view E = {(u, v) : v in knn(u) or u in knn(v)}. Both are sorted by ascending
// Euclidean distance, ties by position.

#include "mlsvm/data.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mlsvm {

enum class KnnMode { exact, approximate };

std::string_view to_string(KnnMode mode);
KnnMode knn_mode_from_string(std::string_view name);

struct Neighbor {
    std::size_t node = 0;
    double distance = 0.0;
    bool operator==(const Neighbor&) const = default;
};

class KnnGraph {
  public:
    KnnGraph() = default;
    /// lists[u] must be sorted and free of self-loops.
    KnnGraph(std::vector<std::size_t> node_ids, std::size_t k, std::vector<std::vector<Neighbor>> lists);

    std::size_t size() const { return node_ids_.size(); }
    std::size_t k() const { return k_; }
    const std::vector<std::size_t>& node_ids() const { return node_ids_; }
    std::size_t id(std::size_t pos) const { return node_ids_.at(pos); }
    std::optional<std::size_t> position_of(std::size_t id) const;

    std::span<const Neighbor> knn(std::size_t pos) const;
    std::span<const Neighbor> neighbors(std::size_t pos) const;
    /// Symmetrized neighbors of `pos` that are in `restrict` (sorted positions).
    std::vector<std::size_t> neighbors(std::size_t pos, std::span<const std::size_t> restrict) const;

    /// Undirected edge count of the symmetrized graph.
    std::size_t edge_count() const { return sym_entries_.size() / 2; }

    /// One line per node: "id: neighbor_id(distance), ..." over the directed lists.
    void dump(std::ostream& out) const;

  private:
    void check(std::size_t pos) const;

    std::vector<std::size_t> node_ids_;
    std::vector<std::size_t> sorted_ids_;   // for position_of
    std::vector<std::size_t> sorted_pos_;
    std::size_t k_ = 0;
    std::vector<std::vector<Neighbor>> lists_;
    std::vector<std::size_t> sym_offsets_;
    std::vector<Neighbor> sym_entries_;
};

struct ApproximateKnnOptions {
    std::size_t trees = 4;
    std::size_t leaf_size = 32;
    std::size_t refine_rounds = 8;  // neighbor-of-neighbor passes after the forest
    std::size_t width_factor = 2;   // candidates kept per point during the search, as a multiple of k
};

/// Exact mode is brute force. Approximate mode seeds candidates from a forest of
/// random-projection trees and improves them with neighbor-of-neighbor passes.
/// Throws invalid_argument on an empty subset or k == 0.
KnnGraph build_knn(const Dataset& data, std::span<const std::size_t> subset, std::size_t k, KnnMode mode,
                   std::uint64_t seed, const ApproximateKnnOptions& approx = {});

}  // namespace mlsvm
