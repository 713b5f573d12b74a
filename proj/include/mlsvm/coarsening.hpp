#pragma once

#include "mlsvm/config.hpp"
#include "mlsvm/data.hpp"
#include "mlsvm/knn_graph.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

namespace mlsvm {

/// Coarse point selection for one class graph: a random greedy maximal
/// independent set, extended by further independent sets of the not-yet-chosen
/// nodes until at least q * |V| nodes are selected. The last pass may overshoot.
/// Returns sorted node positions; always a dominating set of the graph.
std::vector<std::size_t> coarsen_class(const KnnGraph& graph, double q, std::uint64_t seed);

struct Level {
    std::size_t index = 0;
    std::vector<std::size_t> plus_ids;    // dataset indices, sorted
    std::vector<std::size_t> minus_ids;
    // Per-class graphs over this level's points; null on the coarsest level unless coarsening stalled there.
    std::shared_ptr<const KnnGraph> graph_plus;
    std::shared_ptr<const KnnGraph> graph_minus;
    bool replicated_plus = false;         // copied unchanged to the next level
    bool replicated_minus = false;

    std::size_t size() const { return plus_ids.size() + minus_ids.size(); }
    std::vector<std::size_t> all_ids() const;  // sorted union
    const KnnGraph* graph_for(int label) const {
        return (label == 1 ? graph_plus : graph_minus).get();
    }
};

struct Hierarchy {
    std::vector<Level> levels;  // 0 = finest
    MultilevelConfig config;

    std::size_t depth() const { return levels.empty() ? 0 : levels.size() - 1; }
    const Level& coarsest() const { return levels.back(); }
    /// Per level: sizes of C+ and C-, replication flags.
    void summary(std::ostream& out) const;
};

/// Throws invalid_argument when a class is empty.
Hierarchy build_hierarchy(const Dataset& data, const MultilevelConfig& config);

}  // namespace mlsvm
