#include "mlsvm/coarsening.hpp"

#include "mlsvm/error.hpp"
#include "mlsvm/log.hpp"
#include "mlsvm/parallel.hpp"
#include "mlsvm/seed.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

namespace mlsvm {

std::vector<std::size_t> coarsen_class(const KnnGraph& graph, double q, std::uint64_t seed) {
    if (!(q > 0.0 && q < 1.0)) throw invalid_argument(fmt::format("q must be in (0, 1), got {}", q));
    const std::size_t n = graph.size();
    if (n == 0) throw invalid_argument("cannot coarsen an empty graph");

    std::mt19937_64 rng(seed);
    std::vector<char> selected(n, 0);
    std::vector<char> available(n, 0);
    std::vector<std::size_t> order;
    std::size_t count = 0;
    const double target = q * static_cast<double>(n);

    // Each pass picks random available nodes, dropping their neighbors from the pool,
    // so it adds an independent set of the subgraph induced by the unselected nodes.
    do {
        order.clear();
        for (std::size_t u = 0; u < n; ++u) {
            available[u] = !selected[u];
            if (available[u]) order.push_back(u);
        }
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t u : order) {
            if (!available[u]) continue;
            available[u] = 0;
            selected[u] = 1;
            ++count;
            for (const Neighbor& nb : graph.neighbors(u)) available[nb.node] = 0;
        }
    } while (static_cast<double>(count) < target);

    std::vector<std::size_t> out;
    out.reserve(count);
    for (std::size_t u = 0; u < n; ++u)
        if (selected[u]) out.push_back(u);
    return out;
}

std::vector<std::size_t> Level::all_ids() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    std::merge(plus_ids.begin(), plus_ids.end(), minus_ids.begin(), minus_ids.end(), std::back_inserter(out));
    return out;
}

void Hierarchy::summary(std::ostream& out) const {
    out << fmt::format("{:>5} {:>8} {:>8} {:>8} {:>6} {:>6}\n", "level", "|C+|", "|C-|", "|J|", "rep+", "rep-");
    for (const Level& l : levels)
        out << fmt::format("{:>5} {:>8} {:>8} {:>8} {:>6} {:>6}\n", l.index, l.plus_ids.size(), l.minus_ids.size(),
                           l.size(), l.replicated_plus ? "yes" : "no", l.replicated_minus ? "yes" : "no");
}

namespace {

struct ClassStep {
    std::shared_ptr<const KnnGraph> graph;
    std::vector<std::size_t> next_ids;
    bool replicated = false;
};

ClassStep coarsen_step(const Dataset& data, const std::vector<std::size_t>& ids, std::size_t floor,
                       const MultilevelConfig& config, std::uint64_t seed) {
    ClassStep step;
    step.graph = std::make_shared<const KnnGraph>(
        build_knn(data, ids, config.knn_k, config.knn_mode, derive_seed(seed, "knn")));
    if (ids.size() <= floor) {
        step.next_ids = ids;
        step.replicated = true;
        return step;
    }
    for (std::size_t pos : coarsen_class(*step.graph, config.q, derive_seed(seed, "mis")))
        step.next_ids.push_back(step.graph->id(pos));
    std::sort(step.next_ids.begin(), step.next_ids.end());
    return step;
}

}  // namespace

Hierarchy build_hierarchy(const Dataset& data, const MultilevelConfig& config) {
    config.validate();
    if (data.plus_idx().empty() || data.minus_idx().empty())
        throw invalid_argument("hierarchy needs both classes to be non-empty");

    Hierarchy h;
    h.config = config;
    Level level0;
    level0.plus_ids = data.plus_idx();
    level0.minus_ids = data.minus_idx();
    h.levels.push_back(std::move(level0));

    const std::size_t floor = config.replication_floor();
    const std::uint64_t base = derive_seed(config.seed, "coarsening");
    while (h.levels.back().size() > config.coarsest_size) {
        Level& fine = h.levels.back();
        const std::size_t i = fine.index;
        ClassStep steps[2];
        const std::vector<std::size_t>* ids[2] = {&fine.plus_ids, &fine.minus_ids};
        parallel_for(2, config.threads, [&](std::size_t c) {
            steps[c] = coarsen_step(data, *ids[c], floor, config, derive_seed(base, c == 0 ? "plus" : "minus", i));
        });
        fine.graph_plus = steps[0].graph;
        fine.graph_minus = steps[1].graph;
        fine.replicated_plus = steps[0].replicated;
        fine.replicated_minus = steps[1].replicated;

        const bool shrank = steps[0].next_ids.size() < fine.plus_ids.size() ||
                            steps[1].next_ids.size() < fine.minus_ids.size();
        if (!shrank) {
            log::warn("coarsening stalled at level {} with {} points", i, fine.size());
            break;
        }
        Level next;
        next.index = i + 1;
        next.plus_ids = std::move(steps[0].next_ids);
        next.minus_ids = std::move(steps[1].next_ids);
        h.levels.push_back(std::move(next));
    }
    return h;
}

}  // namespace mlsvm
