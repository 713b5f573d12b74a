#include "mlsvm/knn_graph.hpp"

#include "mlsvm/error.hpp"
#include "mlsvm/simd.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <tuple>

namespace mlsvm {

std::string_view to_string(KnnMode mode) { return mode == KnnMode::exact ? "exact" : "approximate"; }

KnnMode knn_mode_from_string(std::string_view name) {
    if (name == "exact") return KnnMode::exact;
    if (name == "approximate") return KnnMode::approximate;
    throw invalid_argument(fmt::format("unknown kNN mode '{}'", name));
}

namespace {
bool closer(const Neighbor& a, const Neighbor& b) {
    return std::tie(a.distance, a.node) < std::tie(b.distance, b.node);
}
}  // namespace

KnnGraph::KnnGraph(std::vector<std::size_t> node_ids, std::size_t k, std::vector<std::vector<Neighbor>> lists)
    : node_ids_(std::move(node_ids)), k_(k), lists_(std::move(lists)) {
    const std::size_t n = node_ids_.size();
    if (lists_.size() != n) throw invalid_argument("one neighbor list per node required");

    sorted_pos_.resize(n);
    std::iota(sorted_pos_.begin(), sorted_pos_.end(), std::size_t{0});
    std::sort(sorted_pos_.begin(), sorted_pos_.end(),
              [&](std::size_t a, std::size_t b) { return node_ids_[a] < node_ids_[b]; });
    sorted_ids_.resize(n);
    for (std::size_t r = 0; r < n; ++r) sorted_ids_[r] = node_ids_[sorted_pos_[r]];

    std::vector<std::vector<Neighbor>> sym(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (const Neighbor& nb : lists_[u]) {
            if (nb.node >= n || nb.node == u) throw invalid_argument("neighbor list holds a self-loop or bad node");
            sym[u].push_back(nb);
            sym[nb.node].push_back({u, nb.distance});
        }
    }
    sym_offsets_.assign(n + 1, 0);
    for (std::size_t u = 0; u < n; ++u) {
        auto& s = sym[u];
        std::sort(s.begin(), s.end(), closer);
        s.erase(std::unique(s.begin(), s.end(), [](const Neighbor& a, const Neighbor& b) { return a.node == b.node; }),
                s.end());
        sym_offsets_[u + 1] = sym_offsets_[u] + s.size();
    }
    sym_entries_.reserve(sym_offsets_[n]);
    for (auto& s : sym) sym_entries_.insert(sym_entries_.end(), s.begin(), s.end());
}

std::optional<std::size_t> KnnGraph::position_of(std::size_t id) const {
    const auto it = std::lower_bound(sorted_ids_.begin(), sorted_ids_.end(), id);
    if (it == sorted_ids_.end() || *it != id) return std::nullopt;
    return sorted_pos_[static_cast<std::size_t>(it - sorted_ids_.begin())];
}

void KnnGraph::check(std::size_t pos) const {
    if (pos >= size()) throw invalid_argument(fmt::format("node {} not in graph of {} nodes", pos, size()));
}

std::span<const Neighbor> KnnGraph::knn(std::size_t pos) const {
    check(pos);
    return lists_[pos];
}

std::span<const Neighbor> KnnGraph::neighbors(std::size_t pos) const {
    check(pos);
    return {sym_entries_.data() + sym_offsets_[pos], sym_offsets_[pos + 1] - sym_offsets_[pos]};
}

std::vector<std::size_t> KnnGraph::neighbors(std::size_t pos, std::span<const std::size_t> restrict) const {
    std::vector<std::size_t> out;
    for (const Neighbor& nb : neighbors(pos))
        if (std::binary_search(restrict.begin(), restrict.end(), nb.node)) out.push_back(nb.node);
    return out;
}

void KnnGraph::dump(std::ostream& out) const {
    for (std::size_t u = 0; u < size(); ++u) {
        out << node_ids_[u] << ':';
        for (std::size_t e = 0; e < lists_[u].size(); ++e)
            out << (e ? ", " : " ") << node_ids_[lists_[u][e].node] << '(' << fmt::format("{:.6g}", lists_[u][e].distance)
                << ')';
        out << '\n';
    }
}

namespace {

// Bounded sorted candidate lists keyed on squared distance.
class CandidateLists {
  public:
    CandidateLists(std::size_t n, std::size_t k) : k_(k), lists_(n) {
        for (auto& l : lists_) l.reserve(k + 1);
    }

    bool offer(std::size_t u, std::size_t v, double sq) {
        auto& l = lists_[u];
        const Neighbor cand{v, sq};
        if (l.size() == k_ && !closer(cand, l.back())) return false;
        for (const Neighbor& nb : l)
            if (nb.node == v) return false;
        l.insert(std::upper_bound(l.begin(), l.end(), cand, closer), cand);
        if (l.size() > k_) l.pop_back();
        return true;
    }

    const std::vector<Neighbor>& at(std::size_t u) const { return lists_[u]; }

    std::vector<std::vector<Neighbor>> finish(std::size_t keep) {
        for (auto& l : lists_) {
            if (l.size() > keep) l.resize(keep);
            for (auto& nb : l) nb.distance = std::sqrt(nb.distance);
        }
        return std::move(lists_);
    }

  private:
    std::size_t k_;
    std::vector<std::vector<Neighbor>> lists_;
};

std::vector<std::vector<Neighbor>> exact_lists(const std::vector<double>& packed, std::size_t n, std::size_t dim,
                                               std::size_t k) {
    const auto& kt = simd::active();
    std::vector<double> sq(n);
    std::vector<Neighbor> row;
    std::vector<std::vector<Neighbor>> out(n);
    for (std::size_t u = 0; u < n; ++u) {
        kt.squared_distances(packed.data() + u * dim, packed.data(), n, dim, sq.data());
        row.clear();
        for (std::size_t v = 0; v < n; ++v)
            if (v != u) row.push_back({v, sq[v]});
        const std::size_t take = std::min(k, row.size());
        std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(take), row.end(), closer);
        row.resize(take);
        for (auto& nb : row) nb.distance = std::sqrt(nb.distance);
        out[u] = row;
    }
    return out;
}

void split_tree(const std::vector<double>& packed, std::size_t dim, std::vector<std::size_t>& items,
                std::size_t leaf_size, std::mt19937_64& rng, std::vector<std::vector<std::size_t>>& leaves) {
    const auto& kt = simd::active();
    std::vector<std::vector<std::size_t>> stack;
    stack.push_back(std::move(items));
    std::vector<double> normal(dim);
    while (!stack.empty()) {
        std::vector<std::size_t> node = std::move(stack.back());
        stack.pop_back();
        if (node.size() <= leaf_size) {
            leaves.push_back(std::move(node));
            continue;
        }
        std::uniform_int_distribution<std::size_t> pick(0, node.size() - 1);
        const std::size_t a = node[pick(rng)];
        std::size_t b = node[pick(rng)];
        for (int tries = 0; b == a && tries < 8; ++tries) b = node[pick(rng)];
        const double* xa = packed.data() + a * dim;
        const double* xb = packed.data() + b * dim;
        double offset = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            normal[c] = xa[c] - xb[c];
            offset += normal[c] * (xa[c] + xb[c]) / 2.0;
        }
        std::vector<std::size_t> left, right;
        for (std::size_t id : node)
            (kt.dot(normal.data(), packed.data() + id * dim, dim) > offset ? left : right).push_back(id);
        if (left.empty() || right.empty()) {
            // Degenerate hyperplane (e.g. duplicates): split at random.
            std::shuffle(node.begin(), node.end(), rng);
            left.assign(node.begin(), node.begin() + static_cast<std::ptrdiff_t>(node.size() / 2));
            right.assign(node.begin() + static_cast<std::ptrdiff_t>(node.size() / 2), node.end());
        }
        stack.push_back(std::move(right));
        stack.push_back(std::move(left));
    }
}

std::vector<std::vector<Neighbor>> approximate_lists(const std::vector<double>& packed, std::size_t n,
                                                     std::size_t dim, std::size_t k, std::uint64_t seed,
                                                     const ApproximateKnnOptions& opt) {
    const auto& kt = simd::active();
    CandidateLists cand(n, std::min(n - 1, k * std::max<std::size_t>(opt.width_factor, 1)));
    auto dist = [&](std::size_t u, std::size_t v) {
        return kt.squared_distance(packed.data() + u * dim, packed.data() + v * dim, dim);
    };

    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < opt.trees; ++t) {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        std::vector<std::vector<std::size_t>> leaves;
        split_tree(packed, dim, all, std::max<std::size_t>(opt.leaf_size, 2), rng, leaves);
        for (const auto& leaf : leaves)
            for (std::size_t a = 0; a < leaf.size(); ++a)
                for (std::size_t b = a + 1; b < leaf.size(); ++b) {
                    const double d = dist(leaf[a], leaf[b]);
                    cand.offer(leaf[a], leaf[b], d);
                    cand.offer(leaf[b], leaf[a], d);
                }
    }

    for (std::size_t round = 0; round < opt.refine_rounds; ++round) {
        std::vector<std::vector<std::size_t>> reverse(n);
        for (std::size_t u = 0; u < n; ++u)
            for (const Neighbor& nb : cand.at(u)) reverse[nb.node].push_back(u);
        std::size_t updates = 0;
        std::vector<std::size_t> pool;
        for (std::size_t u = 0; u < n; ++u) {
            pool.clear();
            for (const Neighbor& nb : cand.at(u)) pool.push_back(nb.node);
            pool.insert(pool.end(), reverse[u].begin(), reverse[u].end());
            std::sort(pool.begin(), pool.end());
            pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
            for (std::size_t v : pool) {
                const auto& second = cand.at(v);  // v != u, so offer(u, ...) leaves it intact
                for (const Neighbor& w : second) {
                    if (w.node == u) continue;
                    if (cand.offer(u, w.node, dist(u, w.node))) ++updates;
                }
            }
        }
        if (updates == 0) break;
    }
    return cand.finish(k);
}

}  // namespace

KnnGraph build_knn(const Dataset& data, std::span<const std::size_t> subset, std::size_t k, KnnMode mode,
                   std::uint64_t seed, const ApproximateKnnOptions& approx) {
    if (subset.empty()) throw invalid_argument("cannot build a kNN graph over an empty subset");
    if (k == 0) throw invalid_argument("kNN graph needs k >= 1");
    const std::size_t n = subset.size();
    const std::size_t dim = data.n_features();
    const auto packed = data.gather(subset);
    const std::size_t k_eff = std::min(k, n - 1);
    // Brute force is cheaper than a forest for small sets and is what the forest approximates.
    const bool exact = mode == KnnMode::exact || n <= 4 * std::max<std::size_t>(approx.leaf_size, 2) || k_eff + 1 >= n;
    auto lists = exact ? exact_lists(packed, n, dim, k_eff) : approximate_lists(packed, n, dim, k_eff, seed, approx);
    return KnnGraph(std::vector<std::size_t>(subset.begin(), subset.end()), k, std::move(lists));
}

}  // namespace mlsvm
