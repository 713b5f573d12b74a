#include "mlsvm/refinement.hpp"

#include "mlsvm/clustering.hpp"
#include "mlsvm/error.hpp"
#include "mlsvm/log.hpp"
#include "mlsvm/parallel.hpp"
#include "mlsvm/seed.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace mlsvm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool has_both_classes(const Dataset& data, std::span<const std::size_t> ids) {
    const ClassSizes s = class_sizes(data, ids);
    return s.plus > 0 && s.minus > 0;
}

void split_by_class(const Dataset& data, std::span<const std::size_t> ids, std::vector<std::size_t>& plus,
                    std::vector<std::size_t>& minus) {
    for (std::size_t id : ids) (data.label(id) == 1 ? plus : minus).push_back(id);
}

}  // namespace

std::string_view to_string(RefineBranch branch) {
    switch (branch) {
        case RefineBranch::coarsest: return "coarsest";
        case RefineBranch::direct: return "direct";
        case RefineBranch::cluster_pairs: return "pairs";
        case RefineBranch::inherited: return "inherited";
    }
    return "?";
}

RefinementOptions make_refinement_options(const Dataset& data, bool weighted, bool with_ud,
                                          const MultilevelConfig& config) {
    config.validate();
    RefinementOptions o;
    o.weighted = weighted;
    o.with_ud = with_ud;
    o.config = config;
    o.q_dt = config.resolved_q_dt(data.size());
    if (weighted && config.weight_scope == WeightScope::global) o.weight_basis = data.class_sizes();
    return o;
}

HyperParams refinement_hyper(const Dataset& data, std::span<const std::size_t> ids, double c, double gamma,
                             const RefinementOptions& options) {
    HyperParams h;
    h.c = c;
    h.kernel = {KernelKind::rbf, gamma};
    h.weights = penalty_weights(c, options.weighted, options.weight_basis.value_or(class_sizes(data, ids)));
    return h;
}

UdOptions ud_options_for(const RefinementOptions& options, std::uint64_t seed) {
    UdOptions u;
    u.weighted = options.weighted;
    u.box = options.config.ud_box;
    u.folds = options.config.cv_folds;
    u.seed = seed;
    u.weight_basis = options.weight_basis;
    u.solver = options.config.solver_options();
    u.threads = options.config.threads;
    return u;
}

LevelSolution solve_coarsest(const Hierarchy& hierarchy, const Dataset& data, const RefinementOptions& options,
                             std::optional<UdResult>* ud) {
    const Level& level = hierarchy.coarsest();
    if (level.plus_ids.empty() || level.minus_ids.empty())
        throw invalid_argument("coarsest level has a single class");
    const auto ids = level.all_ids();

    UdPoint point = options.config.ud_box.center();
    if (options.with_ud) {
        UdResult result = ud_search(data, ids, ud_options_for(options, derive_seed(options.config.seed, "ud")));
        point = UdPoint::from_values(result.best_c, result.best_gamma);
        if (ud) *ud = std::move(result);
    }
    LevelSolution sol;
    sol.level_index = level.index;
    sol.c = point.c();
    sol.gamma = point.gamma();
    sol.model = train(data, ids, refinement_hyper(data, ids, sol.c, sol.gamma, options),
                      options.config.solver_options());
    sol.sv_ids = sol.model->sv_ids;
    std::sort(sol.sv_ids.begin(), sol.sv_ids.end());
    return sol;
}

RefinementTrainSet build_train_set(const LevelSolution& coarse, const Level& level, std::size_t neighbor_count) {
    std::vector<std::pair<std::size_t, Provenance>> entries;
    for (std::size_t id : coarse.sv_ids) entries.emplace_back(id, Provenance::inherited_sv);
    if (neighbor_count > 0) {
        for (std::size_t id : coarse.sv_ids) {
            const bool plus = std::binary_search(level.plus_ids.begin(), level.plus_ids.end(), id);
            const KnnGraph* graph = level.graph_for(plus ? 1 : -1);
            if (!graph) continue;
            const auto pos = graph->position_of(id);
            if (!pos) throw invalid_argument("inherited support vector is missing from the finer level");
            const auto nbrs = graph->knn(*pos);
            const std::size_t take = std::min(neighbor_count, nbrs.size());
            for (std::size_t t = 0; t < take; ++t) entries.emplace_back(graph->id(nbrs[t].node), Provenance::neighbor);
        }
    }
    // Inherited entries sort first for equal ids, so unique() keeps them.
    std::sort(entries.begin(), entries.end());
    entries.erase(std::unique(entries.begin(), entries.end(),
                              [](const auto& a, const auto& b) { return a.first == b.first; }),
                  entries.end());
    RefinementTrainSet set;
    set.ids.reserve(entries.size());
    set.provenance.reserve(entries.size());
    for (const auto& [id, from] : entries) {
        set.ids.push_back(id);
        set.provenance.push_back(from);
    }
    return set;
}

LevelSolution refine_level(const RefinementTrainSet& train_set, double c, double gamma, const Dataset& data,
                           const RefinementOptions& options, std::size_t level_index, LevelStats* stats) {
    LevelSolution sol;
    sol.level_index = level_index;
    sol.c = c;
    sol.gamma = gamma;
    const auto& ids = train_set.ids;
    const SolverOptions solver = options.config.solver_options();

    if (!has_both_classes(data, ids)) {
        log::warn("level {}: refinement set has a single class, keeping the inherited support vectors", level_index);
        for (std::size_t k = 0; k < ids.size(); ++k)
            if (train_set.provenance[k] == Provenance::inherited_sv) sol.sv_ids.push_back(ids[k]);
        if (stats) stats->branch = RefineBranch::inherited;
        return sol;
    }

    if (ids.size() < options.q_dt) {
        if (options.with_ud) {
            UdOptions u = ud_options_for(options, derive_seed(options.config.seed, "ud", level_index));
            u.warm_center = UdPoint::from_values(c, gamma);
            const UdResult result = ud_search(data, ids, u);
            sol.c = result.best_c;
            sol.gamma = result.best_gamma;
        }
        sol.model = train(data, ids, refinement_hyper(data, ids, sol.c, sol.gamma, options), solver);
        sol.sv_ids = sol.model->sv_ids;
        std::sort(sol.sv_ids.begin(), sol.sv_ids.end());
        if (stats) stats->branch = RefineBranch::direct;
        return sol;
    }

    std::vector<std::size_t> plus_ids, minus_ids;
    split_by_class(data, ids, plus_ids, minus_ids);
    const std::size_t target = options.config.cluster_target;
    auto clusters_for = [&](const std::vector<std::size_t>& class_ids, std::string_view name) {
        const std::size_t k = (class_ids.size() + target - 1) / target;
        return kmeans(data, class_ids, k, derive_seed(options.config.seed, name, level_index));
    };
    const Clustering plus = clusters_for(plus_ids, "kmeans+");
    const Clustering minus = clusters_for(minus_ids, "kmeans-");
    const auto pairs = pair_opposite_clusters(plus, minus, options.config.p_pairs);

    std::vector<std::vector<std::size_t>> pair_svs(pairs.size());
    parallel_for(pairs.size(), options.config.threads, [&](std::size_t k) {
        std::vector<std::size_t> pair_ids;
        for (std::size_t pos : plus.members[pairs[k].first]) pair_ids.push_back(plus_ids[pos]);
        for (std::size_t pos : minus.members[pairs[k].second]) pair_ids.push_back(minus_ids[pos]);
        std::sort(pair_ids.begin(), pair_ids.end());
        if (!has_both_classes(data, pair_ids)) throw invalid_argument("cluster pair has a single class");
        const auto model = train(data, pair_ids, refinement_hyper(data, pair_ids, c, gamma, options), solver);
        pair_svs[k] = model.sv_ids;
    });
    for (const auto& svs : pair_svs) sol.sv_ids.insert(sol.sv_ids.end(), svs.begin(), svs.end());
    std::sort(sol.sv_ids.begin(), sol.sv_ids.end());
    sol.sv_ids.erase(std::unique(sol.sv_ids.begin(), sol.sv_ids.end()), sol.sv_ids.end());
    if (stats) {
        stats->branch = RefineBranch::cluster_pairs;
        stats->pairs = pairs.size();
    }
    return sol;
}

MultilevelResult multilevel_train(const Dataset& data, bool weighted, const MultilevelConfig& config, bool with_ud) {
    const RefinementOptions options = make_refinement_options(data, weighted, with_ud, config);
    MultilevelResult out;

    auto start = Clock::now();
    const Hierarchy hierarchy = build_hierarchy(data, config);
    out.coarsening_seconds = seconds_since(start);
    out.depth = hierarchy.depth();

    auto row_for = [&](const Level& level, const LevelSolution& sol, std::size_t train_size) {
        LevelStats s;
        s.level = level.index;
        s.plus = level.plus_ids.size();
        s.minus = level.minus_ids.size();
        s.train_size = train_size;
        s.sv_count = sol.sv_ids.size();
        s.c = sol.c;
        s.gamma = sol.gamma;
        return s;
    };

    start = Clock::now();
    LevelSolution current = solve_coarsest(hierarchy, data, options, &out.coarsest_ud);
    {
        LevelStats s = row_for(hierarchy.coarsest(), current, hierarchy.coarsest().size());
        s.seconds = seconds_since(start);
        out.levels.push_back(s);
    }
    log::info("level {}: coarsest solved, {} support vectors, C={:.6g} gamma={:.6g}", current.level_index,
              current.sv_ids.size(), current.c, current.gamma);

    for (std::size_t i = hierarchy.depth(); i-- > 0;) {
        start = Clock::now();
        const Level& level = hierarchy.levels[i];
        const RefinementTrainSet set = build_train_set(current, level, config.neighbor_count);
        LevelStats s;
        LevelSolution next = refine_level(set, current.c, current.gamma, data, options, i, &s);
        if (next.sv_ids.empty()) {
            log::warn("level {}: refinement produced no support vectors, keeping the inherited ones", i);
            next.sv_ids = current.sv_ids;
        }
        const std::size_t pairs = s.pairs;
        const RefineBranch branch = s.branch;
        s = row_for(level, next, set.ids.size());
        s.pairs = pairs;
        s.branch = branch;
        current = std::move(next);
        s.seconds = seconds_since(start);
        out.levels.push_back(s);
        log::info("level {}: {} train points, branch {}, {} support vectors", i, set.ids.size(), to_string(branch),
                  current.sv_ids.size());
    }

    if (current.model) {
        out.model = std::move(*current.model);
    } else {
        start = Clock::now();
        out.model = train(data, current.sv_ids, refinement_hyper(data, current.sv_ids, current.c, current.gamma, options),
                          config.solver_options());
        out.levels.back().seconds += seconds_since(start);
    }
    return out;
}

}  // namespace mlsvm
