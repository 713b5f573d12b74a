#pragma once

// Uncoarsening: the coarsest level is solved with full model selection, then
// each finer level retrains on the inherited support vectors plus their graph
// neighbors, either directly (small training sets, warm-started UD) or as
// independent trainings over pairs of nearest opposite-class clusters.

#include "mlsvm/coarsening.hpp"
#include "mlsvm/config.hpp"
#include "mlsvm/data.hpp"
#include "mlsvm/model_selection.hpp"
#include "mlsvm/svm_solver.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace mlsvm {

struct LevelSolution {
    std::size_t level_index = 0;
    std::vector<std::size_t> sv_ids;     // dataset indices, sorted
    double c = 1.0;
    double gamma = 1.0;
    std::optional<TrainedModel> model;   // set when the level trained one direct model
};

enum class Provenance { inherited_sv, neighbor };

struct RefinementTrainSet {
    std::vector<std::size_t> ids;        // sorted, distinct
    std::vector<Provenance> provenance;  // parallel to ids
};

enum class RefineBranch { coarsest, direct, cluster_pairs, inherited };
std::string_view to_string(RefineBranch branch);

struct LevelStats {
    std::size_t level = 0;
    std::size_t plus = 0;         // |C+_i|
    std::size_t minus = 0;        // |C-_i|
    std::size_t train_size = 0;   // |data_train|
    RefineBranch branch = RefineBranch::coarsest;
    std::size_t pairs = 0;
    std::size_t sv_count = 0;
    double c = 0.0;
    double gamma = 0.0;
    double seconds = 0.0;
};

/// Everything refinement needs besides the data.
struct RefinementOptions {
    bool weighted = false;
    bool with_ud = true;                 // false: no model selection anywhere, box-center parameters
    MultilevelConfig config{};
    std::optional<ClassSizes> weight_basis;  // fixed class sizes for weighted penalties
    std::size_t q_dt = 1000;
};

/// Resolves Q_dt and the weight basis for training set `data`.
RefinementOptions make_refinement_options(const Dataset& data, bool weighted, bool with_ud,
                                          const MultilevelConfig& config);

/// Penalties for training on `ids` with scale `c`.
HyperParams refinement_hyper(const Dataset& data, std::span<const std::size_t> ids, double c, double gamma,
                             const RefinementOptions& options);

/// UD options for a search on `data` (the options' seed and weighting applied).
UdOptions ud_options_for(const RefinementOptions& options, std::uint64_t seed);

/// Two-stage UD on the coarsest points (box center when with_ud is off), then one model on all of them.
LevelSolution solve_coarsest(const Hierarchy& hierarchy, const Dataset& data, const RefinementOptions& options,
                             std::optional<UdResult>* ud = nullptr);

/// Inherited SVs plus up to `neighbor_count` nearest same-class graph neighbors of each.
RefinementTrainSet build_train_set(const LevelSolution& coarse, const Level& level, std::size_t neighbor_count);

/// One refinement step at `level_index`. Falls back to the inherited SVs when the
/// train set lacks a class. `stats` receives the branch and pair count if given.
LevelSolution refine_level(const RefinementTrainSet& train_set, double c, double gamma, const Dataset& data,
                           const RefinementOptions& options, std::size_t level_index, LevelStats* stats = nullptr);

struct MultilevelResult {
    TrainedModel model;
    std::vector<LevelStats> levels;  // coarsest first
    std::size_t depth = 0;
    double coarsening_seconds = 0.0;
    std::optional<UdResult> coarsest_ud;
};

MultilevelResult multilevel_train(const Dataset& data, bool weighted, const MultilevelConfig& config,
                                  bool with_ud = true);

}  // namespace mlsvm
