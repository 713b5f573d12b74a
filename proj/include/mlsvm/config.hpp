#pragma once

#include "mlsvm/knn_graph.hpp"
#include "mlsvm/model_selection.hpp"
#include "mlsvm/svm_solver.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace mlsvm {

/// Which class sizes set the weighted (WSVM) penalties.
enum class WeightScope {
    global,  // the full training set, for every model trained in a run
    subset,  // each training subset's own class sizes
};

std::string_view to_string(WeightScope scope);

struct MultilevelConfig {
    double q = 0.6;                      // coarse level keeps at least q * |V| points per class
    std::size_t coarsest_size = 500;     // stop coarsening once |J_r| <= this
    std::size_t q_dt = 0;                // refinement threshold; 0 = 1000, or 500 when |J| < 10000
    std::size_t knn_k = 10;
    std::size_t neighbor_count = 5;      // graph neighbors added per inherited support vector
    std::size_t cluster_target = 300;    // k-means K = ceil(class size / cluster_target)
    std::size_t p_pairs = 1;             // nearest opposite-class clusters per cluster
    ParamBox ud_box{};
    bool weighted = false;
    std::uint64_t seed = 1;
    KnnMode knn_mode = KnnMode::approximate;
    double smo_tolerance = 1e-3;
    std::size_t smo_max_iter = 0;        // 0: the solver default
    WorkingSetRule working_set = WorkingSetRule::first_order;
    std::size_t cv_folds = 5;
    std::size_t cache_mb = 64;
    std::size_t threads = 1;
    double test_fraction = 0.2;
    WeightScope weight_scope = WeightScope::global;

    /// Throws invalid_argument when a knob is out of range.
    void validate() const;
    std::size_t resolved_q_dt(std::size_t dataset_size) const;
    /// Replication floor per class: classes at or below it are copied, not coarsened.
    std::size_t replication_floor() const { return coarsest_size / 2; }
    SolverOptions solver_options() const;
};

/// Sets one field by its name (the names used in config files). Throws invalid_argument.
void apply_setting(MultilevelConfig& config, std::string_view key, std::string_view value);

/// Flat "key=value" lines; '#' starts a comment. Unknown keys are errors.
void apply_config_text(MultilevelConfig& config, std::istream& in);
MultilevelConfig load_config(const std::string& path);

/// All fields as "key=value" lines, readable by apply_config_text.
std::string to_config_text(const MultilevelConfig& config);

}  // namespace mlsvm
