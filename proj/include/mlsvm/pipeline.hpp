#pragma once

#include "mlsvm/config.hpp"
#include "mlsvm/data.hpp"
#include "mlsvm/metrics.hpp"
#include "mlsvm/refinement.hpp"
#include "mlsvm/svm_solver.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mlsvm {

/// Stratified train/test split; both parts z-scored with the training statistics.
struct Split {
    Dataset train;
    Dataset test;
};

/// `test_fraction` of each class goes to the test part. Uses sub-seed "split".
Split prepare_split(const Dataset& data, double test_fraction, std::uint64_t seed);

struct RunMode {
    bool multilevel = true;
    bool weighted = false;
    bool with_ud = true;

    /// "ml+ud", "ml", "single+ud" or "single", with a "w" prefix when weighted ("wml+ud").
    std::string name() const;
    bool operator==(const RunMode&) const = default;
};

/// Parses the names produced by RunMode::name (without the weighted prefix) for `weighted`.
RunMode run_mode_from_string(std::string_view name, bool weighted);

struct RunReport {
    RunMode mode;
    ConfusionMatrix confusion;
    Measures measures;
    std::size_t depth = 0;
    double wall_seconds = 0.0;           // training only
    std::vector<LevelStats> levels;      // coarsest first; one row for single-level runs
    std::size_t sv_count = 0;
    double c = 0.0;
    double gamma = 0.0;
    bool converged = true;
};

using RunResult = std::pair<TrainedModel, RunReport>;

/// Trains on all of `train`; measures come from `test` (or `train` when `test` is null).
RunResult run_single_level(const Dataset& train, bool weighted, bool with_ud, const MultilevelConfig& config,
                           const Dataset* test = nullptr);
RunResult run_multilevel(const Dataset& train, bool weighted, bool with_ud, const MultilevelConfig& config,
                         const Dataset* test = nullptr);
RunResult run(const RunMode& mode, const Dataset& train, const MultilevelConfig& config,
              const Dataset* test = nullptr);

/// The four multilevel x model-selection modes (or `modes`) on one shared split.
std::vector<RunReport> benchmark(const Dataset& data, const MultilevelConfig& config,
                                 std::vector<RunMode> modes = {});
std::vector<RunMode> default_benchmark_modes(bool weighted);

void print_report(std::ostream& out, const RunReport& report);
/// One row per report: mode, depth, seconds, ACC, SN, SP, G-mean. `csv` switches to comma-separated.
void print_benchmark(std::ostream& out, const std::vector<RunReport>& reports, bool csv = false);

}  // namespace mlsvm
