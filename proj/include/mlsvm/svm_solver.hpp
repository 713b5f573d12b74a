#pragma once

// Sequential minimal optimization for the weighted soft-margin SVM dual
//
//   min  1/2 a'Qa - e'a   s.t.  y'a = 0,  0 <= a_i <= C_{y_i},   Q_ij = y_i y_j k(x_i, x_j)
//
// with per-class box bounds C+ (y = +1) and C- (y = -1). The plain SVM is the
// special case C+ = C- = C and runs through exactly the same code.

#include "mlsvm/data.hpp"
#include "mlsvm/kernel.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mlsvm {

struct HyperParams {
    double c = 1.0;
    ClassWeights weights{};
    KernelSpec kernel{};

    double bound(int label) const { return label == 1 ? weights.c_plus : weights.c_minus; }
    void validate() const;
};

enum class WorkingSetRule {
    first_order,   // maximal violating pair
    second_order,  // maximal violating i, j by second-order gain
};

std::string_view to_string(WorkingSetRule rule);
WorkingSetRule working_set_rule_from_string(std::string_view name);

struct SolverOptions {
    double tolerance = 1e-3;
    std::size_t max_iter = 0;  // 0: min(10000 * n, 1e7)
    std::size_t cache_bytes = 64u << 20;
    WorkingSetRule rule = WorkingSetRule::first_order;
};

struct TrainedModel {
    std::vector<std::size_t> sv_ids;   // dataset indices of the support vectors
    std::vector<double> alphas;        // 0 < alpha_i <= C_{y_i}
    std::vector<int> labels;
    std::vector<double> sv_features;   // row-major, sv_ids.size() x n_features
    std::size_t n_features = 0;
    double bias = 0.0;
    HyperParams hyper{};
    std::size_t train_size = 0;
    bool converged = true;
    std::size_t iterations = 0;
    double objective = 0.0;            // dual objective at the returned alphas
    LabelMap label_map{};
    std::optional<NormStats> norm;     // applied to raw inputs by the CLI, not by decision_value

    std::size_t sv_count() const { return sv_ids.size(); }
    std::span<const double> sv(std::size_t k) const {
        return {sv_features.data() + k * n_features, n_features};
    }
};

/// Trains on dataset rows `subset`. Throws invalid_argument when the subset has a
/// single class or is empty. A model that hit max_iter has converged == false.
TrainedModel train(const Dataset& data, std::span<const std::size_t> subset,
                   const HyperParams& hyper, const SolverOptions& options = {});

/// f(x) = sum_i alpha_i y_i k(sv_i, x) + b. Throws dimension_error on a length mismatch.
double decision_value(const TrainedModel& model, std::span<const double> x);

/// sign(f(x)) with f(x) = 0 mapped to +1.
int predict(const TrainedModel& model, std::span<const double> x);
inline int label_from_decision(double value) { return value >= 0.0 ? 1 : -1; }

/// 1/2 a'Qa - e'a over `subset`, for checking solutions against other solvers.
double dual_objective(const Dataset& data, std::span<const std::size_t> subset,
                      std::span<const double> alpha, const KernelSpec& kernel);

/// Plain-text model file; reals carry 17 significant digits.
void save_model(std::ostream& out, const TrainedModel& model);
TrainedModel load_model(std::istream& in);
void save_model(const std::string& path, const TrainedModel& model);
TrainedModel load_model(const std::string& path);

}  // namespace mlsvm
