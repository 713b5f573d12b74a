#pragma once

#include "mlsvm/data.hpp"
#include "mlsvm/svm_solver.hpp"

#include <cstddef>
#include <span>

namespace mlsvm {

/// Positive class is +1 (the majority class C+).
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const { return tp + fp + fn + tn; }
    void add(int truth, int predicted);
    bool operator==(const ConfusionMatrix&) const = default;
};

struct Measures {
    double acc = 0.0;
    double sn = 0.0;     // TP / (TP + FN)
    double sp = 0.0;     // TN / (TN + FP)
    double gmean = 0.0;  // sqrt(SN * SP)
    bool operator==(const Measures&) const = default;
};

ConfusionMatrix confusion(const TrainedModel& model, const Dataset& data,
                          std::span<const std::size_t> subset);
ConfusionMatrix confusion(const TrainedModel& model, const Dataset& data);

/// Ratios with a zero denominator are 0.
Measures measures(const ConfusionMatrix& cm);

}  // namespace mlsvm
