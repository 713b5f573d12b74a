#include "mlsvm/metrics.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace mlsvm {

void ConfusionMatrix::add(int truth, int predicted) {
    if (truth == 1)
        (predicted == 1 ? tp : fn)++;
    else
        (predicted == 1 ? fp : tn)++;
}

ConfusionMatrix confusion(const TrainedModel& model, const Dataset& data,
                          std::span<const std::size_t> subset) {
    ConfusionMatrix cm;
    for (std::size_t i : subset) cm.add(data.label(i), predict(model, data.row(i)));
    return cm;
}

ConfusionMatrix confusion(const TrainedModel& model, const Dataset& data) {
    std::vector<std::size_t> all(data.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return confusion(model, data, all);
}

namespace {
double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

Measures measures(const ConfusionMatrix& cm) {
    Measures m;
    m.acc = ratio(cm.tp + cm.tn, cm.total());
    m.sn = ratio(cm.tp, cm.tp + cm.fn);
    m.sp = ratio(cm.tn, cm.tn + cm.fp);
    m.gmean = std::sqrt(m.sn * m.sp);
    return m;
}

}  // namespace mlsvm
