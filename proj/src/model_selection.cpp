#include "mlsvm/model_selection.hpp"

#include "mlsvm/error.hpp"
#include "mlsvm/log.hpp"
#include "mlsvm/metrics.hpp"
#include "mlsvm/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace mlsvm {

double UdPoint::c() const { return std::exp2(log2_c); }
double UdPoint::gamma() const { return std::exp2(log2_gamma); }
UdPoint UdPoint::from_values(double c, double gamma) { return {std::log2(c), std::log2(gamma)}; }

void ParamBox::validate() const {
    if (!(log2_c_lo <= log2_c_hi) || !(log2_gamma_lo <= log2_gamma_hi))
        throw invalid_argument(fmt::format("invalid search box log2C [{}, {}] log2gamma [{}, {}]", log2_c_lo,
                                           log2_c_hi, log2_gamma_lo, log2_gamma_hi));
}

bool ParamBox::contains(const UdPoint& p) const {
    return p.log2_c >= log2_c_lo && p.log2_c <= log2_c_hi && p.log2_gamma >= log2_gamma_lo &&
           p.log2_gamma <= log2_gamma_hi;
}

UdPoint ParamBox::center() const { return {(log2_c_lo + log2_c_hi) / 2.0, (log2_gamma_lo + log2_gamma_hi) / 2.0}; }

UdPoint ParamBox::clamp(const UdPoint& p) const {
    return {std::clamp(p.log2_c, log2_c_lo, log2_c_hi), std::clamp(p.log2_gamma, log2_gamma_lo, log2_gamma_hi)};
}

std::vector<UdPoint> ud_points(const ParamBox& box, UdStage stage) {
    box.validate();
    const int runs = stage == UdStage::first ? 9 : 5;
    const int generator = stage == UdStage::first ? 5 : 2;
    std::vector<UdPoint> out;
    out.reserve(static_cast<std::size_t>(runs));
    for (int m = 1; m <= runs; ++m) {
        const int sigma = (generator * (m - 1)) % runs + 1;
        const double u1 = (2.0 * m - 1.0) / (2.0 * runs);
        const double u2 = (2.0 * sigma - 1.0) / (2.0 * runs);
        out.push_back({box.log2_c_lo + u1 * (box.log2_c_hi - box.log2_c_lo),
                       box.log2_gamma_lo + u2 * (box.log2_gamma_hi - box.log2_gamma_lo)});
    }
    return out;
}

ParamBox nested_box(const ParamBox& outer, const UdPoint& center) {
    outer.validate();
    const UdPoint c = outer.clamp(center);
    const double half_c = (outer.log2_c_hi - outer.log2_c_lo) / 4.0;
    const double half_g = (outer.log2_gamma_hi - outer.log2_gamma_lo) / 4.0;
    return {std::max(outer.log2_c_lo, c.log2_c - half_c), std::min(outer.log2_c_hi, c.log2_c + half_c),
            std::max(outer.log2_gamma_lo, c.log2_gamma - half_g), std::min(outer.log2_gamma_hi, c.log2_gamma + half_g)};
}

namespace {

HyperParams hyper_for(const UdPoint& point, const UdOptions& options, ClassSizes train_sizes) {
    HyperParams h;
    h.c = point.c();
    h.kernel = {options.kernel, point.gamma()};
    h.weights = penalty_weights(h.c, options.weighted, options.weight_basis.value_or(train_sizes));
    return h;
}

double gmean_on(const TrainedModel& model, const Dataset& data, std::span<const std::size_t> ids) {
    return measures(confusion(model, data, ids)).gmean;
}

// Strictly better under the documented order: higher G-mean, then smaller C, then smaller gamma.
bool better(const UdEvaluation& a, const UdEvaluation& b) {
    if (a.gmean != b.gmean) return a.gmean > b.gmean;
    if (a.point.log2_c != b.point.log2_c) return a.point.log2_c < b.point.log2_c;
    return a.point.log2_gamma < b.point.log2_gamma;
}

}  // namespace

double cross_validated_gmean(const Dataset& data, std::span<const std::size_t> subset, const UdPoint& point,
                             const UdOptions& options) {
    const ClassSizes sizes = class_sizes(data, subset);
    if (sizes.plus == 0 || sizes.minus == 0) throw invalid_argument("model selection needs both classes");
    const std::size_t folds = std::min({options.folds, sizes.plus, sizes.minus});
    if (folds < 2) {
        const auto model = train(data, subset, hyper_for(point, options, sizes), options.solver);
        return gmean_on(model, data, subset);
    }
    const auto fold_ids = stratified_folds(data, subset, folds, options.seed);
    double total = 0.0;
    std::vector<std::size_t> train_ids;
    for (std::size_t f = 0; f < folds; ++f) {
        train_ids.clear();
        for (std::size_t g = 0; g < folds; ++g)
            if (g != f) train_ids.insert(train_ids.end(), fold_ids[g].begin(), fold_ids[g].end());
        std::sort(train_ids.begin(), train_ids.end());
        const ClassSizes train_sizes = class_sizes(data, train_ids);
        if (train_sizes.plus == 0 || train_sizes.minus == 0) continue;  // scores 0
        const auto model = train(data, train_ids, hyper_for(point, options, train_sizes), options.solver);
        total += gmean_on(model, data, fold_ids[f]);
    }
    return total / static_cast<double>(folds);
}

UdResult ud_search(const Dataset& data, std::span<const std::size_t> subset, const UdOptions& options) {
    options.box.validate();
    const ClassSizes sizes = class_sizes(data, subset);
    if (sizes.plus == 0 || sizes.minus == 0) throw invalid_argument("model selection needs both classes");

    UdResult result;
    auto run_stage = [&](int stage, const std::vector<UdPoint>& points) {
        std::vector<double> scores(points.size());
        parallel_for(points.size(), options.threads,
                     [&](std::size_t k) { scores[k] = cross_validated_gmean(data, subset, points[k], options); });
        for (std::size_t k = 0; k < points.size(); ++k) {
            log::info("ud stage={} log2C={:.4f} log2gamma={:.4f} gmean={:.6f}", stage, points[k].log2_c,
                      points[k].log2_gamma, scores[k]);
            result.evaluations.push_back({stage, points[k], scores[k]});
        }
    };
    auto best_so_far = [&] {
        const UdEvaluation* best = &result.evaluations.front();
        for (const auto& e : result.evaluations)
            if (better(e, *best)) best = &e;
        return *best;
    };

    UdPoint center;
    if (options.warm_center) {
        center = options.box.clamp(*options.warm_center);
    } else {
        run_stage(1, ud_points(options.box, UdStage::first));
        center = best_so_far().point;
    }
    run_stage(2, ud_points(nested_box(options.box, center), UdStage::second));

    const UdEvaluation best = best_so_far();
    result.best_c = best.point.c();
    result.best_gamma = best.point.gamma();
    result.best_gmean = best.gmean;
    return result;
}

}  // namespace mlsvm
