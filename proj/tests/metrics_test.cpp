#include "mlsvm/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mlsvm;

namespace {

TrainedModel constant_model(int label, std::size_t dim) {
    TrainedModel m;
    m.n_features = dim;
    m.bias = label;
    return m;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("hypothyroid row: SN 0.98, SP 0.74") {
    const Measures m = measures(ConfusionMatrix{98, 26, 2, 74});
    CHECK(m.sn == doctest::Approx(0.98));
    CHECK(m.sp == doctest::Approx(0.74));
    CHECK(m.gmean == doctest::Approx(std::sqrt(0.7252)));
    CHECK(std::abs(m.gmean - 0.85) <= 0.005);
}

TEST_CASE("perfect and constant predictors") {
    std::vector<double> x(15, 0.0);
    std::vector<int> y(15, 1);
    for (std::size_t i = 10; i < 15; ++i) y[i] = -1;
    const Dataset d(1, x, y);
    CHECK(confusion(constant_model(1, 1), d) == ConfusionMatrix{10, 5, 0, 0});
    CHECK(confusion(constant_model(-1, 1), d) == ConfusionMatrix{0, 0, 10, 5});
    const Measures all = measures(ConfusionMatrix{5, 0, 0, 5});
    CHECK(all == Measures{1.0, 1.0, 1.0, 1.0});
}

TEST_CASE("flipping predictions swaps the matrix") {
    std::vector<double> x{-2, -1, 1, 2, 3};
    std::vector<int> y{-1, -1, 1, 1, 1};
    const Dataset d(1, x, y);
    TrainedModel m;
    m.n_features = 1;
    m.hyper.kernel = {KernelKind::linear, 0.0};
    m.sv_ids = {0};
    m.alphas = {1.0};
    m.labels = {1};
    m.sv_features = {1.0};
    const ConfusionMatrix right = confusion(m, d);
    CHECK(right == ConfusionMatrix{3, 0, 0, 2});
    m.labels = {-1};
    const ConfusionMatrix flipped = confusion(m, d);
    CHECK(flipped == ConfusionMatrix{0, 2, 3, 0});
}

TEST_CASE("zero denominators give zero") {
    const Measures m = measures(ConfusionMatrix{4, 3, 1, 0});
    CHECK(m.sp == 0.0);
    CHECK(m.gmean == 0.0);
    CHECK(measures(ConfusionMatrix{}) == Measures{});
}

TEST_CASE("random matrices satisfy the measure identities") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::size_t> count(0, 50);
    for (int t = 0; t < 500; ++t) {
        const ConfusionMatrix cm{count(rng), count(rng), count(rng), count(rng)};
        const Measures m = measures(cm);
        for (double v : {m.acc, m.sn, m.sp, m.gmean}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(m.gmean <= std::max(m.sn, m.sp) + 1e-15);
        CHECK((m.gmean == 0.0) == (m.sn * m.sp == 0.0));
        const double pos = static_cast<double>(cm.tp + cm.fn), neg = static_cast<double>(cm.tn + cm.fp);
        if (pos > 0 && neg > 0)
            CHECK(m.acc == doctest::Approx((pos * m.sn + neg * m.sp) / (pos + neg)).epsilon(1e-12));
    }
}

}
