#include "mlsvm/error.hpp"
#include "mlsvm/model_selection.hpp"

#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace mlsvm;

namespace {

Dataset separable(std::size_t per_class, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 0.3);
    std::vector<double> x;
    std::vector<int> y;
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        const int label = i < per_class ? 1 : -1;
        x.push_back(g(rng) + 3.0 * label);
        x.push_back(g(rng));
        y.push_back(label);
    }
    return Dataset(2, x, y);
}

const ParamBox unit{0.0, 1.0, 0.0, 1.0};

}  // namespace

TEST_SUITE("model_selection") {

TEST_CASE("first stage lattice on the unit box") {
    const auto p = ud_points(unit, UdStage::first);
    REQUIRE(p.size() == 9);
    CHECK(p[0].log2_c == doctest::Approx(1.0 / 18));
    CHECK(p[0].log2_gamma == doctest::Approx(1.0 / 18));
    CHECK(p[1].log2_c == doctest::Approx(3.0 / 18));
    CHECK(p[1].log2_gamma == doctest::Approx(11.0 / 18));
    const int order[] = {1, 6, 2, 7, 3, 8, 4, 9, 5};
    for (int m = 0; m < 9; ++m) {
        CHECK(p[m].log2_c == doctest::Approx((2.0 * (m + 1) - 1) / 18));
        CHECK(p[m].log2_gamma == doctest::Approx((2.0 * order[m] - 1) / 18));
    }
}

TEST_CASE("second stage lattice order") {
    const auto p = ud_points(unit, UdStage::second);
    REQUIRE(p.size() == 5);
    const int order[] = {1, 3, 5, 2, 4};
    for (int m = 0; m < 5; ++m) {
        CHECK(p[m].log2_c == doctest::Approx((2.0 * (m + 1) - 1) / 10));
        CHECK(p[m].log2_gamma == doctest::Approx((2.0 * order[m] - 1) / 10));
    }
    std::set<std::pair<double, double>> distinct;
    for (const auto& q : p) distinct.insert({q.log2_c, q.log2_gamma});
    CHECK(distinct.size() == 5);
}

TEST_CASE("flat dimension collapses to one coordinate") {
    const ParamBox flat{2.0, 2.0, -4.0, 4.0};
    for (const auto& q : ud_points(flat, UdStage::first)) CHECK(q.log2_c == 2.0);
    CHECK_THROWS_AS((ParamBox{1.0, 0.0, 0.0, 1.0}.validate()), invalid_argument);
}

TEST_CASE("nested box is half size, centered and clipped") {
    const ParamBox outer{};
    const ParamBox inner = nested_box(outer, outer.center());
    CHECK(inner.log2_c_hi - inner.log2_c_lo == doctest::Approx(10.0));
    CHECK(inner.log2_gamma_hi - inner.log2_gamma_lo == doctest::Approx(9.0));
    const ParamBox corner = nested_box(outer, {-5.0, 3.0});
    CHECK(corner.log2_c_lo == -5.0);
    CHECK(corner.log2_c_hi == doctest::Approx(0.0));
    CHECK(corner.log2_gamma_hi == 3.0);
    CHECK(corner.log2_gamma_lo == doctest::Approx(-1.5));
}

TEST_CASE("separable data reaches G-mean 1 and every point lies in the box") {
    const Dataset d = separable(40, 3);
    UdOptions o;
    o.seed = 5;
    const UdResult r = ud_search(d, testing::all_ids(d), o);
    CHECK(r.best_gmean == 1.0);
    CHECK(r.evaluations.size() == 14);
    double best = 0.0;
    for (const auto& e : r.evaluations) {
        CHECK(o.box.contains(e.point));
        best = std::max(best, e.gmean);
    }
    CHECK(r.best_gmean == best);
}

TEST_CASE("ties go to the smaller C, then the smaller gamma") {
    const Dataset d = separable(30, 7);
    UdOptions o;
    o.seed = 1;
    const UdResult r = ud_search(d, testing::all_ids(d), o);
    UdPoint want{1e9, 1e9};
    for (const auto& e : r.evaluations)
        if (e.gmean == r.best_gmean &&
            (e.point.log2_c < want.log2_c || (e.point.log2_c == want.log2_c && e.point.log2_gamma < want.log2_gamma)))
            want = e.point;
    CHECK(r.best_c == want.c());
    CHECK(r.best_gamma == want.gamma());
}

TEST_CASE("search is deterministic and thread-count independent") {
    std::mt19937_64 rng(9);
    const Dataset d = testing::random_dataset(80, 2, rng);
    UdOptions o;
    o.seed = 11;
    const UdResult a = ud_search(d, testing::all_ids(d), o);
    o.threads = 3;
    const UdResult b = ud_search(d, testing::all_ids(d), o);
    REQUIRE(a.evaluations.size() == b.evaluations.size());
    for (std::size_t k = 0; k < a.evaluations.size(); ++k) {
        CHECK(a.evaluations[k].point == b.evaluations[k].point);
        CHECK(a.evaluations[k].gmean == b.evaluations[k].gmean);
    }
    CHECK(a.best_c == b.best_c);
    CHECK(a.best_gamma == b.best_gamma);
}

TEST_CASE("warm start runs only the second stage around the center") {
    const Dataset d = separable(25, 2);
    UdOptions o;
    o.warm_center = UdPoint{4.0, -2.0};
    const UdResult r = ud_search(d, testing::all_ids(d), o);
    CHECK(r.evaluations.size() == 5);
    const ParamBox inner = nested_box(o.box, *o.warm_center);
    for (const auto& e : r.evaluations) {
        CHECK(e.stage == 2);
        CHECK(inner.contains(e.point));
    }
}

TEST_CASE("single-class subsets are rejected") {
    const Dataset d = separable(10, 1);
    const std::vector<std::size_t> plus_only{0, 1, 2, 3};
    CHECK_THROWS_AS(ud_search(d, plus_only, UdOptions{}), invalid_argument);
}

TEST_CASE("tiny classes fall back to fewer folds") {
    const Dataset d(1, {-2.0, -1.0, 1.0, 2.0, 3.0}, {-1, -1, 1, 1, 1});
    UdOptions o;
    const double g = cross_validated_gmean(d, testing::all_ids(d), UdPoint{0.0, 0.0}, o);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0);
    const Dataset lone(1, {-2.0, 1.0, 2.0}, {-1, 1, 1});
    CHECK(cross_validated_gmean(lone, testing::all_ids(lone), UdPoint{3.0, 0.0}, o) == 1.0);
}

}
