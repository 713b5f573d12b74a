#include "mlsvm/data.hpp"
#include "mlsvm/error.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace mlsvm;

namespace {

Dataset parse(const std::string& text, const ParseOptions& options = {}) {
    std::istringstream in(text);
    return parse_libsvm(in, options);
}

Dataset column_dataset(const std::vector<double>& column, const std::vector<int>& labels) {
    return Dataset(1, column, labels);
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("parse_libsvm fills missing entries with zero") {
    const Dataset d = parse("+1 1:0.5 3:2.0\n-1 2:1.0");
    REQUIRE(d.size() == 2);
    CHECK(d.n_features() == 3);
    CHECK(std::vector<double>(d.row(0).begin(), d.row(0).end()) == std::vector<double>{0.5, 0.0, 2.0});
    CHECK(std::vector<double>(d.row(1).begin(), d.row(1).end()) == std::vector<double>{0.0, 1.0, 0.0});
}

TEST_CASE("parse_libsvm rejects empty input") {
    CHECK_THROWS_WITH_AS(parse(""), "empty input", parse_error);
    CHECK_THROWS_AS(parse("\n\n# only a comment\n"), parse_error);
}

TEST_CASE("larger raw class becomes +1") {
    const Dataset d = parse("0 1:1\n1 1:2\n1 1:3\n");
    CHECK(d.label(0) == -1);
    CHECK(d.label(1) == 1);
    CHECK(d.label(2) == 1);
    CHECK(d.class_sizes().plus == 2);
    CHECK(d.label_map() == LabelMap{1.0, 0.0});
}

TEST_CASE("tied class sizes map the smaller raw label to +1") {
    const Dataset d = parse("3 1:1\n7 1:2\n");
    CHECK(d.label_map() == LabelMap{3.0, 7.0});
}

TEST_CASE("parse errors carry the line number") {
    CHECK_THROWS_WITH_AS(parse("1 1:1\n-1 2:x\n"), doctest::Contains("line 2"), parse_error);
    CHECK_THROWS_WITH_AS(parse("1 2:1 1:3\n-1 1:1\n"), doctest::Contains("line 1"), parse_error);
    CHECK_THROWS_WITH_AS(parse("1 0:1\n-1 1:1\n"), doctest::Contains("1-based"), parse_error);
    CHECK_THROWS_AS(parse("1 1:1\n2 1:1\n3 1:1\n"), parse_error);
    CHECK_THROWS_AS(parse("1 1:1\n1 1:2\n"), parse_error);
}

TEST_CASE("fixed label map and width") {
    ParseOptions o;
    o.labels = LabelMap{5.0, 9.0};
    o.n_features = 4;
    const Dataset d = parse("9 1:1\n9 2:1\n", o);
    CHECK(d.n_features() == 4);
    CHECK(d.label(0) == -1);
    o.n_features = 1;
    CHECK_THROWS_AS(parse("9 2:1\n", o), dimension_error);
    o.n_features = 4;
    CHECK_THROWS_AS(parse("4 1:1\n", o), parse_error);
}

TEST_CASE("libsvm and csv round trip") {
    std::mt19937_64 rng(3);
    const Dataset d = testing::random_dataset(25, 4, rng);
    std::stringstream libsvm, csv;
    write_libsvm(libsvm, d);
    write_csv(csv, d);
    ParseOptions o;
    o.labels = d.label_map();
    const Dataset a = parse_libsvm(libsvm, o);
    const Dataset b = parse_csv(csv, o);
    for (const Dataset* back : {&a, &b}) {
        REQUIRE(back->size() == d.size());
        REQUIRE(back->n_features() == d.n_features());
        for (std::size_t i = 0; i < d.size(); ++i) {
            CHECK(back->label(i) == d.label(i));
            for (std::size_t c = 0; c < d.n_features(); ++c) CHECK(std::abs(back->row(i)[c] - d.row(i)[c]) <= 1e-12);
        }
    }
}

TEST_CASE("csv header is required") {
    std::istringstream in("y,f1\n1,2\n");
    CHECK_THROWS_AS(parse_csv(in), parse_error);
}

TEST_CASE("load_dataset reports unreadable paths") {
    CHECK_THROWS_WITH_AS(load_dataset("/nonexistent/file.libsvm"), doctest::Contains("cannot read"), io_error);
}

TEST_CASE("normalize uses the population standard deviation") {
    const Dataset n = normalize(column_dataset({1, 2, 3}, {1, 1, -1}));
    const double z = 1.0 / std::sqrt(2.0 / 3.0);
    CHECK(n.row(0)[0] == doctest::Approx(-z).epsilon(1e-12));
    CHECK(n.row(1)[0] == doctest::Approx(0.0));
    CHECK(n.row(2)[0] == doctest::Approx(z).epsilon(1e-12));
    CHECK(z == doctest::Approx(1.2247).epsilon(1e-4));
}

TEST_CASE("constant column maps to zeros") {
    const Dataset n = normalize(column_dataset({5, 5, 5}, {1, 1, -1}));
    for (std::size_t i = 0; i < 3; ++i) CHECK(n.row(i)[0] == 0.0);
    CHECK(n.norm_stats()->constant[0]);
}

TEST_CASE("normalized columns have zero mean and unit deviation; renormalizing is stable") {
    std::mt19937_64 rng(11);
    const Dataset d = testing::random_dataset(200, 5, rng);
    const Dataset n = normalize(d);
    for (std::size_t c = 0; c < 5; ++c) {
        double mean = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < n.size(); ++i) mean += n.row(i)[c];
        mean /= n.size();
        for (std::size_t i = 0; i < n.size(); ++i) sq += (n.row(i)[c] - mean) * (n.row(i)[c] - mean);
        CHECK(std::abs(mean) < 1e-9);
        CHECK(std::abs(std::sqrt(sq / n.size()) - 1.0) < 1e-9);
    }
    const Dataset twice = normalize(n);
    for (std::size_t k = 0; k < n.features().size(); ++k) CHECK(std::abs(twice.features()[k] - n.features()[k]) < 1e-9);
}

TEST_CASE("held-out data uses training statistics") {
    const Dataset train = normalize(column_dataset({1, 2, 3}, {1, 1, -1}));
    const Dataset held = apply_normalization(column_dataset({2, 4}, {1, -1}), *train.norm_stats());
    CHECK(held.row(0)[0] == doctest::Approx(0.0));
    CHECK(held.row(1)[0] == doctest::Approx(2.0 / std::sqrt(2.0 / 3.0)));
}

TEST_CASE("stratified split keeps class proportions") {
    std::vector<double> x(100);
    std::vector<int> y(100, 1);
    for (std::size_t i = 80; i < 100; ++i) y[i] = -1;
    const Dataset d(1, x, y);
    const auto [a, b] = stratified_split(d, 0.8, 5);
    CHECK(a.size() == 80);
    CHECK(b.size() == 20);
    CHECK(a.class_sizes().plus == 64);
    CHECK(a.class_sizes().minus == 16);
    CHECK(b.class_sizes().plus == 16);
    CHECK(b.class_sizes().minus == 4);
}

TEST_CASE("stratified split is deterministic and exhaustive") {
    std::vector<double> x(57);
    std::vector<int> y(57);
    for (std::size_t i = 0; i < 57; ++i) {
        x[i] = static_cast<double>(i);
        y[i] = i % 3 == 0 ? -1 : 1;
    }
    const Dataset d(1, x, y);
    const auto [a1, b1] = stratified_split(d, 0.7, 99);
    const auto [a2, b2] = stratified_split(d, 0.7, 99);
    CHECK(std::vector<double>(a1.features().begin(), a1.features().end()) ==
          std::vector<double>(a2.features().begin(), a2.features().end()));
    std::vector<double> seen(a1.features().begin(), a1.features().end());
    seen.insert(seen.end(), b1.features().begin(), b1.features().end());
    std::sort(seen.begin(), seen.end());
    CHECK(seen == x);
}

TEST_CASE("two samples split one per part") {
    const Dataset d(1, {0.0, 1.0}, {1, -1});
    const auto [a, b] = stratified_split(d, 0.5, 1);
    CHECK(a.size() == 1);
    CHECK(b.size() == 1);
    CHECK(a.label(0) != b.label(0));
    CHECK_THROWS_AS(stratified_split(d, 0.1, 1), invalid_argument);
    CHECK_THROWS_AS(stratified_split(d, 1.0, 1), invalid_argument);
}

TEST_CASE("stratified folds partition the ids") {
    std::mt19937_64 rng(2);
    const Dataset d = testing::random_dataset(53, 2, rng);
    const auto ids = testing::all_ids(d);
    const auto folds = stratified_folds(d, ids, 5, 4);
    std::vector<std::size_t> seen;
    for (const auto& f : folds) seen.insert(seen.end(), f.begin(), f.end());
    std::sort(seen.begin(), seen.end());
    CHECK(seen == ids);
    for (const auto& f : folds) {
        const ClassSizes s = class_sizes(d, f);
        CHECK(s.plus >= d.class_sizes().plus / 5);
        CHECK(s.minus >= d.class_sizes().minus / 5);
    }
}

TEST_CASE("class weights") {
    const ClassWeights nursery = derive_weights(ClassSizes{8640, 4320}, 1.0);
    CHECK(nursery.c_plus == doctest::Approx(1.0 / 17280));
    CHECK(nursery.c_minus == doctest::Approx(1.0 / 8640));
    const ClassWeights small = derive_weights(ClassSizes{4, 1}, 2.0);
    CHECK(small.c_plus == 0.25);
    CHECK(small.c_minus == 1.0);
    const ClassWeights balanced = derive_weights(ClassSizes{50, 50}, 3.0);
    CHECK(balanced.c_plus == balanced.c_minus);
    CHECK(nursery.c_plus * 8640 == doctest::Approx(0.5));
    CHECK(nursery.c_minus * 4320 == doctest::Approx(0.5));
    CHECK_THROWS_AS(derive_weights(ClassSizes{3, 0}, 1.0), invalid_argument);
    CHECK_THROWS_AS(derive_weights(ClassSizes{3, 1}, 0.0), invalid_argument);
}

TEST_CASE("penalty weights") {
    CHECK(penalty_weights(2.0, false, ClassSizes{9, 1}) == ClassWeights{2.0, 2.0, 2.0});
    const ClassWeights w = penalty_weights(2.0, true, ClassSizes{9, 1});
    CHECK(w.c_plus == doctest::Approx(2.0 * 10 / 18));
    CHECK(w.c_minus == doctest::Approx(2.0 * 10 / 2));
    const ClassWeights b = penalty_weights(0.3, true, ClassSizes{40, 40});
    CHECK(b.c_plus == 0.3);
    CHECK(b.c_minus == 0.3);
}

TEST_CASE("dataset rejects bad labels and shapes") {
    CHECK_THROWS_AS(Dataset(1, {1.0, 2.0}, {1, 0}), invalid_argument);
    CHECK_THROWS_AS(Dataset(2, {1.0, 2.0, 3.0}, {1, -1}), invalid_argument);
}

}
