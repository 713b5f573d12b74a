#include "mlsvm/error.hpp"
#include "mlsvm/kernel.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace mlsvm;

namespace {

// Cholesky with a small jitter; fails on a matrix with a clearly negative eigenvalue.
bool cholesky_ok(std::vector<double> a, std::size_t n, double jitter) {
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] += jitter;
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (d <= 0.0) return false;
        const double l = std::sqrt(d);
        a[j * n + j] = l;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / l;
        }
    }
    return true;
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("rbf values") {
    const std::vector<double> x{0, 0}, z{1, 1}, w{0.3, -2.0};
    CHECK(kernel_eval({KernelKind::rbf, 0.7}, w, w) == 1.0);
    CHECK(kernel_eval({KernelKind::rbf, 0.0}, x, z) == 1.0);
    CHECK(kernel_eval({KernelKind::rbf, 0.5}, x, z) == doctest::Approx(std::exp(-1.0)));
    CHECK(std::exp(-1.0) == doctest::Approx(0.367879).epsilon(1e-6));
}

TEST_CASE("linear is the dot product") {
    const std::vector<double> x{1, 2, 3}, z{-1, 0.5, 2};
    CHECK(kernel_eval({KernelKind::linear, 0.0}, x, z) == 6.0);
}

TEST_CASE("length mismatch throws") {
    const std::vector<double> x{1, 2}, z{1};
    CHECK_THROWS_AS(kernel_eval({}, x, z), dimension_error);
}

TEST_CASE("gamma is validated") {
    CHECK_THROWS_AS((KernelSpec{KernelKind::rbf, -1.0}.validate()), invalid_argument);
    CHECK_THROWS_AS((KernelSpec{KernelKind::rbf, NAN}.validate()), invalid_argument);
    CHECK_NOTHROW((KernelSpec{KernelKind::rbf, 0.0}.validate()));
    CHECK(kernel_kind_from_string(to_string(KernelKind::linear)) == KernelKind::linear);
    CHECK_THROWS_AS(kernel_kind_from_string("poly"), invalid_argument);
}

TEST_CASE("kernel is symmetric and rbf values lie in (0, 1]") {
    std::mt19937_64 rng(5);
    const Dataset d = testing::random_dataset(30, 6, rng);
    for (auto kind : {KernelKind::rbf, KernelKind::linear})
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = 0; j < d.size(); ++j) {
                const double a = kernel_eval({kind, 0.8}, d.row(i), d.row(j));
                CHECK(a == kernel_eval({kind, 0.8}, d.row(j), d.row(i)));
                if (kind == KernelKind::rbf) {
                    CHECK(a > 0.0);
                    CHECK(a <= 1.0);
                }
            }
}

TEST_CASE("rbf gram matrix is positive semi-definite") {
    std::mt19937_64 rng(9);
    for (double gamma : {0.01, 0.5, 3.0}) {
        const Dataset d = testing::random_dataset(20, 3, rng);
        std::vector<double> g(400);
        for (std::size_t i = 0; i < 20; ++i)
            for (std::size_t j = 0; j < 20; ++j) g[i * 20 + j] = kernel_eval({KernelKind::rbf, gamma}, d.row(i), d.row(j));
        CHECK(cholesky_ok(g, 20, 1e-8));
    }
}

TEST_CASE("kernel_row matches kernel_eval and uses the cache") {
    std::mt19937_64 rng(1);
    const Dataset d = testing::random_dataset(3, 2, rng);
    const std::vector<std::size_t> subset{0, 1, 2};
    const KernelSpec spec{KernelKind::rbf, 0.9};
    KernelCache cache;
    const auto row = kernel_row(spec, d, 1, subset, cache);
    REQUIRE(row.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) CHECK(row[j] == kernel_eval(spec, d.row(1), d.row(j)));
    CHECK(cache.misses() == 1);
    CHECK(kernel_row(spec, d, 1, subset, cache) == row);
    CHECK(cache.hits() == 1);

    const std::vector<std::size_t> self{2};
    KernelCache other;
    CHECK(kernel_row(spec, d, 2, self, other) == std::vector<double>{1.0});
}

TEST_CASE("cache size does not change results") {
    std::mt19937_64 rng(21);
    const Dataset d = testing::random_dataset(40, 4, rng);
    const auto ids = testing::all_ids(d);
    const KernelSpec spec{KernelKind::rbf, 0.4};
    KernelCache none(0), small(3 * 40 * sizeof(double)), big;
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t i = 0; i < d.size(); ++i) {
            const auto a = kernel_row(spec, d, i, ids, none);
            CHECK(a == kernel_row(spec, d, i, ids, small));
            CHECK(a == kernel_row(spec, d, i, ids, big));
        }
    CHECK(none.bytes_used() == 0);
    CHECK(small.bytes_used() <= small.budget());
    CHECK(big.hits() == 40);
}

TEST_CASE("lru evicts the least recently used row") {
    KernelCache cache(2 * 4 * sizeof(double));
    auto row = [](double v) { return std::make_shared<const std::vector<double>>(4, v); };
    cache.insert(1, row(1));
    cache.insert(2, row(2));
    CHECK(cache.find(1));
    cache.insert(3, row(3));
    CHECK_FALSE(cache.find(2));
    CHECK(cache.find(1));
    CHECK(cache.find(3));
}

TEST_CASE("KernelRows agrees with kernel_eval") {
    std::mt19937_64 rng(4);
    const Dataset d = testing::random_dataset(12, 3, rng);
    const std::vector<std::size_t> subset{11, 3, 5, 0};
    for (auto kind : {KernelKind::rbf, KernelKind::linear}) {
        const KernelSpec spec{kind, 1.7};
        KernelRows rows(spec, d, subset, 1 << 20);
        for (std::size_t p = 0; p < subset.size(); ++p) {
            const auto r = rows.row(p);
            CHECK(rows.diagonal(p) == doctest::Approx(kernel_eval(spec, d.row(subset[p]), d.row(subset[p]))));
            for (std::size_t q = 0; q < subset.size(); ++q)
                CHECK((*r)[q] == doctest::Approx(kernel_eval(spec, d.row(subset[p]), d.row(subset[q]))).epsilon(1e-12));
        }
    }
}

}
