#pragma once

// Shared helpers for the test binaries: small dataset builders, a dense QP
// oracle for the SVM dual and a brute-force kNN.

#include "mlsvm/data.hpp"
#include "mlsvm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace testing {

inline mlsvm::Dataset make_dataset(std::size_t dim, std::vector<double> features, std::vector<int> labels) {
    return mlsvm::Dataset(dim, std::move(features), std::move(labels));
}

inline std::vector<std::size_t> all_ids(const mlsvm::Dataset& d) {
    std::vector<std::size_t> ids(d.size());
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    return ids;
}

/// Uniform points in [-1, 1]^dim with random labels, both classes guaranteed.
inline mlsvm::Dataset random_dataset(std::size_t n, std::size_t dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(n * dim);
    for (double& v : x) v = u(rng);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = (rng() & 1) ? 1 : -1;
    y[0] = 1;
    y[1] = -1;
    return mlsvm::Dataset(dim, std::move(x), std::move(y));
}

struct QpSolution {
    std::vector<double> alpha;
    double objective = 0.0;
};

/// min 1/2 a'Qa - e'a  s.t.  y'a = 0, 0 <= a_i <= ub_i, by accelerated projected
/// gradient with adaptive restart. Stops when the projected-gradient residual at
/// the current iterate (zero exactly at a KKT point) falls below `tol`.
inline QpSolution qp_oracle(const std::vector<double>& q, const std::vector<int>& y, const std::vector<double>& ub,
                            int max_iter = 200000, double tol = 1e-8) {
    const std::size_t n = y.size();
    // Euclidean projection onto the box intersected with y'a = 0: a_i(l) =
    // clamp(v_i - l y_i) and sum_i y_i a_i(l) is piecewise linear and
    // non-increasing in l, so walk its breakpoints and interpolate.
    auto project = [&](const std::vector<double>& v) {
        auto at = [&](double lambda, std::size_t i) { return std::clamp(v[i] - lambda * y[i], 0.0, ub[i]); };
        auto sum_at = [&](double lambda) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += y[i] * at(lambda, i);
            return s;
        };
        std::vector<double> knots;
        for (std::size_t i = 0; i < n; ++i) {
            knots.push_back(v[i] * y[i]);
            knots.push_back((v[i] - ub[i]) * y[i]);
        }
        std::sort(knots.begin(), knots.end());
        double lambda = knots.front();
        if (sum_at(knots.front()) > 0.0 && sum_at(knots.back()) < 0.0) {
            std::size_t hi = 1;
            while (sum_at(knots[hi]) > 0.0) ++hi;
            const double l0 = knots[hi - 1], l1 = knots[hi];
            const double s0 = sum_at(l0), s1 = sum_at(l1);
            lambda = s0 == s1 ? l0 : l0 + (l1 - l0) * s0 / (s0 - s1);
        } else if (sum_at(knots.back()) >= 0.0) {
            lambda = knots.back();
        }
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = at(lambda, i);
        return out;
    };
    auto gradient = [&](const std::vector<double>& a) {
        std::vector<double> g(n, -1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g[i] += q[i * n + j] * a[j];
        return g;
    };
    auto objective = [&](const std::vector<double>& a) {
        double f = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            f -= a[i];
            for (std::size_t j = 0; j < n; ++j) f += 0.5 * a[i] * q[i * n + j] * a[j];
        }
        return f;
    };
    auto step_from = [&](const std::vector<double>& x, double inv_lip) {
        const auto g = gradient(x);
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = x[i] - g[i] * inv_lip;
        return project(v);
    };
    // Lipschitz constant: the largest eigenvalue of Q by power iteration, padded
    // slightly so the step stays safe.
    double lip = 1e-12;
    {
        std::vector<double> v(n, 1.0), w(n);
        for (int it = 0; it < 500; ++it) {
            double norm = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                w[i] = 0.0;
                for (std::size_t j = 0; j < n; ++j) w[i] += q[i * n + j] * v[j];
                norm += w[i] * w[i];
            }
            norm = std::sqrt(norm);
            if (norm == 0.0) break;
            const double est = norm / std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
            for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
            if (std::abs(est - lip) <= 1e-12 * est) break;
            lip = est;
        }
        lip = std::max(lip * 1.01, 1e-12);
    }
    double scale = 1.0;
    for (double u : ub) scale = std::max(scale, u);

    std::vector<double> a(n, 0.0), z = a;
    double t = 1.0;
    double f = objective(a);
    for (int it = 0; it < max_iter; ++it) {
        if (it % 16 == 0) {
            const auto plain = step_from(a, 1.0 / lip);
            double residual = 0.0;
            for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(plain[i] - a[i]));
            if (residual <= tol * scale) break;
        }
        auto next = step_from(z, 1.0 / lip);
        const double f_next = objective(next);
        if (f_next > f) {  // restart momentum from the last iterate
            t = 1.0;
            z = a;
            continue;
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        for (std::size_t i = 0; i < n; ++i) z[i] = next[i] + (t - 1.0) / t_next * (next[i] - a[i]);
        t = t_next;
        a = std::move(next);
        f = f_next;
    }
    return {a, objective(a)};
}

/// Q_ij = y_i y_j k(x_i, x_j) over all rows of `data`.
inline std::vector<double> dual_hessian(const mlsvm::Dataset& data, const mlsvm::KernelSpec& spec) {
    const std::size_t n = data.size();
    std::vector<double> q(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            q[i * n + j] = data.label(i) * data.label(j) * mlsvm::kernel_eval(spec, data.row(i), data.row(j));
    return q;
}

/// Sorted squared-distance ranks: exact k nearest positions of `pos` within `pts`.
inline std::vector<std::size_t> brute_knn(const std::vector<std::vector<double>>& pts, std::size_t pos,
                                          std::size_t k) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j == pos) continue;
        double s = 0.0;
        for (std::size_t c = 0; c < pts[pos].size(); ++c) s += (pts[pos][c] - pts[j][c]) * (pts[pos][c] - pts[j][c]);
        d.emplace_back(s, j);
    }
    std::sort(d.begin(), d.end());
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < std::min(k, d.size()); ++t) out.push_back(d[t].second);
    return out;
}

/// Fresh directory under the system temp path, removed on destruction.
class TempDir {
  public:
    TempDir() {
        static std::uint64_t counter = 0;
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("mlsvm-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
};

}  // namespace testing
