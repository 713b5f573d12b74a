#include "mlsvm/kernel.hpp"

#include "mlsvm/error.hpp"
#include "mlsvm/simd.hpp"

#include <fmt/format.h>

#include <cmath>

namespace mlsvm {

std::string_view to_string(KernelKind kind) { return kind == KernelKind::rbf ? "rbf" : "linear"; }

KernelKind kernel_kind_from_string(std::string_view name) {
    if (name == "rbf") return KernelKind::rbf;
    if (name == "linear") return KernelKind::linear;
    throw invalid_argument(fmt::format("unknown kernel '{}'", name));
}

void KernelSpec::validate() const {
    if (kind == KernelKind::rbf && !(gamma >= 0.0 && std::isfinite(gamma)))
        throw invalid_argument(fmt::format("RBF gamma must be finite and >= 0, got {}", gamma));
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> z) {
    if (x.size() != z.size())
        throw dimension_error(fmt::format("kernel arguments have lengths {} and {}", x.size(), z.size()));
    if (spec.kind == KernelKind::linear) return simd::dot(x, z);
    return std::exp(-spec.gamma * simd::squared_distance(x, z));
}

void kernel_finish(const KernelSpec& spec, std::span<double> values) {
    if (spec.kind == KernelKind::linear) return;
    for (double& v : values) v = std::exp(-spec.gamma * v);
}

KernelRow KernelCache::find(std::size_t key) {
    const auto it = index_.find(key);
    if (it == index_.end()) {
        ++misses_;
        return nullptr;
    }
    ++hits_;
    lru_.splice(lru_.begin(), lru_, it->second);
    return it->second->second;
}

void KernelCache::insert(std::size_t key, KernelRow row) {
    const std::size_t bytes = row->size() * sizeof(double);
    if (bytes > budget_ || index_.count(key)) return;
    while (used_ + bytes > budget_ && !lru_.empty()) {
        used_ -= lru_.back().second->size() * sizeof(double);
        index_.erase(lru_.back().first);
        lru_.pop_back();
    }
    lru_.emplace_front(key, std::move(row));
    index_.emplace(key, lru_.begin());
    used_ += bytes;
}

namespace {

void fill_row(const KernelSpec& spec, std::span<const double> x, const double* packed,
              std::size_t n_rows, std::size_t dim, double* out) {
    const auto& kt = simd::active();
    if (spec.kind == KernelKind::linear)
        kt.dots(x.data(), packed, n_rows, dim, out);
    else
        kt.squared_distances(x.data(), packed, n_rows, dim, out);
    kernel_finish(spec, {out, n_rows});
}

}  // namespace

std::vector<double> kernel_row(const KernelSpec& spec, const Dataset& data, std::size_t i,
                               std::span<const std::size_t> subset, KernelCache& cache) {
    if (auto hit = cache.find(i)) return *hit;
    const auto packed = data.gather(subset);
    auto row = std::make_shared<std::vector<double>>(subset.size());
    fill_row(spec, data.row(i), packed.data(), subset.size(), data.n_features(), row->data());
    std::vector<double> out = *row;
    cache.insert(i, std::move(row));
    return out;
}

KernelRows::KernelRows(const KernelSpec& spec, const Dataset& data,
                       std::span<const std::size_t> subset, std::size_t cache_bytes)
    : spec_(spec),
      n_(subset.size()),
      dim_(data.n_features()),
      packed_(data.gather(subset)),
      diag_(subset.size()),
      cache_(cache_bytes) {
    spec_.validate();
    for (std::size_t p = 0; p < n_; ++p) {
        const std::span<const double> x{packed_.data() + p * dim_, dim_};
        diag_[p] = kernel_eval(spec_, x, x);
    }
}

KernelRow KernelRows::row(std::size_t pos) {
    if (auto hit = cache_.find(pos)) return hit;
    auto row = std::make_shared<std::vector<double>>(n_);
    fill_row(spec_, {packed_.data() + pos * dim_, dim_}, packed_.data(), n_, dim_, row->data());
    cache_.insert(pos, row);
    return row;
}

}  // namespace mlsvm
