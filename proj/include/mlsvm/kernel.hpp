#pragma once

#include "mlsvm/data.hpp"

#include <cstddef>
#include <list>
#include <memory>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mlsvm {

enum class KernelKind { rbf, linear };

std::string_view to_string(KernelKind kind);
KernelKind kernel_kind_from_string(std::string_view name);

struct KernelSpec {
    KernelKind kind = KernelKind::rbf;
    double gamma = 1.0;  // RBF bandwidth, ignored for linear

    /// Throws invalid_argument on a negative or non-finite gamma.
    void validate() const;
    bool operator==(const KernelSpec&) const = default;
};

/// RBF: exp(-gamma * ||x - z||^2). Linear: <x, z>. Throws dimension_error on length mismatch.
double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> z);

/// Kernel values from squared distances (RBF) or dot products (linear), in place.
void kernel_finish(const KernelSpec& spec, std::span<double> values);

using KernelRow = std::shared_ptr<const std::vector<double>>;

/// Least-recently-used store of kernel rows keyed by sample index. A cache is
/// valid for one (kernel, dataset, subset) triple; the owner must not reuse it
/// across triples. A budget of 0 disables storage.
class KernelCache {
  public:
    explicit KernelCache(std::size_t budget_bytes = 64u << 20) : budget_(budget_bytes) {}

    KernelRow find(std::size_t key);
    void insert(std::size_t key, KernelRow row);

    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }
    std::size_t bytes_used() const { return used_; }
    std::size_t budget() const { return budget_; }

  private:
    using Lru = std::list<std::pair<std::size_t, KernelRow>>;
    std::size_t budget_;
    std::size_t used_ = 0;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
    Lru lru_;
    std::unordered_map<std::size_t, Lru::iterator> index_;
};

/// k(x_i, x_j) for j in `subset` (dataset indices), served from `cache` when present.
std::vector<double> kernel_row(const KernelSpec& spec, const Dataset& data, std::size_t i,
                               std::span<const std::size_t> subset, KernelCache& cache);

/// Row provider for a fixed training subset: rows are indexed by subset position
/// and computed from a packed copy of the subset's features.
class KernelRows {
  public:
    KernelRows(const KernelSpec& spec, const Dataset& data, std::span<const std::size_t> subset,
               std::size_t cache_bytes);

    std::size_t size() const { return n_; }
    KernelRow row(std::size_t pos);
    double diagonal(std::size_t pos) const { return diag_[pos]; }
    const KernelCache& cache() const { return cache_; }

  private:
    KernelSpec spec_;
    std::size_t n_;
    std::size_t dim_;
    std::vector<double> packed_;
    std::vector<double> diag_;
    KernelCache cache_;
};

}  // namespace mlsvm
