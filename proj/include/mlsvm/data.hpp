#pragma once

// Labeled dense datasets: parsing (LIBSVM sparse text, CSV), z-score
// normalization, stratified splitting and per-class penalty weights.
//
// Labels are always +1 (majority class C+) or -1 (minority class C-). The raw
// label values found in a file are kept in a LabelMap so predictions can be
// written back in the file's own vocabulary.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mlsvm {

/// Raw file label that maps to +1 and to -1.
struct LabelMap {
    double plus = 1.0;
    double minus = -1.0;
    bool operator==(const LabelMap&) const = default;
};

struct NormStats {
    std::vector<double> mean;
    std::vector<double> stddev;    // population (1/N) standard deviation
    std::vector<bool> constant;    // zero-variance column, normalized to 0
    bool operator==(const NormStats&) const = default;
};

struct Sample {
    std::span<const double> features;
    int label;
};

struct ClassSizes {
    std::size_t plus = 0;
    std::size_t minus = 0;
    std::size_t total() const { return plus + minus; }
};

class Dataset {
  public:
    Dataset() = default;
    /// `features` is row-major, size() == labels.size() * n_features. Labels must be +1/-1.
    Dataset(std::size_t n_features, std::vector<double> features, std::vector<int> labels,
            LabelMap label_map = {}, std::optional<NormStats> norm = std::nullopt);

    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }
    std::size_t n_features() const { return n_features_; }

    std::span<const double> row(std::size_t i) const {
        return {features_.data() + i * n_features_, n_features_};
    }
    int label(std::size_t i) const { return labels_[i]; }
    Sample sample(std::size_t i) const { return {row(i), labels_[i]}; }

    std::span<const double> features() const { return features_; }
    std::span<const int> labels() const { return labels_; }
    const std::vector<std::size_t>& plus_idx() const { return plus_idx_; }
    const std::vector<std::size_t>& minus_idx() const { return minus_idx_; }
    ClassSizes class_sizes() const { return {plus_idx_.size(), minus_idx_.size()}; }
    const LabelMap& label_map() const { return label_map_; }
    const std::optional<NormStats>& norm_stats() const { return norm_; }

    /// Rows `idx` in the given order; keeps the label map and norm stats.
    Dataset subset(std::span<const std::size_t> idx) const;

    /// Copy of rows `idx` packed row-major.
    std::vector<double> gather(std::span<const std::size_t> idx) const;

  private:
    std::size_t n_features_ = 0;
    std::vector<double> features_;
    std::vector<int> labels_;
    std::vector<std::size_t> plus_idx_;
    std::vector<std::size_t> minus_idx_;
    LabelMap label_map_;
    std::optional<NormStats> norm_;
};

struct ParseOptions {
    /// Fixed raw-label mapping (e.g. from a trained model). Without it the larger
    /// raw class becomes +1, ties going to the smaller raw value.
    std::optional<LabelMap> labels;
    /// Expected feature count. Narrower files are zero-padded; wider ones throw dimension_error.
    std::optional<std::size_t> n_features;
};

Dataset parse_libsvm(std::istream& in, const ParseOptions& options = {});
Dataset parse_csv(std::istream& in, const ParseOptions& options = {});
void write_libsvm(std::ostream& out, const Dataset& data);
void write_csv(std::ostream& out, const Dataset& data);

/// Loads by extension: ".csv" is CSV, anything else LIBSVM. Throws io_error when unreadable.
Dataset load_dataset(const std::string& path, const ParseOptions& options = {});
void save_dataset(const std::string& path, const Dataset& data);

Dataset normalize(const Dataset& data);
/// z-scores `data` with statistics computed elsewhere (training data).
Dataset apply_normalization(const Dataset& data, const NormStats& stats);
void apply_normalization(std::span<double> row, const NormStats& stats);

std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double fraction,
                                             std::uint64_t seed);

/// Stratified k-fold assignment over `ids`: result[f] holds the ids of fold f.
std::vector<std::vector<std::size_t>> stratified_folds(const Dataset& data,
                                                       std::span<const std::size_t> ids,
                                                       std::size_t folds, std::uint64_t seed);

ClassSizes class_sizes(const Dataset& data, std::span<const std::size_t> ids);

struct ClassWeights {
    double c_plus = 1.0;
    double c_minus = 1.0;
    double base_c = 1.0;
    bool operator==(const ClassWeights&) const = default;
};

/// Inverse-class-size penalties: c_plus = base_c / (2|C+|), c_minus = base_c / (2|C-|).
ClassWeights derive_weights(const Dataset& data, double base_c);
ClassWeights derive_weights(ClassSizes sizes, double base_c);

/// Penalties used for training with penalty scale `c`. Unweighted: both equal c.
/// Weighted: c * |J| / (2|C+|) and c * |J| / (2|C-|) for class sizes `basis`,
/// i.e. derive_weights with base_c = c|J|, so a balanced basis gives exactly c.
ClassWeights penalty_weights(double c, bool weighted, ClassSizes basis);

}  // namespace mlsvm
