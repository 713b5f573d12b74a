#include "mlsvm/data.hpp"

#include "mlsvm/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <string_view>

namespace mlsvm {

Dataset::Dataset(std::size_t n_features, std::vector<double> features, std::vector<int> labels,
                 LabelMap label_map, std::optional<NormStats> norm)
    : n_features_(n_features),
      features_(std::move(features)),
      labels_(std::move(labels)),
      label_map_(label_map),
      norm_(std::move(norm)) {
    if (features_.size() != labels_.size() * n_features_)
        throw invalid_argument(fmt::format("feature buffer holds {} values, expected {} x {}",
                                           features_.size(), labels_.size(), n_features_));
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == 1)
            plus_idx_.push_back(i);
        else if (labels_[i] == -1)
            minus_idx_.push_back(i);
        else
            throw invalid_argument(fmt::format("sample {} has label {}, expected +1 or -1", i, labels_[i]));
    }
}

Dataset Dataset::subset(std::span<const std::size_t> idx) const {
    std::vector<int> labels;
    labels.reserve(idx.size());
    for (std::size_t i : idx) labels.push_back(labels_.at(i));
    return Dataset(n_features_, gather(idx), std::move(labels), label_map_, norm_);
}

std::vector<double> Dataset::gather(std::span<const std::size_t> idx) const {
    std::vector<double> out(idx.size() * n_features_);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const auto src = row(idx[r]);
        std::copy(src.begin(), src.end(), out.begin() + static_cast<std::ptrdiff_t>(r * n_features_));
    }
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view token, double& out) {
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    if (token.empty()) return false;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc{} && ptr == token.data() + token.size() && std::isfinite(out);
}

bool parse_index(std::string_view token, std::size_t& out) {
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc{} && ptr == token.data() + token.size();
}

struct RawRows {
    std::vector<double> labels;
    std::vector<std::vector<std::pair<std::size_t, double>>> entries;  // 0-based column
    std::vector<std::size_t> line_of;
    std::size_t max_columns = 0;
};

LabelMap infer_label_map(const RawRows& raw) {
    std::map<double, std::size_t> counts;
    for (double y : raw.labels) ++counts[y];
    if (counts.size() > 2)
        throw parse_error(fmt::format("found {} distinct labels, expected two", counts.size()));
    if (counts.size() < 2) throw parse_error("only one class label present, expected two");
    auto lo = counts.begin();
    auto hi = std::next(lo);
    // Larger class -> +1; on a tie the smaller raw value (lo) is +1.
    if (hi->second > lo->second) return {hi->first, lo->first};
    return {lo->first, hi->first};
}

Dataset assemble(const RawRows& raw, const ParseOptions& options) {
    if (raw.labels.empty()) throw parse_error("empty input");
    const LabelMap map = options.labels ? *options.labels : infer_label_map(raw);
    std::size_t n = raw.max_columns;
    if (options.n_features) {
        if (n > *options.n_features)
            throw dimension_error(fmt::format("input has {} features, expected at most {}", n,
                                              *options.n_features));
        n = *options.n_features;
    }
    std::vector<double> features(raw.labels.size() * n, 0.0);
    std::vector<int> labels(raw.labels.size());
    for (std::size_t r = 0; r < raw.labels.size(); ++r) {
        if (raw.labels[r] == map.plus)
            labels[r] = 1;
        else if (raw.labels[r] == map.minus)
            labels[r] = -1;
        else
            throw parse_error(fmt::format("label {} is not one of the two known classes ({}, {})",
                                          raw.labels[r], map.plus, map.minus),
                              raw.line_of[r]);
        for (const auto& [col, value] : raw.entries[r]) features[r * n + col] = value;
    }
    return Dataset(n, std::move(features), std::move(labels), map);
}

}  // namespace

Dataset parse_libsvm(std::istream& in, const ParseOptions& options) {
    RawRows raw;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = line;
        if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = trim(text);
        if (text.empty()) continue;

        std::vector<std::pair<std::size_t, double>> entries;
        double label = 0.0;
        bool first = true;
        std::size_t last_index = 0;
        while (!text.empty()) {
            const auto end = text.find_first_of(" \t");
            const std::string_view token = text.substr(0, end);
            text = end == std::string_view::npos ? std::string_view{} : trim(text.substr(end));
            if (first) {
                if (!parse_double(token, label)) throw parse_error(fmt::format("bad label '{}'", token), line_no);
                first = false;
                continue;
            }
            const auto colon = token.find(':');
            std::size_t index = 0;
            double value = 0.0;
            if (colon == std::string_view::npos || !parse_index(token.substr(0, colon), index) ||
                !parse_double(token.substr(colon + 1), value))
                throw parse_error(fmt::format("bad feature '{}'", token), line_no);
            if (index == 0) throw parse_error("feature indices are 1-based", line_no);
            if (index <= last_index)
                throw parse_error(fmt::format("feature index {} not strictly increasing", index), line_no);
            last_index = index;
            entries.emplace_back(index - 1, value);
        }
        raw.max_columns = std::max(raw.max_columns, last_index);
        raw.labels.push_back(label);
        raw.entries.push_back(std::move(entries));
        raw.line_of.push_back(line_no);
    }
    return assemble(raw, options);
}

Dataset parse_csv(std::istream& in, const ParseOptions& options) {
    RawRows raw;
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty()) continue;
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = text.find(',', start);
            fields.push_back(trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!header_seen) {
            if (fields.front() != "label") throw parse_error("CSV header must start with 'label'", line_no);
            columns = fields.size() - 1;
            header_seen = true;
            continue;
        }
        if (fields.size() != columns + 1)
            throw parse_error(fmt::format("expected {} fields, found {}", columns + 1, fields.size()), line_no);
        double label = 0.0;
        if (!parse_double(fields[0], label)) throw parse_error(fmt::format("bad label '{}'", fields[0]), line_no);
        std::vector<std::pair<std::size_t, double>> entries;
        for (std::size_t c = 0; c < columns; ++c) {
            double value = 0.0;
            if (!parse_double(fields[c + 1], value))
                throw parse_error(fmt::format("bad value '{}'", fields[c + 1]), line_no);
            if (value != 0.0) entries.emplace_back(c, value);
        }
        raw.labels.push_back(label);
        raw.entries.push_back(std::move(entries));
        raw.line_of.push_back(line_no);
    }
    raw.max_columns = columns;
    return assemble(raw, options);
}

namespace {
double raw_label(const Dataset& data, std::size_t i) {
    return data.label(i) == 1 ? data.label_map().plus : data.label_map().minus;
}
}  // namespace

void write_libsvm(std::ostream& out, const Dataset& data) {
    const std::size_t n = data.n_features();
    fmt::memory_buffer buf;
    for (std::size_t i = 0; i < data.size(); ++i) {
        buf.clear();
        fmt::format_to(std::back_inserter(buf), "{}", raw_label(data, i));
        const auto x = data.row(i);
        // The last column is always written so the feature count survives a round trip.
        for (std::size_t c = 0; c < n; ++c)
            if (x[c] != 0.0 || c + 1 == n) fmt::format_to(std::back_inserter(buf), " {}:{}", c + 1, x[c]);
        buf.push_back('\n');
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
}

void write_csv(std::ostream& out, const Dataset& data) {
    out << "label";
    for (std::size_t c = 0; c < data.n_features(); ++c) out << ",f" << (c + 1);
    out << '\n';
    fmt::memory_buffer buf;
    for (std::size_t i = 0; i < data.size(); ++i) {
        buf.clear();
        fmt::format_to(std::back_inserter(buf), "{}", raw_label(data, i));
        for (double v : data.row(i)) fmt::format_to(std::back_inserter(buf), ",{}", v);
        buf.push_back('\n');
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
}

namespace {
bool is_csv_path(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}
}  // namespace

Dataset load_dataset(const std::string& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read '" + path + "'");
    return is_csv_path(path) ? parse_csv(in, options) : parse_libsvm(in, options);
}

void save_dataset(const std::string& path, const Dataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write '" + path + "'");
    if (is_csv_path(path))
        write_csv(out, data);
    else
        write_libsvm(out, data);
    if (!out) throw io_error("failed writing '" + path + "'");
}

Dataset normalize(const Dataset& data) {
    if (data.empty()) throw invalid_argument("cannot normalize an empty dataset");
    const std::size_t n = data.n_features();
    const double count = static_cast<double>(data.size());
    NormStats stats;
    stats.mean.assign(n, 0.0);
    stats.stddev.assign(n, 0.0);
    stats.constant.assign(n, false);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto x = data.row(i);
        for (std::size_t c = 0; c < n; ++c) stats.mean[c] += x[c];
    }
    for (double& m : stats.mean) m /= count;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto x = data.row(i);
        for (std::size_t c = 0; c < n; ++c) {
            const double d = x[c] - stats.mean[c];
            stats.stddev[c] += d * d;
        }
    }
    for (std::size_t c = 0; c < n; ++c) {
        stats.stddev[c] = std::sqrt(stats.stddev[c] / count);
        // Anything below rounding noise of the mean is treated as a constant column.
        stats.constant[c] = stats.stddev[c] <= 1e-14 * std::abs(stats.mean[c]) || stats.stddev[c] == 0.0;
    }
    return apply_normalization(data, stats);
}

void apply_normalization(std::span<double> row, const NormStats& stats) {
    if (row.size() != stats.mean.size())
        throw dimension_error(fmt::format("row has {} features, normalization expects {}", row.size(),
                                          stats.mean.size()));
    for (std::size_t c = 0; c < row.size(); ++c)
        row[c] = stats.constant[c] ? 0.0 : (row[c] - stats.mean[c]) / stats.stddev[c];
}

Dataset apply_normalization(const Dataset& data, const NormStats& stats) {
    std::vector<double> features(data.features().begin(), data.features().end());
    const std::size_t n = data.n_features();
    for (std::size_t i = 0; i < data.size(); ++i) apply_normalization(std::span<double>(features.data() + i * n, n), stats);
    return Dataset(n, std::move(features), std::vector<int>(data.labels().begin(), data.labels().end()),
                   data.label_map(), stats);
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw invalid_argument(fmt::format("split fraction {} outside (0, 1)", fraction));
    std::mt19937_64 rng(seed);
    const std::vector<std::size_t>* classes[2] = {&data.plus_idx(), &data.minus_idx()};

    // Largest-remainder apportionment of round(fraction * N) across the two classes.
    const std::size_t target = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(data.size())));
    std::size_t take[2];
    double remainder[2];
    for (int c = 0; c < 2; ++c) {
        const double exact = fraction * static_cast<double>(classes[c]->size());
        take[c] = static_cast<std::size_t>(std::floor(exact));
        remainder[c] = exact - std::floor(exact);
    }
    std::size_t assigned = take[0] + take[1];
    while (assigned < target) {
        const int c = remainder[0] >= remainder[1] ? 0 : 1;
        if (take[c] < classes[c]->size()) {
            ++take[c];
            ++assigned;
        }
        remainder[c] = -1.0;
        if (remainder[0] < 0.0 && remainder[1] < 0.0) break;
    }

    std::vector<std::size_t> first, second;
    for (int c = 0; c < 2; ++c) {
        std::vector<std::size_t> ids = *classes[c];
        std::shuffle(ids.begin(), ids.end(), rng);
        first.insert(first.end(), ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(take[c]));
        second.insert(second.end(), ids.begin() + static_cast<std::ptrdiff_t>(take[c]), ids.end());
    }
    if (first.empty() || second.empty())
        throw invalid_argument("stratified split would leave one part without samples");
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());
    return {data.subset(first), data.subset(second)};
}

std::vector<std::vector<std::size_t>> stratified_folds(const Dataset& data,
                                                       std::span<const std::size_t> ids,
                                                       std::size_t folds, std::uint64_t seed) {
    if (folds == 0) throw invalid_argument("fold count must be positive");
    std::vector<std::size_t> plus, minus;
    for (std::size_t id : ids) (data.label(id) == 1 ? plus : minus).push_back(id);
    std::mt19937_64 rng(seed);
    std::shuffle(plus.begin(), plus.end(), rng);
    std::shuffle(minus.begin(), minus.end(), rng);
    std::vector<std::vector<std::size_t>> out(folds);
    std::size_t slot = 0;
    for (const auto* cls : {&plus, &minus})
        for (std::size_t id : *cls) out[slot++ % folds].push_back(id);
    for (auto& f : out) std::sort(f.begin(), f.end());
    return out;
}

ClassSizes class_sizes(const Dataset& data, std::span<const std::size_t> ids) {
    ClassSizes sizes;
    for (std::size_t id : ids) (data.label(id) == 1 ? sizes.plus : sizes.minus)++;
    return sizes;
}

ClassWeights derive_weights(ClassSizes sizes, double base_c) {
    if (sizes.plus == 0 || sizes.minus == 0)
        throw invalid_argument("class weights need both classes to be non-empty");
    if (!(base_c > 0.0)) throw invalid_argument("base penalty C must be positive");
    return {base_c / (2.0 * static_cast<double>(sizes.plus)),
            base_c / (2.0 * static_cast<double>(sizes.minus)), base_c};
}

ClassWeights derive_weights(const Dataset& data, double base_c) {
    return derive_weights(data.class_sizes(), base_c);
}

ClassWeights penalty_weights(double c, bool weighted, ClassSizes basis) {
    if (!(c > 0.0)) throw invalid_argument("penalty C must be positive");
    if (!weighted) return {c, c, c};
    if (basis.plus == 0 || basis.minus == 0)
        throw invalid_argument("class weights need both classes to be non-empty");
    const double total = static_cast<double>(basis.total());
    return {c * (total / (2.0 * static_cast<double>(basis.plus))),
            c * (total / (2.0 * static_cast<double>(basis.minus))), c * total};
}

}  // namespace mlsvm
