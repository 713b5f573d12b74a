#include "mlsvm/config.hpp"

#include "mlsvm/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <istream>

namespace mlsvm {

std::string_view to_string(WeightScope scope) { return scope == WeightScope::global ? "global" : "subset"; }

void MultilevelConfig::validate() const {
    if (!(q > 0.0 && q < 1.0)) throw invalid_argument(fmt::format("q must be in (0, 1), got {}", q));
    if (coarsest_size < 4) throw invalid_argument("coarsest_size must be at least 4");
    if (knn_k < 1 || cluster_target < 1 || p_pairs < 1 || cv_folds < 1 || threads < 1)
        throw invalid_argument("knn_k, cluster_target, p_pairs, cv_folds and threads must be >= 1");
    if (!(smo_tolerance > 0.0)) throw invalid_argument("smo_tolerance must be positive");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw invalid_argument(fmt::format("test_fraction must be in (0, 1), got {}", test_fraction));
    ud_box.validate();
}

std::size_t MultilevelConfig::resolved_q_dt(std::size_t dataset_size) const {
    if (q_dt != 0) return q_dt;
    return dataset_size < 10000 ? 500 : 1000;
}

SolverOptions MultilevelConfig::solver_options() const {
    SolverOptions o;
    o.tolerance = smo_tolerance;
    o.max_iter = smo_max_iter;
    o.cache_bytes = cache_mb << 20;
    o.rule = working_set;
    return o;
}

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw invalid_argument(fmt::format("bad value '{}' for '{}'", value, key));
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "1" || value == "true" || value == "yes") return true;
    if (value == "0" || value == "false" || value == "no") return false;
    throw invalid_argument(fmt::format("bad boolean '{}' for '{}'", value, key));
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

}  // namespace

void apply_setting(MultilevelConfig& c, std::string_view key, std::string_view value) {
    using sz = std::size_t;
    if (key == "q") c.q = parse_number<double>(key, value);
    else if (key == "coarsest_size") c.coarsest_size = parse_number<sz>(key, value);
    else if (key == "q_dt") c.q_dt = parse_number<sz>(key, value);
    else if (key == "knn_k") c.knn_k = parse_number<sz>(key, value);
    else if (key == "neighbor_count") c.neighbor_count = parse_number<sz>(key, value);
    else if (key == "cluster_target") c.cluster_target = parse_number<sz>(key, value);
    else if (key == "p_pairs") c.p_pairs = parse_number<sz>(key, value);
    else if (key == "ud_log2c_lo") c.ud_box.log2_c_lo = parse_number<double>(key, value);
    else if (key == "ud_log2c_hi") c.ud_box.log2_c_hi = parse_number<double>(key, value);
    else if (key == "ud_log2gamma_lo") c.ud_box.log2_gamma_lo = parse_number<double>(key, value);
    else if (key == "ud_log2gamma_hi") c.ud_box.log2_gamma_hi = parse_number<double>(key, value);
    else if (key == "weighted") c.weighted = parse_bool(key, value);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "knn_mode") c.knn_mode = knn_mode_from_string(value);
    else if (key == "smo_tolerance") c.smo_tolerance = parse_number<double>(key, value);
    else if (key == "smo_max_iter") c.smo_max_iter = parse_number<sz>(key, value);
    else if (key == "working_set") c.working_set = working_set_rule_from_string(value);
    else if (key == "cv_folds") c.cv_folds = parse_number<sz>(key, value);
    else if (key == "cache_mb") c.cache_mb = parse_number<sz>(key, value);
    else if (key == "threads") c.threads = parse_number<sz>(key, value);
    else if (key == "test_fraction") c.test_fraction = parse_number<double>(key, value);
    else if (key == "weight_scope") {
        if (value == "global") c.weight_scope = WeightScope::global;
        else if (value == "subset") c.weight_scope = WeightScope::subset;
        else throw invalid_argument(fmt::format("unknown weight_scope '{}'", value));
    } else
        throw invalid_argument(fmt::format("unknown config key '{}'", key));
}

void apply_config_text(MultilevelConfig& config, std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = line;
        if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw parse_error("expected key=value", line_no);
        try {
            apply_setting(config, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
        } catch (const invalid_argument& e) {
            throw parse_error(e.what(), line_no);
        }
    }
}

MultilevelConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read '" + path + "'");
    MultilevelConfig config;
    apply_config_text(config, in);
    return config;
}

std::string to_config_text(const MultilevelConfig& c) {
    std::string out;
    auto add = [&](std::string_view key, const auto& value) { out += fmt::format("{}={}\n", key, value); };
    add("q", c.q);
    add("coarsest_size", c.coarsest_size);
    add("q_dt", c.q_dt);
    add("knn_k", c.knn_k);
    add("neighbor_count", c.neighbor_count);
    add("cluster_target", c.cluster_target);
    add("p_pairs", c.p_pairs);
    add("ud_log2c_lo", c.ud_box.log2_c_lo);
    add("ud_log2c_hi", c.ud_box.log2_c_hi);
    add("ud_log2gamma_lo", c.ud_box.log2_gamma_lo);
    add("ud_log2gamma_hi", c.ud_box.log2_gamma_hi);
    add("weighted", c.weighted ? 1 : 0);
    add("seed", c.seed);
    add("knn_mode", to_string(c.knn_mode));
    add("smo_tolerance", c.smo_tolerance);
    add("smo_max_iter", c.smo_max_iter);
    add("working_set", to_string(c.working_set));
    add("cv_folds", c.cv_folds);
    add("cache_mb", c.cache_mb);
    add("threads", c.threads);
    add("test_fraction", c.test_fraction);
    add("weight_scope", to_string(c.weight_scope));
    return out;
}

}  // namespace mlsvm
