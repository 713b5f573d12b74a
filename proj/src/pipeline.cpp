#include "mlsvm/pipeline.hpp"

#include "mlsvm/error.hpp"
#include "mlsvm/model_selection.hpp"
#include "mlsvm/seed.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <chrono>
#include <numeric>
#include <ostream>

namespace mlsvm {

namespace {

using Clock = std::chrono::steady_clock;

void evaluate_into(RunReport& report, const TrainedModel& model, const Dataset& eval) {
    report.confusion = confusion(model, eval);
    report.measures = measures(report.confusion);
    report.sv_count = model.sv_count();
    report.c = model.hyper.c;
    report.gamma = model.hyper.kernel.gamma;
    report.converged = model.converged;
}

}  // namespace

Split prepare_split(const Dataset& data, double test_fraction, std::uint64_t seed) {
    auto [test, train] = stratified_split(data, test_fraction, derive_seed(seed, "split"));
    Dataset train_norm = normalize(train);
    Dataset test_norm = apply_normalization(test, *train_norm.norm_stats());
    return {std::move(train_norm), std::move(test_norm)};
}

std::string RunMode::name() const {
    return fmt::format("{}{}{}", weighted ? "w" : "", multilevel ? "ml" : "single", with_ud ? "+ud" : "");
}

RunMode run_mode_from_string(std::string_view name, bool weighted) {
    for (bool ml : {true, false})
        for (bool ud : {true, false}) {
            RunMode m{ml, false, ud};
            if (m.name() == name) return {ml, weighted, ud};
        }
    throw invalid_argument(fmt::format("unknown run mode '{}' (expected ml+ud, ml, single+ud or single)", name));
}

RunResult run_single_level(const Dataset& train_set, bool weighted, bool with_ud, const MultilevelConfig& config,
                           const Dataset* test) {
    config.validate();
    const auto start = Clock::now();
    const RefinementOptions options = make_refinement_options(train_set, weighted, with_ud, config);
    std::vector<std::size_t> ids(train_set.size());
    std::iota(ids.begin(), ids.end(), std::size_t{0});

    // Same sub-seed as the coarsest-level search, so a depth-0 multilevel run matches.
    UdPoint point = config.ud_box.center();
    if (with_ud) {
        const UdResult ud = ud_search(train_set, ids, ud_options_for(options, derive_seed(config.seed, "ud")));
        point = UdPoint::from_values(ud.best_c, ud.best_gamma);
    }
    const double c = point.c();
    const double gamma = point.gamma();
    TrainedModel model = train(train_set, ids, refinement_hyper(train_set, ids, c, gamma, options),
                               config.solver_options());

    RunReport report;
    report.mode = {false, weighted, with_ud};
    report.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    LevelStats row;
    row.plus = train_set.class_sizes().plus;
    row.minus = train_set.class_sizes().minus;
    row.train_size = train_set.size();
    row.sv_count = model.sv_count();
    row.c = c;
    row.gamma = gamma;
    row.seconds = report.wall_seconds;
    report.levels.push_back(row);
    evaluate_into(report, model, test ? *test : train_set);
    return {std::move(model), std::move(report)};
}

RunResult run_multilevel(const Dataset& train_set, bool weighted, bool with_ud, const MultilevelConfig& config,
                         const Dataset* test) {
    const auto start = Clock::now();
    MultilevelResult result = multilevel_train(train_set, weighted, config, with_ud);
    RunReport report;
    report.mode = {true, weighted, with_ud};
    report.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    report.depth = result.depth;
    report.levels = std::move(result.levels);
    evaluate_into(report, result.model, test ? *test : train_set);
    return {std::move(result.model), std::move(report)};
}

RunResult run(const RunMode& mode, const Dataset& train_set, const MultilevelConfig& config, const Dataset* test) {
    return mode.multilevel ? run_multilevel(train_set, mode.weighted, mode.with_ud, config, test)
                           : run_single_level(train_set, mode.weighted, mode.with_ud, config, test);
}

std::vector<RunMode> default_benchmark_modes(bool weighted) {
    return {{true, weighted, true}, {true, weighted, false}, {false, weighted, true}, {false, weighted, false}};
}

std::vector<RunReport> benchmark(const Dataset& data, const MultilevelConfig& config, std::vector<RunMode> modes) {
    config.validate();
    if (modes.empty()) modes = default_benchmark_modes(config.weighted);
    const Split split = prepare_split(data, config.test_fraction, config.seed);
    std::vector<RunReport> reports;
    for (const RunMode& mode : modes) reports.push_back(run(mode, split.train, config, &split.test).second);
    return reports;
}

void print_report(std::ostream& out, const RunReport& r) {
    fmt::print(out, "mode {}  depth {}  train seconds {:.3f}\n", r.mode.name(), r.depth, r.wall_seconds);
    fmt::print(out, "C {:.6g}  gamma {:.6g}  support vectors {}{}\n", r.c, r.gamma, r.sv_count,
               r.converged ? "" : "  (solver hit the iteration limit)");
    fmt::print(out, "{:>5} {:>7} {:>7} {:>7} {:>9} {:>6} {:>6} {:>9}\n", "level", "|C+|", "|C-|", "train", "branch",
               "pairs", "SVs", "seconds");
    for (const auto& l : r.levels)
        fmt::print(out, "{:>5} {:>7} {:>7} {:>7} {:>9} {:>6} {:>6} {:>9.3f}\n", l.level, l.plus, l.minus,
                   l.train_size, to_string(l.branch), l.pairs, l.sv_count, l.seconds);
    fmt::print(out, "ACC {:.4f}  SN {:.4f}  SP {:.4f}  G-mean {:.4f}\n", r.measures.acc, r.measures.sn,
               r.measures.sp, r.measures.gmean);
}

void print_benchmark(std::ostream& out, const std::vector<RunReport>& reports, bool csv) {
    if (csv) {
        fmt::print(out, "mode,multilevel,model_selection,depth,seconds,acc,sn,sp,gmean\n");
        for (const auto& r : reports)
            fmt::print(out, "{},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.mode.name(),
                       r.mode.multilevel ? "yes" : "no", r.mode.with_ud ? "yes" : "no", r.depth, r.wall_seconds,
                       r.measures.acc, r.measures.sn, r.measures.sp, r.measures.gmean);
        return;
    }
    fmt::print(out, "{:<10} {:>10} {:>15} {:>5} {:>9} {:>6} {:>6} {:>6} {:>6}\n", "mode", "multilevel",
               "model selection", "depth", "seconds", "ACC", "SN", "SP", "G-mean");
    for (const auto& r : reports)
        fmt::print(out, "{:<10} {:>10} {:>15} {:>5} {:>9.3f} {:>6.2f} {:>6.2f} {:>6.2f} {:>6.2f}\n", r.mode.name(),
                   r.mode.multilevel ? "yes" : "no", r.mode.with_ud ? "yes" : "no", r.depth, r.wall_seconds,
                   r.measures.acc, r.measures.sn, r.measures.sp, r.measures.gmean);
}

}  // namespace mlsvm
