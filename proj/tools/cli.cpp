#include "cli.hpp"

#include "mlsvm/config.hpp"
#include "mlsvm/data.hpp"
#include "mlsvm/error.hpp"
#include "mlsvm/log.hpp"
#include "mlsvm/metrics.hpp"
#include "mlsvm/pipeline.hpp"
#include "mlsvm/svm_solver.hpp"
#include "mlsvm/synthetic.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace mlsvm::cli {

namespace {

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> settings;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    bool weighted = false;
};

struct Options {
    CommonOptions common;
    std::string data_path;
    std::string model_path;
    std::string output_path;
    std::string test_path;
    bool single_level = false;
    bool no_ud = false;
    bool csv = false;
    std::vector<std::string> modes;
    // generate
    std::string generator;
    std::size_t size = 7400;
    std::uint64_t gen_seed = 1;
    BlobsOptions blobs;
    int verbosity = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "key=value config file");
    cmd->add_option("--set", o.settings, "config override key=value (repeatable, wins over everything)");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--threads", o.threads, "worker threads (1 = reproducibility reference)");
    cmd->add_flag("--weighted", o.weighted, "weighted SVM (inverse class-size penalties)");
}

MultilevelConfig build_config(const CommonOptions& o) {
    MultilevelConfig config = o.config_path.empty() ? MultilevelConfig{} : load_config(o.config_path);
    if (o.seed) config.seed = *o.seed;
    if (o.threads) config.threads = *o.threads;
    if (o.weighted) config.weighted = true;
    for (const auto& s : o.settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw invalid_argument(fmt::format("--set expects key=value, got '{}'", s));
        apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
    }
    config.validate();
    return config;
}

// Loads labeled data for an existing model: its label map, width and normalization.
Dataset load_for_model(const std::string& path, const TrainedModel& model) {
    ParseOptions parse;
    parse.labels = model.label_map;
    parse.n_features = model.n_features;
    Dataset data = load_dataset(path, parse);
    return model.norm ? apply_normalization(data, *model.norm) : data;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error(fmt::format("cannot write '{}'", path));
    return f;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
    const MultilevelConfig config = build_config(o.common);
    const Dataset raw = load_dataset(o.data_path);
    const Dataset train_set = normalize(raw);
    std::optional<Dataset> test;
    if (!o.test_path.empty()) {
        ParseOptions parse;
        parse.labels = raw.label_map();
        parse.n_features = raw.n_features();
        test = apply_normalization(load_dataset(o.test_path, parse), *train_set.norm_stats());
    }
    const RunMode mode{!o.single_level, config.weighted, !o.no_ud};
    auto [model, report] = run(mode, train_set, config, test ? &*test : nullptr);
    {
        auto f = open_output(o.model_path);
        save_model(f, model);
        if (!f) throw io_error(fmt::format("cannot write '{}'", o.model_path));
    }
    fmt::print(out, "model written to {}\n", o.model_path);
    fmt::print(out, "measures on {} data\n", test ? "test" : "training");
    print_report(out, report);
    if (!model.converged) {
        fmt::print(err, "warning: the final solver run hit its iteration limit\n");
        return not_converged;
    }
    return ok;
}

int cmd_predict(const Options& o, std::ostream& out) {
    const TrainedModel model = load_model(o.model_path);
    const Dataset data = load_for_model(o.data_path, model);
    std::ostringstream lines;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const int y = predict(model, data.row(i));
        fmt::print(lines, "{}\n", y == 1 ? model.label_map.plus : model.label_map.minus);
    }
    if (o.output_path.empty()) {
        out << lines.str();
    } else {
        auto f = open_output(o.output_path);
        f << lines.str();
    }
    return ok;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
    const TrainedModel model = load_model(o.model_path);
    const Dataset data = load_for_model(o.data_path, model);
    const Measures m = measures(confusion(model, data));
    if (o.csv) {
        fmt::print(out, "acc,sn,sp,gmean\n{:.6f},{:.6f},{:.6f},{:.6f}\n", m.acc, m.sn, m.sp, m.gmean);
    } else {
        fmt::print(out, "{:>6} {:>6} {:>6} {:>6}\n", "ACC", "SN", "SP", "G-mean");
        fmt::print(out, "{:>6.2f} {:>6.2f} {:>6.2f} {:>6.2f}\n", m.acc, m.sn, m.sp, m.gmean);
    }
    return ok;
}

int cmd_benchmark(const Options& o, std::ostream& out) {
    const MultilevelConfig config = build_config(o.common);
    const Dataset data = load_dataset(o.data_path);
    std::vector<RunMode> modes;
    for (const auto& m : o.modes) modes.push_back(run_mode_from_string(m, config.weighted));
    print_benchmark(out, benchmark(data, config, modes), o.csv);
    return ok;
}

int cmd_generate(const Options& o, std::ostream& out) {
    const Dataset data = make_synthetic(o.generator, o.size, o.gen_seed, o.blobs);
    save_dataset(o.output_path, data);
    const ClassSizes s = data.class_sizes();
    fmt::print(out, "{} points ({} +1, {} -1), {} features written to {}\n", data.size(), s.plus, s.minus,
               data.n_features(), o.output_path);
    return ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multilevel (weighted) SVM training and benchmarking", "mlsvm"};
    app.require_subcommand(1);
    Options o;
    app.add_flag("-v,--verbose", o.verbosity, "more log output (-vv for debug)");

    auto* train_cmd = app.add_subcommand("train", "train a model");
    train_cmd->add_option("data", o.data_path, "training data (LIBSVM, or CSV by extension)")->required();
    train_cmd->add_option("-m,--model", o.model_path, "output model path")->required();
    train_cmd->add_option("--test", o.test_path, "labeled data to report measures on");
    train_cmd->add_flag("--single-level", o.single_level, "train on the full set without coarsening");
    train_cmd->add_flag("--no-ud", o.no_ud, "skip model selection, use the search box center");
    add_common(train_cmd, o.common);

    auto* predict_cmd = app.add_subcommand("predict", "write one predicted label per line");
    predict_cmd->add_option("model", o.model_path, "model file")->required();
    predict_cmd->add_option("data", o.data_path, "data to label")->required();
    predict_cmd->add_option("-o,--output", o.output_path, "output path (default: stdout)");

    auto* evaluate_cmd = app.add_subcommand("evaluate", "ACC, SN, SP and G-mean on labeled data");
    evaluate_cmd->add_option("model", o.model_path, "model file")->required();
    evaluate_cmd->add_option("data", o.data_path, "labeled data")->required();
    evaluate_cmd->add_flag("--csv", o.csv, "print acc,sn,sp,gmean");

    auto* bench_cmd = app.add_subcommand("benchmark", "multilevel x model-selection grid on one split");
    bench_cmd->add_option("data", o.data_path, "dataset")->required();
    bench_cmd->add_option("--modes", o.modes, "subset of ml+ud, ml, single+ud, single")->delimiter(',');
    bench_cmd->add_flag("--csv", o.csv, "comma-separated output");
    add_common(bench_cmd, o.common);

    auto* gen_cmd = app.add_subcommand("generate", "write a synthetic LIBSVM dataset");
    gen_cmd->add_option("name", o.generator, "twonorm, ringnorm or blobs")->required();
    gen_cmd->add_option("-o,--output", o.output_path, "output path")->required();
    gen_cmd->add_option("--size", o.size, "number of points")->capture_default_str();
    gen_cmd->add_option("--seed", o.gen_seed, "seed")->capture_default_str();
    gen_cmd->add_option("--dim", o.blobs.dim, "blobs: dimensions")->capture_default_str();
    gen_cmd->add_option("--separation", o.blobs.separation, "blobs: mean offset per class")->capture_default_str();
    gen_cmd->add_option("--minority", o.blobs.minority_fraction, "blobs: share of the -1 class")
        ->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : invalid_input;
    }

    log::set_level(o.verbosity >= 2 ? log::level::debug : o.verbosity == 1 ? log::level::info : log::level::warn);
    try {
        if (*train_cmd) return cmd_train(o, out, err);
        if (*predict_cmd) return cmd_predict(o, out);
        if (*evaluate_cmd) return cmd_evaluate(o, out);
        if (*bench_cmd) return cmd_benchmark(o, out);
        if (*gen_cmd) return cmd_generate(o, out);
    } catch (const io_error& e) {
        fmt::print(err, "error: {}\n", e.what());
        return io_failure;
    } catch (const parse_error& e) {
        fmt::print(err, "error: {}\n", e.what());
        return io_failure;
    } catch (const invalid_argument& e) {
        fmt::print(err, "error: {}\n", e.what());
        return invalid_input;
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return io_failure;
    }
    return invalid_input;
}

}  // namespace mlsvm::cli
