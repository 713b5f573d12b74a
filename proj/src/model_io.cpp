#include "mlsvm/error.hpp"
#include "mlsvm/svm_solver.hpp"

#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace mlsvm {

namespace {

constexpr std::string_view kMagic = "mlsvm-model";
constexpr int kVersion = 1;

void put_reals(fmt::memory_buffer& buf, std::string_view key, const std::vector<double>& values) {
    fmt::format_to(std::back_inserter(buf), "{}", key);
    for (double v : values) fmt::format_to(std::back_inserter(buf), " {:.17g}", v);
    buf.push_back('\n');
}

class Reader {
  public:
    explicit Reader(std::istream& in) : in_(in) {}

    // Next non-empty line, split off its key.
    std::istringstream expect(std::string_view key) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            std::istringstream fields(line);
            std::string got;
            fields >> got;
            if (got != key) throw parse_error(fmt::format("expected '{}', found '{}'", key, got), line_no_);
            return fields;
        }
        throw parse_error(fmt::format("model file ended before '{}'", key), line_no_);
    }

    template <typename T>
    T value(std::string_view key) {
        auto fields = expect(key);
        T v{};
        if (!(fields >> v)) throw parse_error(fmt::format("bad value for '{}'", key), line_no_);
        return v;
    }

    std::vector<double> reals(std::string_view key, std::size_t count) {
        auto fields = expect(key);
        std::vector<double> out(count);
        for (double& v : out)
            if (!(fields >> v)) throw parse_error(fmt::format("'{}' needs {} values", key, count), line_no_);
        return out;
    }

    std::size_t line() const { return line_no_; }

  private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

}  // namespace

void save_model(std::ostream& out, const TrainedModel& model) {
    fmt::memory_buffer buf;
    auto it = std::back_inserter(buf);
    fmt::format_to(it, "{} {}\n", kMagic, kVersion);
    fmt::format_to(it, "kernel {}\n", to_string(model.hyper.kernel.kind));
    fmt::format_to(it, "gamma {:.17g}\n", model.hyper.kernel.gamma);
    fmt::format_to(it, "c {:.17g}\n", model.hyper.c);
    fmt::format_to(it, "c_plus {:.17g}\n", model.hyper.weights.c_plus);
    fmt::format_to(it, "c_minus {:.17g}\n", model.hyper.weights.c_minus);
    fmt::format_to(it, "bias {:.17g}\n", model.bias);
    fmt::format_to(it, "n_features {}\n", model.n_features);
    fmt::format_to(it, "train_size {}\n", model.train_size);
    fmt::format_to(it, "converged {}\n", model.converged ? 1 : 0);
    fmt::format_to(it, "iterations {}\n", model.iterations);
    fmt::format_to(it, "objective {:.17g}\n", model.objective);
    fmt::format_to(it, "label_plus {:.17g}\n", model.label_map.plus);
    fmt::format_to(it, "label_minus {:.17g}\n", model.label_map.minus);
    fmt::format_to(it, "normalization {}\n", model.norm ? 1 : 0);
    if (model.norm) {
        put_reals(buf, "norm_mean", model.norm->mean);
        put_reals(buf, "norm_std", model.norm->stddev);
        fmt::format_to(it, "norm_constant");
        for (bool c : model.norm->constant) fmt::format_to(it, " {}", c ? 1 : 0);
        fmt::format_to(it, "\n");
    }
    fmt::format_to(it, "sv_count {}\n", model.sv_count());
    fmt::format_to(it, "# sv <dataset index> <alpha> <label> <features...>\n");
    for (std::size_t s = 0; s < model.sv_count(); ++s) {
        fmt::format_to(it, "sv {} {:.17g} {}", model.sv_ids[s], model.alphas[s], model.labels[s]);
        for (double v : model.sv(s)) fmt::format_to(it, " {:.17g}", v);
        fmt::format_to(it, "\n");
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

TrainedModel load_model(std::istream& in) {
    Reader r(in);
    TrainedModel m;
    if (const int version = r.value<int>(kMagic); version != kVersion)
        throw parse_error(fmt::format("unsupported model version {}", version), r.line());
    m.hyper.kernel.kind = kernel_kind_from_string(r.value<std::string>("kernel"));
    m.hyper.kernel.gamma = r.value<double>("gamma");
    m.hyper.c = r.value<double>("c");
    m.hyper.weights.c_plus = r.value<double>("c_plus");
    m.hyper.weights.c_minus = r.value<double>("c_minus");
    m.hyper.weights.base_c = m.hyper.c;  // not stored; prediction only needs the bounds
    m.bias = r.value<double>("bias");
    m.n_features = r.value<std::size_t>("n_features");
    m.train_size = r.value<std::size_t>("train_size");
    m.converged = r.value<int>("converged") != 0;
    m.iterations = r.value<std::size_t>("iterations");
    m.objective = r.value<double>("objective");
    m.label_map.plus = r.value<double>("label_plus");
    m.label_map.minus = r.value<double>("label_minus");
    if (r.value<int>("normalization") != 0) {
        NormStats stats;
        stats.mean = r.reals("norm_mean", m.n_features);
        stats.stddev = r.reals("norm_std", m.n_features);
        const auto flags = r.reals("norm_constant", m.n_features);
        for (double f : flags) stats.constant.push_back(f != 0.0);
        m.norm = std::move(stats);
    }
    const auto count = r.value<std::size_t>("sv_count");
    std::string line;
    m.sv_ids.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        // Comment lines are skipped by expect() only when blank; handle '#' here.
        std::istringstream fields;
        while (true) {
            if (!std::getline(in, line)) throw parse_error("model file ended inside the support-vector list");
            if (line.empty() || line[0] == '#') continue;
            fields = std::istringstream(line);
            break;
        }
        std::string key;
        std::size_t id = 0;
        double alpha = 0.0;
        int label = 0;
        if (!(fields >> key >> id >> alpha >> label) || key != "sv" || (label != 1 && label != -1) || !(alpha > 0.0))
            throw parse_error(fmt::format("bad support-vector entry {}", s));
        m.sv_ids.push_back(id);
        m.alphas.push_back(alpha);
        m.labels.push_back(label);
        for (std::size_t c = 0; c < m.n_features; ++c) {
            double v = 0.0;
            if (!(fields >> v)) throw parse_error(fmt::format("support vector {} has too few features", s));
            m.sv_features.push_back(v);
        }
    }
    m.hyper.validate();
    return m;
}

void save_model(const std::string& path, const TrainedModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write '" + path + "'");
    save_model(out, model);
    if (!out) throw io_error("failed writing '" + path + "'");
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read '" + path + "'");
    return load_model(in);
}

}  // namespace mlsvm
