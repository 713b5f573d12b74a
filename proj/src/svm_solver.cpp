#include "mlsvm/svm_solver.hpp"

#include "mlsvm/error.hpp"
#include "mlsvm/simd.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace mlsvm {

void HyperParams::validate() const {
    if (!(c > 0.0)) throw invalid_argument(fmt::format("penalty C must be positive, got {}", c));
    if (!(weights.c_plus > 0.0) || !(weights.c_minus > 0.0))
        throw invalid_argument(fmt::format("class penalties must be positive, got ({}, {})",
                                           weights.c_plus, weights.c_minus));
    kernel.validate();
}

std::string_view to_string(WorkingSetRule rule) {
    return rule == WorkingSetRule::first_order ? "first_order" : "second_order";
}

WorkingSetRule working_set_rule_from_string(std::string_view name) {
    if (name == "first_order") return WorkingSetRule::first_order;
    if (name == "second_order") return WorkingSetRule::second_order;
    throw invalid_argument(fmt::format("unknown working-set rule '{}'", name));
}

namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

class Smo {
  public:
    Smo(const Dataset& data, std::span<const std::size_t> subset, const HyperParams& hyper,
        const SolverOptions& options)
        : n_(subset.size()),
          rows_(hyper.kernel, data, subset, options.cache_bytes),
          y_(n_),
          bound_(n_),
          alpha_(n_, 0.0),
          grad_(n_, -1.0),
          options_(options) {
        for (std::size_t p = 0; p < n_; ++p) {
            const int label = data.label(subset[p]);
            y_[p] = label;
            bound_[p] = hyper.bound(label);
        }
    }

    bool solve(std::size_t max_iter) {
        while (true) {
            std::size_t i = 0, j = 0;
            const double gap = options_.rule == WorkingSetRule::first_order ? select_first_order(i, j)
                                                                             : select_second_order(i, j);
            if (gap < options_.tolerance) return true;
            if (iterations_ >= max_iter) return false;
            step(i, j);
            ++iterations_;
        }
    }

    double bias() const {
        double upper = kInf, lower = -kInf, free_sum = 0.0;
        std::size_t free_count = 0;
        for (std::size_t t = 0; t < n_; ++t) {
            const double yg = y_[t] * grad_[t];
            if (at_upper(t)) {
                if (y_[t] < 0) upper = std::min(upper, yg);
                else lower = std::max(lower, yg);
            } else if (at_lower(t)) {
                if (y_[t] > 0) upper = std::min(upper, yg);
                else lower = std::max(lower, yg);
            } else {
                ++free_count;
                free_sum += yg;
            }
        }
        const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (upper + lower) / 2.0;
        return -rho;
    }

    double objective() const {
        double v = 0.0;
        for (std::size_t t = 0; t < n_; ++t) v += alpha_[t] * (grad_[t] - 1.0);
        return v / 2.0;
    }

    const std::vector<double>& alpha() const { return alpha_; }
    std::size_t iterations() const { return iterations_; }

  private:
    bool at_upper(std::size_t t) const { return alpha_[t] >= bound_[t]; }
    bool at_lower(std::size_t t) const { return alpha_[t] <= 0.0; }
    bool in_up(std::size_t t) const { return y_[t] > 0 ? !at_upper(t) : !at_lower(t); }
    bool in_low(std::size_t t) const { return y_[t] > 0 ? !at_lower(t) : !at_upper(t); }

    // Returns m(a) - M(a); i maximizes -y G over I_up, j minimizes it over I_low.
    double select_first_order(std::size_t& i, std::size_t& j) const {
        double gmax = -kInf, gmin = kInf;
        for (std::size_t t = 0; t < n_; ++t) {
            const double v = -y_[t] * grad_[t];
            if (in_up(t) && v > gmax) {
                gmax = v;
                i = t;
            }
            if (in_low(t) && v < gmin) {
                gmin = v;
                j = t;
            }
        }
        return gmax - gmin;
    }

    double select_second_order(std::size_t& i, std::size_t& j) {
        double gmax = -kInf;
        for (std::size_t t = 0; t < n_; ++t) {
            const double v = -y_[t] * grad_[t];
            if (in_up(t) && v > gmax) {
                gmax = v;
                i = t;
            }
        }
        if (gmax == -kInf) return -kInf;
        const KernelRow row_i = rows_.row(i);
        const double kii = rows_.diagonal(i);
        double gmin = kInf, best = kInf;
        bool found = false;
        for (std::size_t t = 0; t < n_; ++t) {
            if (!in_low(t)) continue;
            const double v = -y_[t] * grad_[t];
            gmin = std::min(gmin, v);
            const double diff = gmax - v;
            if (diff > 0.0) {
                double a = kii + rows_.diagonal(t) - 2.0 * (*row_i)[t];
                if (a <= 0.0) a = kTau;
                const double gain = -(diff * diff) / a;
                if (gain < best) {
                    best = gain;
                    j = t;
                    found = true;
                }
            }
        }
        // A gap above tolerance always leaves some t with diff > 0.
        (void)found;
        return gmax - gmin;
    }

    void step(std::size_t i, std::size_t j) {
        const KernelRow row_i = rows_.row(i);
        const KernelRow row_j = rows_.row(j);
        const double kij = (*row_i)[j];
        const double ci = bound_[i], cj = bound_[j];
        const double old_i = alpha_[i], old_j = alpha_[j];
        double& ai = alpha_[i];
        double& aj = alpha_[j];

        double quad = rows_.diagonal(i) + rows_.diagonal(j) - 2.0 * kij;
        if (quad <= 0.0) quad = kTau;
        if (y_[i] != y_[j]) {
            const double delta = (-grad_[i] - grad_[j]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) {
                    aj = 0.0;
                    ai = diff;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = -diff;
            }
            if (diff > ci - cj) {
                if (ai > ci) {
                    ai = ci;
                    aj = ci - diff;
                }
            } else if (aj > cj) {
                aj = cj;
                ai = cj + diff;
            }
        } else {
            const double delta = (grad_[i] - grad_[j]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > ci) {
                if (ai > ci) {
                    ai = ci;
                    aj = sum - ci;
                }
            } else if (aj < 0.0) {
                aj = 0.0;
                ai = sum;
            }
            if (sum > cj) {
                if (aj > cj) {
                    aj = cj;
                    ai = sum - cj;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = sum;
            }
        }

        // G_k += y_k (y_i dA_i K_ki + y_j dA_j K_kj)
        const double di = y_[i] * (ai - old_i);
        const double dj = y_[j] * (aj - old_j);
        simd::active().signed_axpy2(di, row_i->data(), dj, row_j->data(), y_.data(), grad_.data(), n_);
    }

    std::size_t n_;
    KernelRows rows_;
    std::vector<double> y_;
    std::vector<double> bound_;
    std::vector<double> alpha_;
    std::vector<double> grad_;
    SolverOptions options_;
    std::size_t iterations_ = 0;
};

}  // namespace

TrainedModel train(const Dataset& data, std::span<const std::size_t> subset, const HyperParams& hyper,
                   const SolverOptions& options) {
    hyper.validate();
    if (!(options.tolerance > 0.0)) throw invalid_argument("solver tolerance must be positive");
    if (subset.empty()) throw invalid_argument("cannot train on an empty subset");
    const ClassSizes sizes = class_sizes(data, subset);
    if (sizes.plus == 0 || sizes.minus == 0)
        throw invalid_argument("training subset must contain both classes");

    const std::size_t n = subset.size();
    const std::size_t max_iter =
        options.max_iter ? options.max_iter : std::min<std::size_t>(10000 * n, 10'000'000);

    Smo smo(data, subset, hyper, options);
    TrainedModel model;
    model.converged = smo.solve(max_iter);
    model.iterations = smo.iterations();
    model.bias = smo.bias();
    model.objective = smo.objective();
    model.hyper = hyper;
    model.train_size = n;
    model.n_features = data.n_features();
    model.label_map = data.label_map();
    model.norm = data.norm_stats();

    const auto& alpha = smo.alpha();
    for (std::size_t p = 0; p < n; ++p) {
        if (alpha[p] <= 0.0) continue;
        model.sv_ids.push_back(subset[p]);
        model.alphas.push_back(alpha[p]);
        model.labels.push_back(data.label(subset[p]));
        const auto x = data.row(subset[p]);
        model.sv_features.insert(model.sv_features.end(), x.begin(), x.end());
    }
    return model;
}

double decision_value(const TrainedModel& model, std::span<const double> x) {
    if (x.size() != model.n_features)
        throw dimension_error(fmt::format("input has {} features, model expects {}", x.size(), model.n_features));
    const std::size_t m = model.sv_count();
    std::vector<double> k(m);
    const auto& kt = simd::active();
    if (model.hyper.kernel.kind == KernelKind::linear)
        kt.dots(x.data(), model.sv_features.data(), m, model.n_features, k.data());
    else
        kt.squared_distances(x.data(), model.sv_features.data(), m, model.n_features, k.data());
    kernel_finish(model.hyper.kernel, k);
    double f = model.bias;
    for (std::size_t s = 0; s < m; ++s) f += model.alphas[s] * model.labels[s] * k[s];
    return f;
}

int predict(const TrainedModel& model, std::span<const double> x) {
    return label_from_decision(decision_value(model, x));
}

double dual_objective(const Dataset& data, std::span<const std::size_t> subset,
                      std::span<const double> alpha, const KernelSpec& kernel) {
    if (alpha.size() != subset.size()) throw invalid_argument("alpha and subset lengths differ");
    double quad = 0.0, linear = 0.0;
    for (std::size_t a = 0; a < subset.size(); ++a) {
        linear += alpha[a];
        if (alpha[a] == 0.0) continue;
        for (std::size_t b = 0; b < subset.size(); ++b) {
            if (alpha[b] == 0.0) continue;
            quad += alpha[a] * alpha[b] * data.label(subset[a]) * data.label(subset[b]) *
                    kernel_eval(kernel, data.row(subset[a]), data.row(subset[b]));
        }
    }
    return 0.5 * quad - linear;
}

}  // namespace mlsvm
