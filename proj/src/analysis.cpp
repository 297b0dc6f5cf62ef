#include "snngb/analysis.hpp"

#include "snngb/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace snngb {

double total_variation(const Trace& u) {
    if (u.size() < 2) throw InvalidArgument("total_variation: trace needs at least two samples");
    double tv = 0.0;
    for (std::size_t k = 0; k + 1 < u.size(); ++k) tv += std::abs(u[k + 1] - u[k]);
    return tv;
}

VariationBudget variation_budget(const NeuronParams& params, double T, double M_agg) {
    if (!(M_agg >= 0.0)) throw InvalidArgument("variation_budget: M_agg must be nonnegative");
    VariationBudget b;
    b.M_u = params.u_firing / params.tau_m + params.tau_r / params.tau_m * M_agg;
    b.C = params.u_rest / params.tau_m;
    b.T = T;
    b.budget = b.M_u * T;
    return b;
}

double measured_m_agg(const std::vector<Trace>& currents) {
    double m = 0.0;
    for (const auto& f : currents)
        for (std::size_t k = 0; k < f.size(); ++k) m = std::max(m, std::abs(f[k]) / std::max(f.time(k), f.dt()));
    return m;
}

namespace {

void check_layer(const std::vector<Trace>& potentials, const std::vector<Trace>& spikes, const VariationBudget& b,
                 const NeuronParams& params, BvVerdict& v) {
    const double tol = 1e-6 * b.budget;
    auto check = [&](const Trace& tr, double allowance) {
        const double tv = total_variation(tr);
        ++v.traces_checked;
        const double ratio = allowance > 0.0 ? tv / allowance : (tv > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        v.worst_ratio = std::max(v.worst_ratio, ratio);
        if (!(tv <= allowance + tol)) {
            ++v.violations;
            v.passed = false;
        }
    };
    for (const auto& u : potentials) check(u, b.budget);
    for (const auto& s : spikes) check(s, b.budget / params.u_firing);
}

} // namespace

BvVerdict bv_check(const SimulationRecord& record, const VariationBudget& budget, const NeuronParams& params) {
    BvVerdict v;
    for (std::size_t l = 0; l < record.potentials.size(); ++l)
        check_layer(record.potentials[l], record.spikes[l], budget, params, v);
    return v;
}

BvVerdict bv_check(const SimulationRecord& record, const NeuronParams& params, double T) {
    BvVerdict v;
    for (std::size_t l = 0; l < record.potentials.size(); ++l) {
        const auto b = variation_budget(params, T, measured_m_agg(record.currents[l]));
        check_layer(record.potentials[l], record.spikes[l], b, params, v);
    }
    return v;
}

double lipschitz_estimate(const Trace& u) {
    if (u.size() < 2) throw InvalidArgument("lipschitz_estimate: trace needs at least two samples");
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < u.size(); ++k) m = std::max(m, std::abs(u[k + 1] - u[k]));
    return m / u.dt();
}

double l2_sample_distance(const Trace& f, const Trace& g) {
    if (!f.same_grid(g)) throw DimensionMismatch("distance: traces must share one grid");
    double acc = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) acc += (f[k] - g[k]) * (f[k] - g[k]);
    return std::sqrt(acc / static_cast<double>(f.size()));
}

std::size_t greedy_cover(std::span<const Trace> points, double gamma) {
    if (points.empty()) throw InvalidArgument("greedy_cover: empty point set");
    if (!(gamma > 0.0)) throw InvalidArgument("greedy_cover: gamma must be positive");
    for (const auto& p : points)
        if (!p.same_grid(points.front())) throw DimensionMismatch("greedy_cover: points must share one grid");
    std::vector<std::size_t> centres;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool covered = false;
        for (auto c : centres)
            if (l2_sample_distance(points[i], points[c]) <= gamma) {
                covered = true;
                break;
            }
        if (!covered) centres.push_back(i);
    }
    return centres.size();
}

double scalarize(const Tape& tape, std::size_t output_width) {
    double acc = 0.0;
    for (std::size_t k = 0; k < tape.length; ++k) acc += tape.s.back()[k * output_width];
    return acc / static_cast<double>(tape.length);
}

double correlation(const NetworkConfig& cfg, std::span<const Matrix> weights,
                   std::span<const std::vector<double>> inputs, std::span<const double> sigma,
                   std::vector<Matrix>* grad) {
    if (inputs.size() != sigma.size()) throw DimensionMismatch("correlation: one sign per input required");
    const std::size_t len = cfg.grid_length();
    const std::size_t out_w = cfg.output_width();
    const double n = static_cast<double>(inputs.size());
    if (grad) {
        grad->clear();
        for (const auto& m : weights) grad->emplace_back(m.rows, m.cols);
    }
    double value = 0.0;
    std::vector<double> cot(len * out_w, 0.0);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const Tape tape = simulate(cfg, weights, inputs[i], len);
        value += sigma[i] * scalarize(tape, out_w) / n;
        if (grad) {
            const double c = sigma[i] / (n * static_cast<double>(len));
            for (std::size_t k = 0; k < len; ++k) cot[k * out_w] = c;
            const auto g = backpropagate(cfg, weights, tape, inputs[i], cot);
            for (std::size_t l = 0; l < g.size(); ++l)
                for (std::size_t e = 0; e < g[l].data.size(); ++e) (*grad)[l].data[e] += g[l].data[e];
        }
    }
    return value;
}

RademacherEstimate estimate_rademacher(std::span<const MultiTrace> inputs, const NetworkConfig& cfg, std::size_t K,
                                       const RademacherOptions& opt, std::uint64_t seed) {
    if (K < 1) throw InvalidArgument("estimate_rademacher: K must be >= 1");
    if (inputs.empty()) throw InvalidArgument("estimate_rademacher: no inputs");
    if (opt.restarts < 1) throw InvalidArgument("estimate_rademacher: restarts must be >= 1");
    cfg.validate();
    std::vector<std::vector<double>> flat;
    for (const auto& x : inputs) {
        if (x.channel_count() != cfg.input_width() || x.size() != cfg.grid_length())
            throw DimensionMismatch("estimate_rademacher: input does not match the network grid");
        flat.push_back(flatten_input(x));
    }

    RademacherEstimate est;
    est.draws = K;
    for (std::size_t d = 0; d < K; ++d) {
        std::mt19937_64 rng(derive_seed(seed, d));
        std::vector<double> sigma(inputs.size());
        for (auto& s : sigma) s = (rng() >> 63) ? 1.0 : -1.0;

        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < opt.restarts; ++r) {
            std::vector<Matrix> w = Network::random(cfg, rng()).weights();
            std::vector<Matrix> g;
            const double epochs = static_cast<double>(opt.ascent.epochs);
            for (std::size_t it = 0; it < opt.ascent.epochs; ++it) {
                const double value = correlation(cfg, w, flat, sigma, &g);
                if (std::isfinite(value)) best = std::max(best, value);
                double gn = 0.0;
                for (const auto& m : g)
                    for (double v : m.data) gn += v * v;
                gn = std::sqrt(gn);
                if (!(gn > 0.0) || !std::isfinite(gn)) break;
                const double step = opt.ascent.learning_rate * cfg.weight_norm_cap *
                                    (1.0 - static_cast<double>(it) / epochs) / gn;
                for (std::size_t l = 0; l < w.size(); ++l)
                    for (std::size_t e = 0; e < w[l].data.size(); ++e) w[l].data[e] += step * g[l].data[e];
                w = project_weights(std::move(w), cfg.weight_norm_cap);
            }
            const double last = correlation(cfg, w, flat, sigma, nullptr);
            if (std::isfinite(last)) best = std::max(best, last);
        }
        if (!std::isfinite(best)) throw NumericalError("estimate_rademacher: no finite objective value");
        est.per_draw_maxima.push_back(best);
    }
    double sum = 0.0;
    for (double v : est.per_draw_maxima) sum += v;
    est.mean = sum / static_cast<double>(K);
    if (K > 1) {
        double ss = 0.0;
        for (double v : est.per_draw_maxima) ss += (v - est.mean) * (v - est.mean);
        est.standard_error = std::sqrt(ss / static_cast<double>(K - 1)) / std::sqrt(static_cast<double>(K));
    }
    return est;
}

} // namespace snngb
