#include "snngb/network.hpp"

#include "snngb/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace snngb {

const char* to_string(Expression e) noexcept {
    switch (e) {
    case Expression::DEF: return "DEF";
    case Expression::SRM: return "SRM";
    case Expression::EID: return "EID";
    case Expression::DTA: return "DTA";
    case Expression::GsF: return "GsF";
    }
    return "?";
}

Expression parse_expression(std::string_view name) {
    std::string up(name);
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
    if (up == "DEF") return Expression::DEF;
    if (up == "SRM") return Expression::SRM;
    if (up == "EID") return Expression::EID;
    if (up == "DTA") return Expression::DTA;
    if (up == "GSF") return Expression::GsF;
    throw InvalidArgument("unknown expression '" + std::string(name) + "'");
}

double Matrix::norm() const noexcept {
    double acc = 0.0;
    for (double v : data) acc += v * v;
    return std::sqrt(acc);
}

std::size_t NetworkConfig::steps() const {
    if (!(dt > 0.0) || !(T > 0.0)) throw InvalidArgument("T and dt must be positive");
    const double ratio = T / dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw InvalidArgument("T / dt must be a positive integer step count");
    return static_cast<std::size_t>(rounded);
}

void NetworkConfig::validate() const {
    if (widths.size() < 2) throw InvalidArgument("network needs depth >= 1");
    for (auto w : widths)
        if (w == 0) throw InvalidArgument("layer widths must be >= 1");
    (void)steps();
    params.validate();
    if (!(weight_norm_cap >= 0.0) || !std::isfinite(weight_norm_cap))
        throw InvalidArgument("weight norm cap must be finite and nonnegative");
    if (expression == Expression::SRM) {
        if (!kernels) throw InvalidArgument("SRM expression requires kernels");
        kernels->validate();
    }
}

std::vector<std::size_t> NetworkConfig::layered_widths(std::size_t input, std::size_t hidden,
                                                       std::size_t depth, std::size_t output) {
    if (depth == 0) throw InvalidArgument("depth must be >= 1");
    std::vector<std::size_t> w;
    w.push_back(input);
    for (std::size_t l = 1; l < depth; ++l) w.push_back(hidden);
    w.push_back(output);
    return w;
}

namespace {

void check_shapes(const NetworkConfig& cfg, const std::vector<Matrix>& weights) {
    if (weights.size() != cfg.depth())
        throw DimensionMismatch("expected " + std::to_string(cfg.depth()) + " weight matrices, got " +
                                std::to_string(weights.size()));
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const auto& w = weights[l];
        if (w.rows != cfg.widths[l + 1] || w.cols != cfg.widths[l] || w.data.size() != w.rows * w.cols)
            throw DimensionMismatch("layer " + std::to_string(l + 1) + " weight shape does not match widths");
    }
}

} // namespace

Network::Network(NetworkConfig config, std::vector<Matrix> weights)
    : config_(std::move(config)), weights_(std::move(weights)) {
    config_.validate();
    check_shapes(config_, weights_);
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        const double n = weights_[l].norm();
        if (!std::isfinite(n)) throw NumericalError("non-finite weights in layer " + std::to_string(l + 1));
        if (n > config_.weight_norm_cap * (1.0 + 1e-12))
            throw InvalidArgument("layer " + std::to_string(l + 1) + " weight norm exceeds M_w");
    }
}

Network Network::zeros(const NetworkConfig& config) {
    config.validate();
    std::vector<Matrix> w;
    for (std::size_t l = 0; l + 1 < config.widths.size(); ++l)
        w.emplace_back(config.widths[l + 1], config.widths[l]);
    return Network(config, std::move(w));
}

Network Network::random(const NetworkConfig& config, std::uint64_t seed) {
    config.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<Matrix> w;
    for (std::size_t l = 0; l + 1 < config.widths.size(); ++l) {
        Matrix m(config.widths[l + 1], config.widths[l]);
        for (auto& v : m.data) v = uni(rng);
        const double n = m.norm();
        const double target = 0.5 * config.weight_norm_cap;
        if (n > 0.0)
            for (auto& v : m.data) v *= target / n;
        w.push_back(std::move(m));
    }
    return Network(config, project_weights(std::move(w), config.weight_norm_cap));
}

Network Network::with_weights(std::vector<Matrix> weights) const {
    check_shapes(config_, weights);
    return Network(config_, project_weights(std::move(weights), config_.weight_norm_cap));
}

std::vector<Matrix> project_weights(std::vector<Matrix> weights, double cap) {
    for (auto& m : weights) {
        const double n = m.norm();
        if (n > cap) {
            const double scale = cap / n;
            for (auto& v : m.data) v *= scale;
            // Rounding can leave the norm a hair above the cap.
            if (m.norm() > cap) {
                const double fix = std::nextafter(1.0, 0.0);
                while (m.norm() > cap)
                    for (auto& v : m.data) v *= fix;
            }
        }
    }
    return weights;
}

Network project_weights(const Network& net) {
    return Network(net.config(), project_weights(net.weights(), net.config().weight_norm_cap));
}

std::vector<double> aggregate(const Matrix& w, std::span<const double> s_prev) {
    if (s_prev.size() != w.cols)
        throw DimensionMismatch("aggregate: weight matrix has " + std::to_string(w.cols) +
                                " columns but input has " + std::to_string(s_prev.size()) + " entries");
    std::vector<double> out(w.rows, 0.0);
    for (std::size_t i = 0; i < w.rows; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < w.cols; ++j) acc += w(i, j) * s_prev[j];
        out[i] = acc;
    }
    return out;
}

std::vector<double> flatten_input(const MultiTrace& input) {
    input.validate();
    const std::size_t c = input.channel_count();
    const std::size_t n = input.size();
    std::vector<double> flat(n * c);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < c; ++j) flat[k * c + j] = std::clamp(input.channels[j][k], -1.0, 1.0);
    return flat;
}

double input_sup_norm(const MultiTrace& input) {
    const auto flat = flatten_input(input);
    const std::size_t c = input.channel_count();
    double sup = 0.0;
    for (std::size_t k = 0; k < input.size(); ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < c; ++j) acc += flat[k * c + j] * flat[k * c + j];
        sup = std::max(sup, std::sqrt(acc));
    }
    return sup;
}

Tape simulate(const Network& net, std::span<const double> input, std::size_t length) {
    return simulate(net.config(), net.weights(), input, length);
}

Tape simulate(const NetworkConfig& cfg, std::span<const Matrix> weights, std::span<const double> input,
              std::size_t length) {
    const auto& p = cfg.params;
    const std::size_t depth = cfg.depth();
    const std::size_t in_w = cfg.input_width();
    if (weights.size() != depth) throw DimensionMismatch("simulate: wrong number of weight matrices");
    if (length == 0 || length > cfg.grid_length())
        throw DimensionMismatch("simulation length outside the configured grid");
    if (input.size() < length * in_w)
        throw DimensionMismatch("input holds fewer samples than the simulation length");

    const double dt = cfg.dt;
    const double decay = std::exp(-dt / p.tau_m);
    const double gsf_c = 0.5 * dt * p.tau_r / p.tau_m;
    // Past this magnitude the quadratic reset squares |u| every step.
    const double diverged = 1e6 * (p.u_firing + std::abs(p.u_reset) + std::abs(p.u_rest) + std::abs(p.u_init));

    double srm_decay_eps = 0.0, srm_decay_eta = 0.0, srm_eps0 = 0.0, srm_eta_dt = 0.0;
    if (cfg.expression == Expression::SRM) {
        const auto& k = *cfg.kernels;
        srm_decay_eps = std::exp(-dt / k.epsilon.tau);
        srm_decay_eta = std::exp(-dt / k.eta.tau);
        srm_eps0 = k.epsilon(0.0);
        srm_eta_dt = k.eta(dt);
    }

    Tape tape;
    tape.length = length;
    tape.u.resize(depth);
    tape.s.resize(depth);
    tape.f.resize(depth);
    for (std::size_t l = 0; l < depth; ++l) {
        const std::size_t n = cfg.widths[l + 1];
        tape.u[l].assign(length * n, 0.0);
        tape.s[l].assign(length * n, 0.0);
        tape.f[l].assign(length * n, 0.0);
    }

    // Carried per-neuron state: post-reset potential (or GsF convolution, or
    // SRM epsilon sum) in `a`, SRM eta sum in `b`.
    std::vector<std::vector<double>> a(depth), b(depth);
    for (std::size_t l = 0; l < depth; ++l) {
        a[l].assign(cfg.widths[l + 1], 0.0);
        b[l].assign(cfg.widths[l + 1], 0.0);
    }

    for (std::size_t k = 0; k < length; ++k) {
        for (std::size_t l = 0; l < depth; ++l) {
            const Matrix& w = weights[l];
            const std::size_t n = w.rows;
            const std::size_t m = w.cols;
            const double* prev = (l == 0) ? input.data() + k * in_w : tape.s[l - 1].data() + k * m;
            double* f = tape.f[l].data() + k * n;
            double* u = tape.u[l].data() + k * n;
            double* s = tape.s[l].data() + k * n;
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < m; ++j) acc += w(i, j) * prev[j];
                f[i] = acc;
            }
            for (std::size_t i = 0; i < n; ++i) {
                double ui = 0.0;
                switch (cfg.expression) {
                case Expression::DEF:
                    ui = (k == 0) ? p.u_init : step_def(a[l][i], f[i], dt, p);
                    break;
                case Expression::EID:
                    ui = (k == 0) ? p.u_init : eval_eid(dt, 0.0, a[l][i], f[i], p);
                    break;
                case Expression::DTA:
                    if (k == 0) {
                        ui = p.u_init;
                    } else {
                        const auto st = step_dta(a[l][i], f[i], dt, p);
                        ui = st.u;
                        tape.dta_unstable = tape.dta_unstable || st.unstable;
                    }
                    break;
                case Expression::GsF:
                    ui = (k == 0) ? p.u_init
                                  : p.u_rest + decay * a[l][i] +
                                        gsf_c * (decay * tape.f[l][(k - 1) * n + i] + f[i]);
                    break;
                case Expression::SRM:
                    a[l][i] = srm_decay_eps * a[l][i] + srm_eps0 * f[i];
                    if (k > 0) b[l][i] = srm_decay_eta * b[l][i] + srm_eta_dt * tape.s[l][(k - 1) * n + i];
                    ui = a[l][i] + b[l][i];
                    break;
                }
                if (!(std::abs(ui) <= diverged))
                    throw NumericalError("membrane potential diverged in layer " + std::to_string(l + 1) +
                                         " at step " + std::to_string(k));
                u[i] = ui;
                s[i] = excite(ui, p);
                if (cfg.expression == Expression::GsF)
                    a[l][i] = reset(ui, s[i], p) - p.u_rest;
                else if (cfg.expression != Expression::SRM)
                    a[l][i] = reset(ui, s[i], p);
            }
        }
    }
    return tape;
}

SimulationRecord forward(const Network& net, const MultiTrace& input) {
    const auto& cfg = net.config();
    input.validate();
    if (input.channel_count() != cfg.input_width())
        throw DimensionMismatch("input has " + std::to_string(input.channel_count()) + " channels, network expects " +
                                std::to_string(cfg.input_width()));
    const Trace& ref = input.channels.front();
    if (ref.size() != cfg.grid_length() || std::abs(ref.dt() - cfg.dt) > 1e-12 * cfg.dt || ref.t0() != 0.0)
        throw DimensionMismatch("input trace does not span the configured [0, T] grid");

    const auto flat = flatten_input(input);
    const Tape tape = simulate(net, flat, cfg.grid_length());

    SimulationRecord rec;
    const std::size_t len = tape.length;
    auto unpack = [&](const std::vector<double>& flat_layer, std::size_t width) {
        std::vector<Trace> out;
        out.reserve(width);
        for (std::size_t i = 0; i < width; ++i) {
            std::vector<double> v(len);
            for (std::size_t k = 0; k < len; ++k) v[k] = flat_layer[k * width + i];
            out.emplace_back(0.0, cfg.dt, std::move(v));
        }
        return out;
    };
    for (std::size_t l = 0; l < cfg.depth(); ++l) {
        const std::size_t width = cfg.widths[l + 1];
        rec.potentials.push_back(unpack(tape.u[l], width));
        rec.spikes.push_back(unpack(tape.s[l], width));
        rec.currents.push_back(unpack(tape.f[l], width));
    }
    rec.outputs = rec.spikes.back();
    rec.output = rec.outputs.front();
    return rec;
}

} // namespace snngb
