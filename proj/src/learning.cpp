#include "snngb/learning.hpp"

#include "snngb/error.hpp"

#include <chrono>
#include <cmath>
#include <random>

namespace snngb {

void TrainConfig::validate() const {
    if (epochs < 1) throw InvalidArgument("epochs must be >= 1");
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
        throw InvalidArgument("learning rate must be finite and nonnegative");
}

LossConstants lsq_loss_constants(double n_f) noexcept { return {4.0 * n_f, 4.0 * n_f * n_f}; }

double loss_lsq(const Trace& pred, const Trace& target) {
    if (!pred.same_grid(target)) throw DimensionMismatch("loss_lsq: prediction and target grids differ");
    double acc = 0.0;
    for (std::size_t k = 0; k < pred.size(); ++k) {
        const double d = pred[k] - target[k];
        acc += d * d;
    }
    return acc / static_cast<double>(pred.size());
}

std::vector<Matrix> backpropagate(const NetworkConfig& cfg, std::span<const Matrix> weights, const Tape& tape,
                                  std::span<const double> input, std::span<const double> cot) {
    const auto& p = cfg.params;
    const std::size_t depth = cfg.depth();
    const std::size_t len = tape.length;
    const std::size_t in_w = cfg.input_width();
    const std::size_t out_w = cfg.output_width();
    if (cot.size() != len * out_w) throw DimensionMismatch("backpropagate: cotangent length mismatch");

    const double dt = cfg.dt;
    const double decay = std::exp(-dt / p.tau_m);
    // du_k/dz_{k-1} and du_k/df_k of the single-state steppers.
    double du_dz = decay, du_df = (1.0 - decay) * p.tau_r;
    if (cfg.expression == Expression::DTA) {
        du_dz = 1.0 - dt / p.tau_m;
        du_df = dt / p.tau_m * p.tau_r;
    }
    const double gsf_c = 0.5 * dt * p.tau_r / p.tau_m;
    double eps_decay = 0.0, eta_decay = 0.0, eps0 = 0.0, eta_dt = 0.0;
    if (cfg.expression == Expression::SRM) {
        eps_decay = std::exp(-dt / cfg.kernels->epsilon.tau);
        eta_decay = std::exp(-dt / cfg.kernels->eta.tau);
        eps0 = cfg.kernels->epsilon(0.0);
        eta_dt = cfg.kernels->eta(dt);
    }

    std::vector<Matrix> grad;
    for (std::size_t l = 0; l < depth; ++l) grad.emplace_back(cfg.widths[l + 1], cfg.widths[l]);

    // Adjoints carried from step k+1 back to step k: `carry_a` is dJ/dz_k (or
    // the SRM epsilon-sum adjoint), `carry_b` the GsF f_k contribution or SRM
    // eta-sum adjoint.
    std::vector<std::vector<double>> carry_a(depth), carry_b(depth), gs(depth), gf(depth);
    for (std::size_t l = 0; l < depth; ++l) {
        const std::size_t n = cfg.widths[l + 1];
        carry_a[l].assign(n, 0.0);
        carry_b[l].assign(n, 0.0);
        gs[l].assign(n, 0.0);
        gf[l].assign(n, 0.0);
    }

    for (std::size_t kk = len; kk-- > 0;) {
        for (std::size_t l = 0; l < depth; ++l) std::fill(gs[l].begin(), gs[l].end(), 0.0);
        for (std::size_t i = 0; i < out_w; ++i) gs[depth - 1][i] = cot[kk * out_w + i];

        for (std::size_t l = depth; l-- > 0;) {
            const std::size_t n = cfg.widths[l + 1];
            const std::size_t m = cfg.widths[l];
            const double* u = tape.u[l].data() + kk * n;
            for (std::size_t i = 0; i < n; ++i) {
                double g_s = gs[l][i];
                double g_f = 0.0;
                if (cfg.expression == Expression::SRM) {
                    g_s += eta_dt * carry_b[l][i];
                    const double g_u = g_s / p.u_firing;
                    const double g_e = g_u + eps_decay * carry_a[l][i];
                    const double g_h = g_u + eta_decay * carry_b[l][i];
                    g_f = eps0 * g_e;
                    carry_a[l][i] = g_e;
                    carry_b[l][i] = g_h;
                } else {
                    const double d_reset = 1.0 - (2.0 * u[i] - p.u_reset) / p.u_firing;
                    const double g_u = g_s / p.u_firing + carry_a[l][i] * d_reset;
                    if (cfg.expression == Expression::GsF) {
                        g_f = carry_b[l][i];
                        if (kk > 0) g_f += gsf_c * g_u;
                        carry_a[l][i] = decay * g_u;
                        carry_b[l][i] = gsf_c * decay * g_u;
                    } else {
                        if (kk > 0) g_f = du_df * g_u;
                        carry_a[l][i] = du_dz * g_u;
                    }
                }
                gf[l][i] = g_f;
            }
            const double* prev = (l == 0) ? input.data() + kk * in_w : tape.s[l - 1].data() + kk * m;
            const Matrix& w = weights[l];
            Matrix& g = grad[l];
            for (std::size_t i = 0; i < n; ++i) {
                const double gi = gf[l][i];
                if (gi == 0.0) continue;
                for (std::size_t j = 0; j < m; ++j) g(i, j) += gi * prev[j];
            }
            if (l > 0)
                for (std::size_t j = 0; j < m; ++j) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < n; ++i) acc += w(i, j) * gf[l][i];
                    gs[l - 1][j] += acc;
                }
        }
    }
    return grad;
}

namespace {

struct Prepared {
    std::vector<double> input;
    std::size_t length = 0;
};

Prepared prepare(const Network& net, const MultiTrace& input, const Trace& target) {
    const auto& cfg = net.config();
    input.validate();
    if (input.channel_count() != cfg.input_width())
        throw DimensionMismatch("input channel count does not match the network");
    if (input.size() != cfg.grid_length()) throw DimensionMismatch("input does not span the network grid");
    if (target.size() > cfg.grid_length() || target.size() == 0)
        throw DimensionMismatch("target must cover a nonempty prefix of the grid");
    if (target.t0() != 0.0 || std::abs(target.dt() - cfg.dt) > 1e-12 * cfg.dt)
        throw DimensionMismatch("target grid does not match the network grid");
    return {flatten_input(input), target.size()};
}

double loss_on_tape(const NetworkConfig& cfg, const Tape& tape, const Trace& target, std::size_t begin,
                    std::size_t end) {
    const std::size_t out_w = cfg.output_width();
    double acc = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
        const double d = tape.s.back()[k * out_w] - target[k];
        acc += d * d;
    }
    return acc / static_cast<double>(end - begin);
}

std::vector<Matrix> adjoint_gradient(const NetworkConfig& cfg, std::span<const Matrix> weights,
                                     std::span<const double> input, const Trace& target, std::size_t begin,
                                     std::size_t end, double* loss_out) {
    const Tape tape = simulate(cfg, weights, input, end);
    const std::size_t out_w = cfg.output_width();
    std::vector<double> cot(end * out_w, 0.0);
    const double scale = 2.0 / static_cast<double>(end - begin);
    for (std::size_t k = begin; k < end; ++k) cot[k * out_w] = scale * (tape.s.back()[k * out_w] - target[k]);
    if (loss_out) *loss_out = loss_on_tape(cfg, tape, target, begin, end);
    return backpropagate(cfg, weights, tape, input, cot);
}

std::vector<Matrix> fd_gradient(const NetworkConfig& cfg, std::span<const Matrix> weights,
                                std::span<const double> input, const Trace& target, std::size_t begin,
                                std::size_t end) {
    constexpr double h = 1e-5;
    std::vector<Matrix> w(weights.begin(), weights.end());
    std::vector<Matrix> grad;
    for (const auto& m : w) grad.emplace_back(m.rows, m.cols);
    for (std::size_t l = 0; l < w.size(); ++l)
        for (std::size_t e = 0; e < w[l].data.size(); ++e) {
            const double orig = w[l].data[e];
            w[l].data[e] = orig + h;
            const double up = fit_loss(cfg, w, input, target, begin, end);
            w[l].data[e] = orig - h;
            const double down = fit_loss(cfg, w, input, target, begin, end);
            w[l].data[e] = orig;
            grad[l].data[e] = (up - down) / (2.0 * h);
        }
    return grad;
}

std::vector<Matrix> gradient_range(const Network& net, std::span<const double> input, const Trace& target,
                                   std::size_t begin, std::size_t end, GradientMode mode) {
    if (mode == GradientMode::finite_difference)
        return fd_gradient(net.config(), net.weights(), input, target, begin, end);
    return adjoint_gradient(net.config(), net.weights(), input, target, begin, end, nullptr);
}

bool all_finite(const std::vector<Matrix>& ms) {
    for (const auto& m : ms)
        for (double v : m.data)
            if (!std::isfinite(v)) return false;
    return true;
}

} // namespace

double fit_loss(const NetworkConfig& cfg, std::span<const Matrix> weights, std::span<const double> input,
                const Trace& target, std::size_t begin, std::size_t end) {
    if (begin >= end || end > target.size()) throw InvalidArgument("fit_loss: empty or out-of-range window");
    const Tape tape = simulate(cfg, weights, input, end);
    return loss_on_tape(cfg, tape, target, begin, end);
}

std::vector<Matrix> gradient(const Network& net, const MultiTrace& input, const Trace& target,
                             const TrainConfig& cfg) {
    const auto prep = prepare(net, input, target);
    return gradient_range(net, prep.input, target, 0, prep.length, cfg.gradient_mode);
}

std::pair<Network, TrainReport> train(const Network& net, const MultiTrace& input, const Trace& target,
                                      const TrainConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto prep = prepare(net, input, target);
    const std::size_t len = prep.length;
    const std::size_t window = (cfg.window == 0 || cfg.window >= len) ? len : cfg.window;
    std::mt19937_64 rng(cfg.seed);

    Network current = net;
    TrainReport report;
    report.error_curve.reserve(cfg.epochs);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::size_t begin = 0;
        if (window < len) begin = std::uniform_int_distribution<std::size_t>(0, len - window)(rng);
        auto grad = gradient_range(current, prep.input, target, begin, begin + window, cfg.gradient_mode);
        if (!all_finite(grad)) throw NumericalError("non-finite gradient at epoch " + std::to_string(epoch + 1));

        std::vector<Matrix> w = current.weights();
        for (std::size_t l = 0; l < w.size(); ++l)
            for (std::size_t e = 0; e < w[l].data.size(); ++e) w[l].data[e] -= cfg.learning_rate * grad[l].data[e];
        current = current.with_weights(std::move(w));

        const double err = fit_loss(current.config(), current.weights(), prep.input, target, 0, len);
        if (!std::isfinite(err)) throw NumericalError("training loss diverged at epoch " + std::to_string(epoch + 1));
        report.error_curve.push_back(err);
    }
    report.final_train_error = report.error_curve.back();
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {std::move(current), std::move(report)};
}

} // namespace snngb
