#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace snngb {

// Scalar constants of one leaky integrate-and-fire neuron.
struct NeuronParams {
    // With u_rest = u_reset = 0 the literal reset v(1 - v/u_firing) keeps
    // |u| <= 0.43 u_firing for every ||w|| <= 1, width <= 10 and |x| <= 1 only
    // while tau_r/u_firing <= 0.11 at tau_m = 2, dt = 1; outside that region
    // negative potentials grow double-exponentially. Hence the defaults.
    double tau_m = 2.0;     // membrane time constant
    double tau_r = 1.0;     // membrane resistance factor
    double u_rest = 0.0;
    double u_firing = 10.0; // firing threshold, divides the potential in excite()
    double u_reset = 0.0;
    double u_init = 0.0;

    // Throws InvalidArgument unless tau_m > 0, tau_r > 0, u_firing > 0 and
    // u_reset <= u_firing.
    void validate() const;
};

// Uniformly sampled real signal. Sample k lives at t0 + k*dt; times are
// never accumulated.
class Trace {
public:
    Trace() = default;
    Trace(double t0, double dt, std::vector<double> values);

    static Trace constant(double t0, double dt, std::size_t length, double value);

    double t0() const noexcept { return t0_; }
    double dt() const noexcept { return dt_; }
    std::size_t size() const noexcept { return values_.size(); }
    double duration() const noexcept { return static_cast<double>(values_.size() - 1) * dt_; }
    double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * dt_; }

    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }

    bool same_grid(const Trace& other) const noexcept;

    friend bool operator==(const Trace&, const Trace&) = default;

private:
    double t0_ = 0.0;
    double dt_ = 1.0;
    std::vector<double> values_{0.0};
};

// Several traces on one grid, e.g. the channels of a network input.
struct MultiTrace {
    std::vector<Trace> channels;

    std::size_t channel_count() const noexcept { return channels.size(); }
    std::size_t size() const noexcept { return channels.empty() ? 0 : channels.front().size(); }
    double dt() const noexcept { return channels.front().dt(); }

    // Throws DimensionMismatch when channels disagree on grid or length.
    void validate() const;
};

struct SpikeEvents {
    std::vector<double> times;      // strictly increasing
    std::vector<double> amplitudes; // one per time

    SpikeEvents() = default;
    SpikeEvents(std::vector<double> times, std::vector<double> amplitudes);

    std::size_t size() const noexcept { return times.size(); }

    // Throws InvalidArgument if times are not strictly increasing or leave [0, horizon].
    void validate(double horizon) const;
};

enum class KernelFamily { exponential };

// k(t) = scale * exp(-t / tau) for t >= 0 and 0 for t < 0.
struct Kernel {
    KernelFamily family = KernelFamily::exponential;
    double scale = 1.0;
    double tau = 1.0;

    double operator()(double t) const noexcept;
    // Smallest valid Lipschitz constant on t >= 0.
    double lipschitz() const noexcept;
};

struct SrmKernels {
    Kernel eta;     // reset kernel, negative scale
    Kernel epsilon; // post-synaptic kernel
    double lipschitz_eta = 0.0;
    double lipschitz_epsilon = 0.0;

    // eta = -u_firing * exp(-t/tau_m), epsilon = (tau_r/tau_m) * exp(-t/tau_m).
    static SrmKernels defaults_for(const NeuronParams& params);

    void validate() const;
};

// s = u / u_firing.
inline double excite(double u, const NeuronParams& params) noexcept { return u / params.u_firing; }

// u <- (1 - s) u + s u_reset.
inline double reset(double u, double s, const NeuronParams& params) noexcept {
    return (1.0 - s) * u + s * params.u_reset;
}

// One exponential-Euler step of tau_m du/dt = -(u - u_rest) + tau_r f_agg with
// f_agg frozen over the step.
double step_def(double u, double f_agg, double dt, const NeuronParams& params);

// Closed-form solution at time t starting from u_t0 at t0 under constant f_agg.
double eval_eid(double t, double t0, double u_t0, double f_agg, const NeuronParams& params);

struct DtaStep {
    double u = 0.0;
    bool unstable = false; // dt / tau_m >= 1
};

// Forward-Euler step u + (dt/tau_m) [-(u - u_rest) + tau_r f_agg].
DtaStep step_dta(double u_t, double f_agg_t, double dt, const NeuronParams& params);

// u_rest + int_0^t h(t-s) f_agg(s) ds with h(t) = (tau_r/tau_m) exp(-t/tau_m),
// trapezoidal rule on the trace grid. t must be a grid time of f_agg_trace.
double eval_gsf(double t, const Trace& f_agg_trace, const NeuronParams& params);

// Sum of amplitude-weighted eta(t - t_f) over self spikes plus
// sum_j w_j sum_e amplitude * epsilon(t - t_j^e). Spikes after t contribute nothing.
double eval_srm(double t, const SpikeEvents& self_spikes, std::span<const SpikeEvents> presyn,
                std::span<const double> weights, const SrmKernels& kernels);

} // namespace snngb
