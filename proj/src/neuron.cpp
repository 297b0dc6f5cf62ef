#include "snngb/neuron.hpp"

#include "snngb/error.hpp"

#include <cmath>
#include <string>

namespace snngb {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::numerical: return "numerical";
    case ErrorCode::io: return "io";
    case ErrorCode::parse: return "parse";
    }
    return "unknown";
}

void NeuronParams::validate() const {
    if (!(tau_m > 0.0)) throw InvalidArgument("tau_m must be positive");
    if (!(tau_r > 0.0)) throw InvalidArgument("tau_r must be positive");
    if (!(u_firing > 0.0)) throw InvalidArgument("u_firing must be positive");
    if (!(u_reset <= u_firing)) throw InvalidArgument("u_reset must not exceed u_firing");
    if (!std::isfinite(u_rest) || !std::isfinite(u_init) || !std::isfinite(u_reset))
        throw InvalidArgument("neuron potentials must be finite");
}

Trace::Trace(double t0, double dt, std::vector<double> values)
    : t0_(t0), dt_(dt), values_(std::move(values)) {
    if (!(dt_ > 0.0)) throw InvalidArgument("trace dt must be positive");
    if (values_.empty()) throw InvalidArgument("trace needs at least one sample");
}

Trace Trace::constant(double t0, double dt, std::size_t length, double value) {
    return Trace(t0, dt, std::vector<double>(length, value));
}

bool Trace::same_grid(const Trace& other) const noexcept {
    return t0_ == other.t0_ && dt_ == other.dt_ && values_.size() == other.values_.size();
}

void MultiTrace::validate() const {
    if (channels.empty()) throw DimensionMismatch("multi-channel trace has no channels");
    for (const auto& c : channels)
        if (!c.same_grid(channels.front()))
            throw DimensionMismatch("channels of a multi-channel trace must share one grid");
}

SpikeEvents::SpikeEvents(std::vector<double> t, std::vector<double> a)
    : times(std::move(t)), amplitudes(std::move(a)) {
    if (times.size() != amplitudes.size())
        throw DimensionMismatch("spike times and amplitudes differ in length");
}

void SpikeEvents::validate(double horizon) const {
    if (times.size() != amplitudes.size())
        throw DimensionMismatch("spike times and amplitudes differ in length");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || times[i] > horizon)
            throw InvalidArgument("spike time outside [0, T]");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw InvalidArgument("spike times must be strictly increasing");
    }
}

double Kernel::operator()(double t) const noexcept {
    if (t < 0.0) return 0.0;
    return scale * std::exp(-t / tau);
}

double Kernel::lipschitz() const noexcept { return std::abs(scale) / tau; }

SrmKernels SrmKernels::defaults_for(const NeuronParams& params) {
    SrmKernels k;
    k.eta = Kernel{KernelFamily::exponential, -params.u_firing, params.tau_m};
    k.epsilon = Kernel{KernelFamily::exponential, params.tau_r / params.tau_m, params.tau_m};
    k.lipschitz_eta = k.eta.lipschitz();
    k.lipschitz_epsilon = k.epsilon.lipschitz();
    return k;
}

void SrmKernels::validate() const {
    if (!(eta.tau > 0.0) || !(epsilon.tau > 0.0))
        throw InvalidArgument("kernel time constants must be positive");
    if (!(eta.scale < 0.0)) throw InvalidArgument("eta is a reset kernel and needs a negative scale");
    if (!(epsilon.scale > 0.0)) throw InvalidArgument("epsilon needs a positive scale");
    if (lipschitz_eta < eta.lipschitz() || lipschitz_epsilon < epsilon.lipschitz())
        throw InvalidArgument("declared kernel Lipschitz constant is below the kernel slope");
}

double step_def(double u, double f_agg, double dt, const NeuronParams& params) {
    if (!(dt > 0.0)) throw InvalidArgument("step_def: dt must be positive");
    const double u_eq = params.u_rest + params.tau_r * f_agg;
    return u_eq + (u - u_eq) * std::exp(-dt / params.tau_m);
}

double eval_eid(double t, double t0, double u_t0, double f_agg, const NeuronParams& params) {
    if (t < t0) throw InvalidArgument("eval_eid: t precedes t0");
    const double decay = std::exp(-(t - t0) / params.tau_m);
    return params.u_rest + (u_t0 - params.u_rest) * decay + params.tau_r * f_agg * (1.0 - decay);
}

DtaStep step_dta(double u_t, double f_agg_t, double dt, const NeuronParams& params) {
    if (!(dt > 0.0)) throw InvalidArgument("step_dta: dt must be positive");
    const double ratio = dt / params.tau_m;
    return {u_t + ratio * (-(u_t - params.u_rest) + params.tau_r * f_agg_t), ratio >= 1.0};
}

double eval_gsf(double t, const Trace& f, const NeuronParams& params) {
    if (f.t0() != 0.0) throw InvalidArgument("eval_gsf: input trace must start at 0");
    if (t < 0.0) throw InvalidArgument("eval_gsf: t must be nonnegative");
    const double span = f.duration();
    if (t > span * (1.0 + 1e-12) + 1e-15) throw InvalidArgument("eval_gsf: t beyond trace span");

    const double dt = f.dt();
    const double gain = params.tau_r / params.tau_m;
    auto h = [&](double lag) { return gain * std::exp(-lag / params.tau_m); };

    // Whole grid intervals up to t, then a partial interval with a linearly
    // interpolated input.
    double pos = t / dt;
    std::size_t whole = static_cast<std::size_t>(std::floor(pos + 1e-9));
    if (whole > f.size() - 1) whole = f.size() - 1;
    double frac_dt = t - f.time(whole);
    if (frac_dt < 0.0) frac_dt = 0.0;

    double acc = 0.0;
    for (std::size_t k = 0; k < whole; ++k) {
        const double a = h(t - f.time(k)) * f[k];
        const double b = h(t - f.time(k + 1)) * f[k + 1];
        acc += 0.5 * dt * (a + b);
    }
    if (frac_dt > 0.0 && whole + 1 < f.size()) {
        const double w = frac_dt / dt;
        const double f_t = (1.0 - w) * f[whole] + w * f[whole + 1];
        acc += 0.5 * frac_dt * (h(t - f.time(whole)) * f[whole] + h(0.0) * f_t);
    }
    return params.u_rest + acc;
}

double eval_srm(double t, const SpikeEvents& self_spikes, std::span<const SpikeEvents> presyn,
                std::span<const double> weights, const SrmKernels& kernels) {
    if (presyn.size() != weights.size())
        throw DimensionMismatch("eval_srm: " + std::to_string(presyn.size()) +
                                " presynaptic trains but " + std::to_string(weights.size()) + " weights");
    double u = 0.0;
    for (std::size_t i = 0; i < self_spikes.size(); ++i)
        if (self_spikes.times[i] <= t) u += self_spikes.amplitudes[i] * kernels.eta(t - self_spikes.times[i]);
    for (std::size_t j = 0; j < presyn.size(); ++j) {
        double psp = 0.0;
        const auto& train = presyn[j];
        for (std::size_t e = 0; e < train.size(); ++e)
            if (train.times[e] <= t) psp += train.amplitudes[e] * kernels.epsilon(t - train.times[e]);
        u += weights[j] * psp;
    }
    return u;
}

} // namespace snngb
