#include <doctest.h>

#include "snngb/error.hpp"
#include "snngb/neuron.hpp"

#include <cmath>
#include <vector>

using namespace snngb;

namespace {
NeuronParams unit_params() {
    NeuronParams p;
    p.tau_m = 1;
    p.tau_r = 1;
    p.u_rest = 0;
    p.u_firing = 1;
    p.u_reset = 0;
    p.u_init = 0;
    return p;
}
} // namespace

TEST_CASE("excite is the linear ratio u / u_firing") {
    NeuronParams p = unit_params();
    CHECK(excite(0.0, p) == 0.0);
    CHECK(excite(p.u_firing, p) == 1.0);
    p.u_firing = 2;
    CHECK(excite(0.5, p) == doctest::Approx(0.25));
    for (double a : {-3.0, 0.5, 7.0}) CHECK(excite(a * 0.3, p) == doctest::Approx(a * excite(0.3, p)));
}

TEST_CASE("reset is the convex combination of u and u_reset") {
    NeuronParams p = unit_params();
    CHECK(reset(3.0, 1.0, p) == 0.0);
    CHECK(reset(2.0, 0.5, p) == doctest::Approx(1.0));
    CHECK(reset(0.37, 0.0, p) == 0.37);
    p.u_reset = -0.4;
    CHECK(reset(5.0, 1.0, p) == -0.4);
}

TEST_CASE("single-step values of DEF, EID and DTA") {
    const NeuronParams p = unit_params();
    const double e1 = 1.0 - std::exp(-1.0);
    CHECK(step_def(0.0, 1.0, 1.0, p) == doctest::Approx(e1).epsilon(1e-14));
    CHECK(eval_eid(1.0, 0.0, 0.0, 1.0, p) == doctest::Approx(e1).epsilon(1e-14));
    const auto d = step_dta(0.0, 1.0, 1.0, p);
    CHECK(d.u == doctest::Approx(1.0));
    CHECK(d.unstable);
    CHECK_FALSE(step_dta(0.0, 1.0, 0.5, p).unstable);
    CHECK_THROWS_AS(eval_eid(0.0, 1.0, 0.0, 1.0, p), InvalidArgument);
}

TEST_CASE("exponential Euler reproduces the closed form over many steps") {
    NeuronParams p;
    p.u_init = 0.8;
    double u = p.u_init;
    for (int k = 1; k <= 1000; ++k) {
        u = step_def(u, -0.3, 0.05, p);
        CHECK(std::abs(u - eval_eid(0.05 * k, 0.0, p.u_init, -0.3, p)) <= 1e-12);
    }
}

TEST_CASE("GsF convolution against the analytic kernel integral") {
    const NeuronParams p = unit_params();
    const Trace f = Trace::constant(0.0, 0.01, 101, 1.0);
    CHECK(eval_gsf(1.0, f, p) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-4));
    CHECK(eval_gsf(0.0, f, p) == 0.0);
    // Off-grid time uses the partial interval.
    CHECK(eval_gsf(0.505, f, p) == doctest::Approx(1.0 - std::exp(-0.505)).epsilon(1e-4));
    CHECK_THROWS_AS(eval_gsf(1.5, f, p), InvalidArgument);
    CHECK_THROWS_AS(eval_gsf(0.5, Trace::constant(0.1, 0.01, 101, 1.0), p), InvalidArgument);
}

TEST_CASE("SRM kernel sum") {
    SrmKernels k;
    k.eta = {KernelFamily::exponential, -1.0, 1.0};
    k.epsilon = {KernelFamily::exponential, 1.0, 1.0};
    const SpikeEvents none;
    std::vector<SpikeEvents> pre{SpikeEvents({0.0}, {1.0})};
    std::vector<double> w{1.0};
    CHECK(eval_srm(0.0, none, std::span<const SpikeEvents>{}, {}, k) == 0.0);
    CHECK(eval_srm(0.0, none, pre, w, k) == doctest::Approx(1.0));

    std::vector<double> w3{3.0};
    CHECK(eval_srm(0.7, none, pre, w3, k) == doctest::Approx(3.0 * eval_srm(0.7, none, pre, w, k)));

    // Causality: a presynaptic spike after t leaves u(t) unchanged.
    std::vector<SpikeEvents> later{SpikeEvents({0.0, 2.0}, {1.0, 5.0})};
    CHECK(eval_srm(1.5, none, later, w, k) == eval_srm(1.5, none, pre, w, k));

    const SpikeEvents self({0.5}, {1.0});
    CHECK(eval_srm(1.0, self, pre, w, k) == doctest::Approx(std::exp(-1.0) - std::exp(-0.5)));
    CHECK_THROWS_AS(eval_srm(1.0, self, pre, std::vector<double>{1.0, 2.0}, k), DimensionMismatch);
}

TEST_CASE("kernels are causal and report their Lipschitz constant") {
    const Kernel k{KernelFamily::exponential, -2.0, 4.0};
    CHECK(k(-0.1) == 0.0);
    CHECK(k(0.0) == -2.0);
    CHECK(k.lipschitz() == doctest::Approx(0.5));
    const auto d = SrmKernels::defaults_for(NeuronParams{});
    CHECK(d.eta.scale < 0.0);
    CHECK(d.epsilon.scale > 0.0);
    CHECK_NOTHROW(d.validate());
}

TEST_CASE("parameter and event validation") {
    NeuronParams p;
    CHECK_NOTHROW(p.validate());
    p.tau_m = 0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = NeuronParams{};
    p.u_firing = -1;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = NeuronParams{};
    p.u_reset = p.u_firing + 1;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);

    CHECK_THROWS_AS(SpikeEvents({0.0, 1.0}, {1.0}), DimensionMismatch);
    CHECK_THROWS_AS(SpikeEvents({1.0, 0.5}, {1.0, 1.0}).validate(10.0), InvalidArgument);
    CHECK_THROWS_AS(SpikeEvents({1.0, 11.0}, {1.0, 1.0}).validate(10.0), InvalidArgument);
}

TEST_CASE("trace grid arithmetic never accumulates") {
    const Trace t(0.0, 0.1, std::vector<double>(10001, 0.0));
    CHECK(t.time(10000) == 0.1 * 10000);
    CHECK(t.duration() == doctest::Approx(1000.0));
    CHECK(t.same_grid(Trace::constant(0.0, 0.1, 10001, 3.0)));
    CHECK_FALSE(t.same_grid(Trace::constant(0.0, 0.2, 10001, 3.0)));
}
