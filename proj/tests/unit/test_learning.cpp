#include <doctest.h>

#include "snngb/error.hpp"
#include "snngb/learning.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace snngb;

namespace {

MultiTrace noise(std::size_t channels, std::size_t len, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MultiTrace x;
    for (std::size_t c = 0; c < channels; ++c) {
        std::vector<double> v(len);
        for (auto& s : v) s = u(rng);
        x.channels.emplace_back(0.0, 1.0, std::move(v));
    }
    return x;
}

Trace target_of(std::size_t len, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    std::vector<double> v(len);
    for (auto& s : v) s = u(rng);
    return Trace(0.0, 1.0, std::move(v));
}

} // namespace

TEST_CASE("least-squares loss and its constants") {
    const Trace a(0.0, 1.0, {0.0, 1.0, 2.0});
    const Trace b(0.0, 1.0, {0.0, 0.0, 0.0});
    CHECK(loss_lsq(a, b) == doctest::Approx(5.0 / 3.0));
    CHECK(loss_lsq(a, a) == 0.0);
    CHECK_THROWS_AS(loss_lsq(a, Trace(0.0, 0.5, {0.0, 0.0, 0.0})), DimensionMismatch);
    const auto lc = lsq_loss_constants(3.0);
    CHECK(lc.lipschitz == 12.0);
    CHECK(lc.ceiling == 36.0);
}

TEST_CASE("adjoint gradient matches central differences for every expression") {
    for (int e = 0; e < 5; ++e)
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            NetworkConfig c;
            c.expression = static_cast<Expression>(e);
            c.widths = {2, 3, 2};
            c.T = 15;
            c.params.u_firing = 2.0; // larger signals, still inside the stable region
            c.params.u_rest = 0.05;
            c.params.u_init = 0.1;
            if (c.expression == Expression::SRM) c.kernels = SrmKernels::defaults_for(c.params);
            const Network n = Network::random(c, 100 + seed);
            const auto x = noise(2, c.grid_length(), seed);
            const auto tgt = target_of(c.grid_length() - 3, seed + 50); // a prefix
            TrainConfig adj, fd;
            fd.gradient_mode = GradientMode::finite_difference;
            const auto ga = gradient(n, x, tgt, adj);
            const auto gf = gradient(n, x, tgt, fd);
            REQUIRE(ga.size() == gf.size());
            for (std::size_t l = 0; l < ga.size(); ++l)
                for (std::size_t i = 0; i < ga[l].data.size(); ++i) {
                    const double a = ga[l].data[i], f = gf[l].data[i];
                    INFO("expression " << to_string(c.expression) << " layer " << l << " entry " << i);
                    CHECK(std::abs(a - f) <= std::max(1e-8, 1e-4 * std::abs(f)));
                }
        }
}

TEST_CASE("training lowers the loss and stays inside the norm ball") {
    NetworkConfig c;
    c.expression = Expression::DEF;
    c.widths = {2, 1};
    c.T = 40;
    c.params.u_firing = 1.0;
    c.weight_norm_cap = 1.0;
    const Network init = Network::random(c, 4);
    const auto x = noise(2, c.grid_length(), 9);
    // A target the network can express: the output of another network.
    const Network teacher = Network::random(c, 12);
    const Trace tgt = forward(teacher, x).output;
    TrainConfig tc;
    tc.epochs = 60;
    tc.learning_rate = 5.0;
    const auto [net, rep] = train(init, x, tgt, tc);
    CHECK(rep.error_curve.size() == 60);
    CHECK(rep.final_train_error < 0.5 * loss_lsq(forward(init, x).output, tgt));
    for (const auto& m : net.weights()) CHECK(m.norm() <= c.weight_norm_cap * (1 + 1e-12));
}

TEST_CASE("windowed training is reproducible from its seed") {
    NetworkConfig c;
    c.expression = Expression::SRM;
    c.widths = {2, 2, 1};
    c.T = 30;
    c.kernels = SrmKernels::defaults_for(c.params);
    const Network init = Network::random(c, 1);
    const auto x = noise(2, c.grid_length(), 2);
    const auto tgt = target_of(c.grid_length(), 3);
    TrainConfig tc;
    tc.epochs = 10;
    tc.window = 8;
    tc.seed = 42;
    const auto a = train(init, x, tgt, tc);
    const auto b = train(init, x, tgt, tc);
    CHECK(a.first.weights() == b.first.weights());
    CHECK(a.second.error_curve == b.second.error_curve);
}

TEST_CASE("train config validation") {
    TrainConfig tc;
    tc.epochs = 0;
    CHECK_THROWS_AS(tc.validate(), InvalidArgument);
    tc = TrainConfig{};
    tc.learning_rate = -1;
    CHECK_THROWS_AS(tc.validate(), InvalidArgument);
}
