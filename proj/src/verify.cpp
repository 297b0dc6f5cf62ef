#include "snngb/harness.hpp"

#include "snngb/analysis.hpp"
#include "snngb/bounds.hpp"
#include "snngb/error.hpp"
#include "snngb/seed.hpp"
#include "snngb/xor_task.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

namespace snngb {

bool VerifyReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.passed; });
}

std::string VerifyReport::text() const {
    std::ostringstream o;
    std::size_t failed = 0;
    for (const auto& c : checks) {
        char buf[512];
        std::snprintf(buf, sizeof buf, "[%s] %-10s %-40s margin=%.3e tol=%.1e %s\n", c.passed ? "PASS" : "FAIL",
                      c.suite.c_str(), c.name.c_str(), c.margin, c.tolerance, c.detail.c_str());
        o << buf;
        if (!c.passed) ++failed;
    }
    o << checks.size() - failed << "/" << checks.size() << " checks passed\n";
    return o.str();
}

namespace {

using Lines = std::vector<CheckLine>;

void add(Lines& out, const char* suite, std::string name, bool ok, double margin, double tol,
         std::string detail = {}) {
    out.push_back({suite, std::move(name), ok, margin, tol, std::move(detail)});
}

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

// ---- neurons --------------------------------------------------------------

double dta_endpoint_error(double dt, double T, double f, const NeuronParams& p) {
    const auto n = static_cast<std::size_t>(std::llround(T / dt));
    double u = p.u_init;
    for (std::size_t k = 0; k < n; ++k) u = step_dta(u, f, dt, p).u;
    return std::abs(u - eval_eid(T, 0.0, p.u_init, f, p));
}

void suite_neurons(Lines& out, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    // DEF against the closed form under constant input, several parameter draws.
    double worst_def = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        NeuronParams p;
        p.tau_m = 1.0 + 9.0 * std::abs(unit(rng));
        p.tau_r = 0.5 + std::abs(unit(rng));
        p.u_rest = 0.2 * unit(rng);
        p.u_init = unit(rng);
        const double f = unit(rng), dt = 0.01;
        double u = p.u_init, max_u = std::abs(u), max_err = 0.0;
        for (std::size_t k = 1; k <= 1000; ++k) {
            u = step_def(u, f, dt, p);
            const double ref = eval_eid(static_cast<double>(k) * dt, 0.0, p.u_init, f, p);
            max_err = std::max(max_err, std::abs(u - ref));
            max_u = std::max(max_u, std::abs(ref));
        }
        worst_def = std::max(worst_def, max_err / max_u);
    }
    add(out, "neurons", "DEF vs EID, 1000 steps", worst_def <= 1e-12, 1e-12 - worst_def, 1e-12,
        fmt("max rel |du| = %.3e", worst_def));

    // GsF convolution with u_init = u_rest against the closed form.
    {
        NeuronParams p;
        p.u_init = p.u_rest;
        const double dt = 1e-3, f = 0.7;
        const Trace ft = Trace::constant(0.0, dt, 1001, f);
        double max_err = 0.0;
        for (std::size_t k = 0; k <= 1000; k += 50) {
            const double t = ft.time(k);
            max_err = std::max(max_err, std::abs(eval_gsf(t, ft, p) - eval_eid(t, 0.0, p.u_rest, f, p)));
        }
        add(out, "neurons", "GsF vs EID at dt=1e-3", max_err <= 1e-6, 1e-6 - max_err, 1e-6,
            fmt("max |du| = %.3e", max_err));
    }

    // Forward Euler is first order.
    {
        NeuronParams p;
        p.u_init = 0.3;
        const double e1 = dta_endpoint_error(0.02, 2.0, 0.8, p);
        const double e2 = dta_endpoint_error(0.01, 2.0, 0.8, p);
        const double ratio = e1 / e2;
        const bool ok = ratio >= 1.8 && ratio <= 2.2;
        add(out, "neurons", "DTA error ratio under dt halving", ok, std::min(ratio - 1.8, 2.2 - ratio), 0.2,
            fmt("ratio = %.4f", ratio));
    }

    // The SRM recursion of the simulator equals the explicit kernel sum.
    {
        NetworkConfig cfg;
        cfg.expression = Expression::SRM;
        cfg.widths = {2, 1};
        cfg.T = 40;
        cfg.kernels = SrmKernels::defaults_for(cfg.params);
        const Network net = Network::random(cfg, derive_seed(seed, 11));
        MultiTrace x;
        for (int c = 0; c < 2; ++c) {
            std::vector<double> v(cfg.grid_length());
            for (auto& e : v) e = unit(rng);
            x.channels.emplace_back(0.0, cfg.dt, std::move(v));
        }
        const auto flat = flatten_input(x);
        const Tape tape = simulate(net, flat, cfg.grid_length());
        double max_err = 0.0;
        std::vector<SpikeEvents> pre(2);
        for (int c = 0; c < 2; ++c) {
            std::vector<double> times, amps;
            for (std::size_t k = 0; k < cfg.grid_length(); ++k) {
                times.push_back(static_cast<double>(k) * cfg.dt);
                amps.push_back(x.channels[c][k]);
            }
            pre[c] = SpikeEvents(std::move(times), std::move(amps));
        }
        const double w[2] = {net.weights()[0](0, 0), net.weights()[0](0, 1)};
        for (std::size_t k = 0; k < cfg.grid_length(); ++k) {
            std::vector<double> st, sa;
            for (std::size_t j = 0; j < k; ++j) {
                st.push_back(static_cast<double>(j) * cfg.dt);
                sa.push_back(tape.s[0][j]);
            }
            const double ref = eval_srm(static_cast<double>(k) * cfg.dt, SpikeEvents(st, sa), pre, w, *cfg.kernels);
            max_err = std::max(max_err, std::abs(ref - tape.u[0][k]));
        }
        add(out, "neurons", "SRM recursion vs kernel sum", max_err <= 1e-12, 1e-12 - max_err, 1e-12,
            fmt("max |du| = %.3e", max_err));
    }

    // Reset map fixed points: s = 0 keeps u, s = 1 lands on u_reset.
    {
        NeuronParams p;
        p.u_reset = -0.2;
        const double a = std::abs(reset(0.37, 0.0, p) - 0.37);
        const double b = std::abs(reset(p.u_firing, excite(p.u_firing, p), p) - p.u_reset);
        add(out, "neurons", "reset map fixed points", a == 0.0 && b <= 1e-15, -std::max(a, b), 1e-15);
    }
}

// ---- bounds ---------------------------------------------------------------

void suite_bounds(Lines& out, std::uint64_t seed) {
    const double pi = std::numbers::pi, e = std::numbers::e;
    auto near = [&](const char* name, double got, double want, double tol) {
        const double d = std::abs(got - want);
        add(out, "bounds", name, d <= tol, tol - d, tol, fmt("got %.9f want %.9f", got, want));
    };
    // Exact references computed from the closed forms.
    const double ln2 = std::numbers::ln2;
    const double rc_ref = 128.0 * ln2 / (3.0 * pi) - 32.0 * std::sqrt(2.0 * ln2 / (3.0 * pi));
    near("rademacher_upper(1,1,1,1)", rademacher_upper(1, 1, 1, 1).value, rc_ref, 1e-12);
    near("compute_nf(e,0,2,1)", compute_nf(e, 0, 2, 1).value, e * e, 1e-12);
    near("covering_bound I (1,1,1,1)", covering_bound(1, 1, 1, 1, CoverClass::monotone), std::log(16.0 / (6 * pi)),
         1e-12);
    {
        BoundInputs bi;
        bi.L_hbar = 1;
        bi.M_hbar = 1;
        bi.delta = 0.1;
        bi.n = 100;
        near("generalization_upper example", generalization_upper(0.1, 0.05, bi),
             0.2 + 3.0 * std::sqrt(std::log(20.0) / 200.0), 1e-12);
    }
    {
        const auto r = compute_nf(1.0, 0.5, 5, 1.0);
        near("compute_nf limit branch at A=1", r.value, 1.0 + 5 * 0.5, 1e-12);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double g = 0.01 + 5 * u01(rng), T = 1 + 100 * u01(rng), nf = 0.01 + 10 * u01(rng);
        const std::size_t w = 1 + static_cast<std::size_t>(16 * u01(rng));
        const double lhs = covering_bound(g, T, nf, w, CoverClass::bounded_variation);
        const double rhs = 2.0 * covering_bound(g / 2.0, T, nf, w, CoverClass::monotone);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    add(out, "bounds", "cover_log_B(g) = 2 cover_log_I(g/2)", worst <= 1e-12, 1e-12 - worst, 1e-12,
        "1000 draws, relative");

    bool all_binom = true;
    unsigned first_fail = 0;
    for (unsigned N = 1; N <= 200; ++N)
        if (!binomial_bound_check(N).passed()) {
            all_binom = false;
            first_fail = N;
            break;
        }
    add(out, "bounds", "central binomial bounds, N in [1,200]", all_binom, all_binom ? 0.0 : -1.0, 0.0,
        all_binom ? "exact integers" : fmt("first failure at N=%.0f", first_fail));

    double worst_forms = 0.0;
    for (double a : {0.3, 0.9, 1.1, 2.0, 7.5})
        for (std::size_t L : {1u, 2u, 4u, 8u}) {
            const auto nf = compute_nf(a, 1.0, L, 0.0).value;
            worst_forms = std::max(worst_forms, std::abs(nf - nf_b_term_alt_form(a, 1.0, L)) / std::max(1.0, nf));
        }
    add(out, "bounds", "two closed forms of the N_f geometric factor", worst_forms <= 1e-12, 1e-12 - worst_forms,
        1e-12, fmt("max rel discrepancy %.3e", worst_forms));
}

// ---- gronwall ---------------------------------------------------------------

void suite_gronwall(Lines& out, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<int> len(2, 40);

    std::size_t viol = 0, premise_fail = 0;
    double worst = INFINITY;
    for (int i = 0; i < 1000; ++i) {
        const int n = len(rng);
        std::vector<double> a(n), b(n), u(n);
        for (int k = 0; k < n; ++k) {
            a[k] = 0.05 + 2.0 * u01(rng);
            b[k] = 0.01 + 0.5 * u01(rng);
            double rhs = a[k];
            for (int l = 0; l < k; ++l) rhs += b[l] * u[l];
            u[k] = rhs * (0.05 + 0.95 * u01(rng));
        }
        const auto v = check_gronwall_discrete(u, a, b);
        if (!v.premise_holds) ++premise_fail;
        if (!v.implication_holds()) ++viol;
        worst = std::min(worst, v.worst_margin);
    }
    add(out, "gronwall", "discrete, 1000 instances", viol == 0 && premise_fail == 0, worst, 1e-12,
        fmt("violations %.0f, premise misses %.0f", static_cast<double>(viol), static_cast<double>(premise_fail)));

    viol = premise_fail = 0;
    worst = INFINITY;
    for (int i = 0; i < 1000; ++i) {
        const int n = len(rng) + 1;
        const double dt = 0.05 + 0.2 * u01(rng);
        std::vector<double> al(n), be(n), u(n);
        double acc = 0.1 * u01(rng);
        for (int k = 0; k < n; ++k) {
            acc += 0.2 * u01(rng);
            al[k] = acc;
            be[k] = (0.05 / dt) * u01(rng); // beta dt <= 0.05
        }
        double integral = 0.0;
        for (int k = 0; k < n; ++k) {
            double rhs = al[k] + integral;
            double denom = 1.0;
            if (k > 0) {
                rhs += 0.5 * dt * be[k - 1] * u[k - 1];
                denom -= 0.5 * dt * be[k];
            }
            // Trapezoid slack: the discrete extremal overshoots the exponential by O(dt^3) per step.
            u[k] = (rhs / denom) * (0.5 + 0.495 * u01(rng));
            if (k > 0) integral += 0.5 * dt * (be[k - 1] * u[k - 1] + be[k] * u[k]);
        }
        const auto v = check_gronwall_continuous(Trace(0.0, dt, u), Trace(0.0, dt, al), Trace(0.0, dt, be));
        if (!v.premise_holds) ++premise_fail;
        if (!v.implication_holds()) ++viol;
        worst = std::min(worst, v.worst_margin);
    }
    add(out, "gronwall", "continuous, 1000 instances", viol == 0 && premise_fail == 0, worst, 1e-9,
        fmt("violations %.0f, premise misses %.0f", static_cast<double>(viol), static_cast<double>(premise_fail)));

    viol = 0;
    worst = INFINITY;
    for (int i = 0; i < 1000; ++i) {
        const int n = len(rng);
        std::vector<double> a(n), b(n);
        for (int k = 0; k < n; ++k) {
            a[k] = 0.1 + 1.5 * u01(rng);
            b[k] = 0.01 + u01(rng);
        }
        const auto v = check_gronwall_product(0.01 + u01(rng), a, b);
        if (!v.implication_holds()) ++viol;
        worst = std::min(worst, v.worst_margin);
    }
    add(out, "gronwall", "product form, 1000 instances", viol == 0, worst, 1e-12,
        fmt("violations %.0f", static_cast<double>(viol)));
}

// ---- bv and norm ceiling ---------------------------------------------------------

void suite_bv(Lines& out, std::uint64_t seed) {
    for (Expression e : {Expression::DEF, Expression::SRM}) {
        std::size_t fails = 0, traces = 0;
        double worst = 0.0;
        for (std::size_t i = 0; i < 10; ++i) {
            const double T = 100;
            const auto pc = scaled_pulse_counts(T);
            const auto ds = generate_xor(T, 1.0, pc.inputs, pc.gocues, derive_seed(seed, {1, i}));
            NetworkConfig cfg;
            cfg.expression = e;
            cfg.widths = NetworkConfig::layered_widths(2, 2 + i % 3, 1 + i % 3, 1);
            cfg.T = T;
            if (e == Expression::SRM) cfg.kernels = SrmKernels::defaults_for(cfg.params);
            TrainConfig tc;
            tc.epochs = 5;
            tc.seed = i;
            const auto split_at = split(ds).first;
            auto [net, rep] = train(Network::random(cfg, derive_seed(seed, {2, i})), ds.input_trace,
                                    slice(ds.target, split_at), tc);
            const auto v = bv_check(forward(net, ds.input_trace), cfg.params, T);
            if (!v.passed) ++fails;
            traces += v.traces_checked;
            worst = std::max(worst, v.worst_ratio);
        }
        add(out, "bv", std::string("TV <= M_u T, 10 trained ") + to_string(e) + " nets", fails == 0, 1.0 - worst,
            1e-6, fmt("worst TV/budget %.3e over %.0f traces", worst, static_cast<double>(traces)));
    }

    std::mt19937_64 rng(seed ^ 0x5bd1e995);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::size_t fails = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < 20; ++i) {
        NetworkConfig cfg;
        cfg.expression = static_cast<Expression>(i % 5);
        cfg.widths = NetworkConfig::layered_widths(2, 1 + i % 4, 1 + i % 3, 2);
        cfg.T = 30;
        if (cfg.expression == Expression::SRM) cfg.kernels = SrmKernels::defaults_for(cfg.params);
        const Network net = Network::random(cfg, derive_seed(seed, {3, i}));
        MultiTrace x;
        for (int c = 0; c < 2; ++c) {
            std::vector<double> v(cfg.grid_length());
            for (auto& s : v) s = unit(rng);
            x.channels.emplace_back(0.0, cfg.dt, std::move(v));
        }
        const auto rec = forward(net, x);
        double sup = 0.0;
        for (std::size_t k = 0; k < cfg.grid_length(); ++k) {
            double sq = 0.0;
            for (const auto& o : rec.outputs) sq += o[k] * o[k];
            sup = std::max(sup, std::sqrt(sq));
        }
        BoundInputs bi;
        bi.T = cfg.T;
        bi.L = cfg.depth();
        bi.N_w = cfg.widths[1];
        bi.M_w = cfg.weight_norm_cap;
        bi.M_x = input_sup_norm(x);
        bi.params = cfg.params;
        bi.expression = cfg.expression;
        const double nf = variant_nf(bi).value;
        if (!(sup <= nf)) ++fails;
        worst = std::max(worst, sup / nf);
    }
    add(out, "bv", "sup ||f|| <= N_f, 20 random nets", fails == 0, 1.0 - worst, 0.0,
        fmt("worst sup/N_f %.3e", worst));
}

// ---- rademacher -------------------------------------------------------------

void suite_rademacher(Lines& out, std::uint64_t seed) {
    NetworkConfig cfg;
    cfg.expression = Expression::DEF;
    cfg.widths = {1, 1};
    cfg.T = 20;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<MultiTrace> xs(8);
    std::vector<std::vector<double>> flat;
    for (auto& x : xs) {
        std::vector<double> v(cfg.grid_length());
        for (auto& s : v) s = unit(rng);
        x.channels.emplace_back(0.0, cfg.dt, std::move(v));
        flat.push_back(flatten_input(x));
    }
    RademacherOptions opt;
    const std::uint64_t est_seed = derive_seed(seed, 99);
    const std::size_t K = 32;
    const auto est = estimate_rademacher(xs, cfg, K, opt, est_seed);

    // Exhaustive oracle on 201 scalar weights with the same sign draws.
    double grid_mean = 0.0;
    for (std::size_t d = 0; d < K; ++d) {
        std::mt19937_64 srng(derive_seed(est_seed, d));
        std::vector<double> sigma(xs.size());
        for (auto& s : sigma) s = (srng() >> 63) ? 1.0 : -1.0;
        double best = -INFINITY;
        for (int g = 0; g <= 200; ++g) {
            std::vector<Matrix> w{Matrix(1, 1, -1.0 + 0.01 * g)};
            best = std::max(best, correlation(cfg, w, flat, sigma, nullptr));
        }
        grid_mean += best / static_cast<double>(K);
    }
    const double rel = std::abs(est.mean - grid_mean) / std::abs(grid_mean);
    add(out, "rademacher", "ascent vs 201-point grid (N_w=1, L=1)", rel <= 0.05, 0.05 - rel, 0.05,
        fmt("estimate %.6f grid %.6f", est.mean, grid_mean));

    BoundInputs bi;
    bi.T = cfg.T;
    bi.L = 1;
    bi.N_w = 1;
    bi.M_x = 1.0;
    bi.n = xs.size();
    const double nf = variant_nf(bi).value;
    add(out, "rademacher", "estimate <= N_f", est.mean <= nf, nf - est.mean, 0.0);
    const auto up = rademacher_upper(cfg.T, nf, 1, xs.size());
    if (!up.vacuous) {
        const double lim = up.value + 2 * est.standard_error;
        add(out, "rademacher", "estimate <= rademacher_upper + 2 se", est.mean <= lim, lim - est.mean, 0.0);
    }
    add(out, "rademacher", "estimate >= 0 (zero function in class)", est.mean >= 0.0, est.mean, 0.0);
}

} // namespace

VerifyReport run_verify(std::string_view suite, std::uint64_t seed) {
    VerifyReport r;
    const bool all = suite == "all";
    bool known = all;
    if (all || suite == "neurons") { suite_neurons(r.checks, derive_seed(seed, 1)); known = true; }
    if (all || suite == "bounds") { suite_bounds(r.checks, derive_seed(seed, 2)); known = true; }
    if (all || suite == "gronwall") { suite_gronwall(r.checks, derive_seed(seed, 3)); known = true; }
    if (all || suite == "bv") { suite_bv(r.checks, derive_seed(seed, 4)); known = true; }
    if (all || suite == "rademacher") { suite_rademacher(r.checks, derive_seed(seed, 5)); known = true; }
    if (!known) throw InvalidArgument("unknown suite '" + std::string(suite) + "'");
    return r;
}

} // namespace snngb
