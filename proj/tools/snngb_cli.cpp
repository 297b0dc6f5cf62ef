// Command-line front end; talks to the library only through snngb.h.
#include "snngb/snngb.h"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

namespace {

int report(snngb_status s) {
    if (s != SNNGB_OK) std::cerr << "error (" << snngb_status_name(s) << "): " << snngb_last_error() << '\n';
    return s == SNNGB_OK ? 0 : static_cast<int>(s);
}

bool env_seed(uint64_t& out) {
    const char* v = std::getenv("SNNGB_SEED");
    if (!v || !*v) return false;
    char* end = nullptr;
    const unsigned long long s = std::strtoull(v, &end, 10);
    if (*end != '\0') {
        std::cerr << "warning: ignoring non-numeric SNNGB_SEED\n";
        return false;
    }
    out = s;
    return true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spiking-network generalization bounds: sweeps, bound evaluation and verification"};
    app.require_subcommand(1);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run a seeded (T, N_w, L, trial) grid and write a runs CSV");
    std::string config_path, out_dir;
    bool paper_scale = false;
    size_t jobs = 0;
    sweep->add_option("config", config_path, "key=value config file (defaults when omitted)");
    sweep->add_flag("--paper-scale", paper_scale, "T=500:500:3000, N_w=2:2:8, log2L=1:1:4, 10 trials");
    sweep->add_option("--jobs,-j", jobs, "worker threads (0 keeps the config value)");
    sweep->add_option("--out,-o", out_dir, "output directory (overrides the config)");

    // verify
    auto* verify = app.add_subcommand("verify", "Run invariant suites; exit nonzero on any violation");
    std::string suite = "all";
    uint64_t verify_seed = 7;
    verify->add_option("suite", suite, "neurons | bounds | gronwall | bv | rademacher | all")
        ->check(CLI::IsMember({"neurons", "bounds", "gronwall", "bv", "rademacher", "all"}));
    verify->add_option("--seed", verify_seed, "seed of the random instances");

    // plot
    auto* plot = app.add_subcommand("plot", "Render mean epsilon +- one std of a runs CSV as SVG");
    std::string csv_path, axis, svg_path;
    plot->add_option("csv", csv_path, "runs CSV written by sweep")->required();
    plot->add_option("--axis", axis, "L | Nw | T")->required()->check(CLI::IsMember({"L", "Nw", "T"}));
    plot->add_option("--output,-o", svg_path, "SVG path (default: <csv>.<axis>.svg)");

    // bound
    auto* bound = app.add_subcommand("bound", "Print the BoundReport of one configuration");
    snngb_bound_inputs bi;
    snngb_default_bound_inputs(&bi);
    std::string expr_name = "DEF";
    bound->add_option("--T", bi.T, "horizon")->capture_default_str();
    bound->add_option("--L", bi.L, "depth")->capture_default_str();
    bound->add_option("--Nw", bi.N_w, "width")->capture_default_str();
    bound->add_option("--Mw", bi.M_w, "weight norm cap")->capture_default_str();
    bound->add_option("--Mx", bi.M_x, "input sup-norm")->capture_default_str();
    bound->add_option("--n", bi.n, "sample count")->capture_default_str();
    bound->add_option("--delta", bi.delta, "confidence")->capture_default_str();
    bound->add_option("--tau-m", bi.params.tau_m)->capture_default_str();
    bound->add_option("--tau-r", bi.params.tau_r)->capture_default_str();
    bound->add_option("--u-rest", bi.params.u_rest)->capture_default_str();
    bound->add_option("--u-firing", bi.params.u_firing)->capture_default_str();
    bound->add_option("--u-reset", bi.params.u_reset)->capture_default_str();
    bound->add_option("--u-init", bi.params.u_init)->capture_default_str();
    bound->add_option("--gamma", bi.gamma_probe, "covering radius probe")->capture_default_str();
    bound->add_option("--emp", bi.emp_error, "empirical error")->capture_default_str();
    auto* lh = bound->add_option("--L-hbar", bi.L_hbar, "loss Lipschitz constant (default 4 N_f)");
    auto* mh = bound->add_option("--M-hbar", bi.M_hbar, "loss ceiling (default 4 N_f^2)");
    bound->add_option("--expression", expr_name, "DEF | SRM | EID | DTA | GsF")
        ->check(CLI::IsMember({"DEF", "SRM", "EID", "DTA", "GsF"}, CLI::ignore_case));

    // dataset
    auto* dataset = app.add_subcommand("dataset", "Export one delayed-memory XOR dataset");
    double ds_T = 500, ds_dt = 1;
    uint64_t ds_seed = 1;
    size_t n_in = 0, n_go = 0;
    std::string events_path = "xor_events.txt", trace_path = "xor_trace.csv";
    dataset->add_option("--T", ds_T)->capture_default_str();
    dataset->add_option("--dt", ds_dt)->capture_default_str();
    dataset->add_option("--seed", ds_seed)->capture_default_str();
    dataset->add_option("--inputs", n_in, "input pulses (0: scaled default)");
    dataset->add_option("--gocues", n_go, "go-cue pulses (0: scaled default)");
    dataset->add_option("--events", events_path)->capture_default_str();
    dataset->add_option("--trace", trace_path)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (*sweep) {
        uint64_t seed = 0;
        const bool override_seed = env_seed(seed);
        snngb_text path{};
        const auto s = snngb_sweep_run(config_path.empty() ? nullptr : config_path.c_str(), paper_scale,
                                       override_seed, seed, jobs, out_dir.empty() ? nullptr : out_dir.c_str(), &path);
        if (s == SNNGB_OK) std::cout << path.data << '\n';
        snngb_text_free(&path);
        return report(s);
    }
    if (*verify) {
        uint64_t seed = verify_seed;
        env_seed(seed);
        snngb_text text{};
        const auto s = snngb_verify_run(suite.c_str(), seed, &text);
        if (text.data) std::cout << text.data;
        snngb_text_free(&text);
        return report(s);
    }
    if (*plot) {
        if (svg_path.empty()) svg_path = csv_path + "." + axis + ".svg";
        const auto s = snngb_plot(csv_path.c_str(), axis.c_str(), svg_path.c_str());
        if (s == SNNGB_OK) std::cout << svg_path << '\n';
        return report(s);
    }
    if (*bound) {
        static const std::map<std::string, snngb_expression> tags{
            {"DEF", SNNGB_DEF}, {"SRM", SNNGB_SRM}, {"EID", SNNGB_EID}, {"DTA", SNNGB_DTA}, {"GSF", SNNGB_GSF}};
        std::string up = expr_name;
        for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        bi.expression = tags.at(up);
        bi.derive_loss_constants = (lh->count() == 0 && mh->count() == 0) ? 1 : 0;
        snngb_bound_report r;
        auto s = snngb_bound_compute(&bi, &r);
        if (s != SNNGB_OK) return report(s);
        snngb_text text{};
        s = snngb_bound_format(&r, &text);
        if (s == SNNGB_OK) std::cout << text.data;
        snngb_text_free(&text);
        return report(s);
    }
    if (*dataset) {
        uint64_t seed = ds_seed;
        env_seed(seed);
        snngb_dataset* ds = nullptr;
        auto s = snngb_xor_generate(ds_T, ds_dt, n_in, n_go, seed, &ds);
        if (s != SNNGB_OK) return report(s);
        s = snngb_dataset_write(ds, events_path.c_str(), trace_path.c_str());
        snngb_dataset_free(ds);
        if (s == SNNGB_OK) std::cout << events_path << '\n' << trace_path << '\n';
        return report(s);
    }
    return 0;
}
