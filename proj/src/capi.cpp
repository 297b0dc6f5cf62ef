#include "snngb/snngb.h"

#include "snngb/bounds.hpp"
#include "snngb/error.hpp"
#include "snngb/harness.hpp"
#include "snngb/network.hpp"
#include "snngb/xor_task.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <string>

struct snngb_network {
    snngb::Network net;
};

struct snngb_dataset {
    snngb::XorDataset ds;
};

namespace {

thread_local std::string last_error;

snngb_status to_status(snngb::ErrorCode c) {
    switch (c) {
    case snngb::ErrorCode::invalid_argument: return SNNGB_INVALID_ARGUMENT;
    case snngb::ErrorCode::dimension_mismatch: return SNNGB_DIMENSION_MISMATCH;
    case snngb::ErrorCode::numerical: return SNNGB_NUMERICAL;
    case snngb::ErrorCode::io: return SNNGB_IO;
    case snngb::ErrorCode::parse: return SNNGB_PARSE;
    }
    return SNNGB_INTERNAL;
}

template <class F>
snngb_status guarded(F&& f) {
    try {
        last_error.clear();
        return f();
    } catch (const snngb::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return SNNGB_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return SNNGB_INTERNAL;
    } catch (...) {
        last_error = "unknown exception";
        return SNNGB_INTERNAL;
    }
}

snngb_status fail(snngb_status s, const char* what) {
    last_error = what;
    return s;
}

snngb::NeuronParams from_c(const snngb_neuron_params& p) {
    snngb::NeuronParams q;
    q.tau_m = p.tau_m;
    q.tau_r = p.tau_r;
    q.u_rest = p.u_rest;
    q.u_firing = p.u_firing;
    q.u_reset = p.u_reset;
    q.u_init = p.u_init;
    return q;
}

snngb::Expression from_c(snngb_expression e) {
    switch (e) {
    case SNNGB_DEF: return snngb::Expression::DEF;
    case SNNGB_SRM: return snngb::Expression::SRM;
    case SNNGB_EID: return snngb::Expression::EID;
    case SNNGB_DTA: return snngb::Expression::DTA;
    case SNNGB_GSF: return snngb::Expression::GsF;
    }
    throw snngb::InvalidArgument("unknown expression tag");
}

void set_text(snngb_text* out, const std::string& s) {
    out->data = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out->data) throw std::bad_alloc();
    std::memcpy(out->data, s.c_str(), s.size() + 1);
    out->size = s.size();
}

} // namespace

extern "C" {

const char* snngb_version(void) { return "1.0.0"; }

const char* snngb_last_error(void) { return last_error.c_str(); }

const char* snngb_status_name(snngb_status s) {
    switch (s) {
    case SNNGB_OK: return "ok";
    case SNNGB_INVALID_ARGUMENT: return "invalid_argument";
    case SNNGB_DIMENSION_MISMATCH: return "dimension_mismatch";
    case SNNGB_NUMERICAL: return "numerical";
    case SNNGB_IO: return "io";
    case SNNGB_PARSE: return "parse";
    case SNNGB_CHECK_FAILED: return "check_failed";
    case SNNGB_INTERNAL: return "internal";
    }
    return "unknown";
}

void snngb_text_free(snngb_text* t) {
    if (!t) return;
    std::free(t->data);
    t->data = nullptr;
    t->size = 0;
}

void snngb_default_params(snngb_neuron_params* out) {
    if (!out) return;
    const snngb::NeuronParams p;
    *out = {p.tau_m, p.tau_r, p.u_rest, p.u_firing, p.u_reset, p.u_init};
}

void snngb_default_bound_inputs(snngb_bound_inputs* out) {
    if (!out) return;
    std::memset(out, 0, sizeof *out);
    const snngb::BoundInputs b;
    out->T = b.T;
    out->L = b.L;
    out->N_w = b.N_w;
    out->M_w = b.M_w;
    out->M_x = b.M_x;
    out->n = b.n;
    out->delta = b.delta;
    snngb_default_params(&out->params);
    out->L_hbar = b.L_hbar;
    out->M_hbar = b.M_hbar;
    out->expression = SNNGB_DEF;
    out->derive_loss_constants = 1;
    out->gamma_probe = 0.5;
    out->emp_error = 0.0;
}

void snngb_default_train_options(snngb_train_options* out) {
    if (!out) return;
    const snngb::TrainConfig t;
    *out = {t.epochs, t.learning_rate, t.window, t.seed, 0};
}

snngb_status snngb_network_create(snngb_expression expr, const size_t* widths, size_t depth, double dt, double T,
                                  const snngb_neuron_params* params, double M_w, uint64_t seed,
                                  snngb_network** out) {
    if (!widths || !out) return fail(SNNGB_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        snngb::NetworkConfig cfg;
        cfg.expression = from_c(expr);
        cfg.widths.assign(widths, widths + depth + 1);
        cfg.dt = dt;
        cfg.T = T;
        if (params) cfg.params = from_c(*params);
        if (cfg.expression == snngb::Expression::SRM) cfg.kernels = snngb::SrmKernels::defaults_for(cfg.params);
        cfg.weight_norm_cap = M_w;
        *out = new snngb_network{snngb::Network::random(cfg, seed)};
        return SNNGB_OK;
    });
}

snngb_status snngb_network_load(const char* path, snngb_network** out) {
    if (!path || !out) return fail(SNNGB_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        *out = new snngb_network{snngb::load_network(path)};
        return SNNGB_OK;
    });
}

snngb_status snngb_network_save(const snngb_network* net, const char* path) {
    if (!net || !path) return fail(SNNGB_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        snngb::save_network(path, net->net);
        return SNNGB_OK;
    });
}

void snngb_network_free(snngb_network* net) { delete net; }

snngb_status snngb_network_grid_length(const snngb_network* net, size_t* out) {
    if (!net || !out) return fail(SNNGB_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        *out = net->net.config().grid_length();
        return SNNGB_OK;
    });
}

snngb_status snngb_network_forward(const snngb_network* net, const double* input, size_t input_len, double* output,
                                   size_t output_len) {
    if (!net || !input || !output) return fail(SNNGB_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        const auto& cfg = net->net.config();
        const std::size_t G = cfg.grid_length();
        if (input_len != G * cfg.input_width()) throw snngb::DimensionMismatch("input length != input_width * grid");
        if (output_len != G * cfg.output_width())
            throw snngb::DimensionMismatch("output length != output_width * grid");
        snngb::MultiTrace x;
        for (std::size_t c = 0; c < cfg.input_width(); ++c)
            x.channels.emplace_back(0.0, cfg.dt, std::vector<double>(input + c * G, input + (c + 1) * G));
        const auto rec = snngb::forward(net->net, x);
        for (std::size_t c = 0; c < cfg.output_width(); ++c)
            for (std::size_t k = 0; k < G; ++k) output[c * G + k] = rec.outputs[c][k];
        return SNNGB_OK;
    });
}

snngb_status snngb_network_train_xor(const snngb_network* net, const snngb_dataset* ds,
                                     const snngb_train_options* opt, snngb_network** out,
                                     double* final_train_error) {
    if (!net || !ds || !out) return fail(SNNGB_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        snngb::TrainConfig tc;
        if (opt) {
            tc.epochs = opt->epochs;
            tc.learning_rate = opt->learning_rate;
            tc.window = opt->window;
            tc.seed = opt->seed;
            tc.gradient_mode =
                opt->finite_difference ? snngb::GradientMode::finite_difference : snngb::GradientMode::adjoint;
        }
        const auto range = snngb::split(ds->ds).first;
        auto [trained, report] = snngb::train(net->net, ds->ds.input_trace, snngb::slice(ds->ds.target, range), tc);
        *out = new snngb_network{std::move(trained)};
        if (final_train_error) *final_train_error = report.final_train_error;
        return SNNGB_OK;
    });
}

snngb_status snngb_xor_generate(double T, double dt, size_t n_in, size_t n_go, uint64_t seed, snngb_dataset** out) {
    if (!out) return fail(SNNGB_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        if (n_in == 0 && n_go == 0) {
            const auto pc = snngb::scaled_pulse_counts(T);
            n_in = pc.inputs;
            n_go = pc.gocues;
        }
        *out = new snngb_dataset{snngb::generate_xor(T, dt, n_in, n_go, seed)};
        return SNNGB_OK;
    });
}

snngb_status snngb_dataset_write(const snngb_dataset* ds, const char* events_path, const char* csv_path) {
    if (!ds) return fail(SNNGB_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        if (events_path) {
            std::ofstream o(events_path, std::ios::binary);
            if (!o) throw snngb::IoError(std::string("cannot write '") + events_path + "'");
            snngb::write_events(o, ds->ds);
        }
        if (csv_path) {
            std::ofstream o(csv_path, std::ios::binary);
            if (!o) throw snngb::IoError(std::string("cannot write '") + csv_path + "'");
            snngb::write_trace_csv(o, ds->ds);
        }
        return SNNGB_OK;
    });
}

void snngb_dataset_free(snngb_dataset* ds) { delete ds; }

snngb_status snngb_bound_compute(const snngb_bound_inputs* in, snngb_bound_report* out) {
    if (!in || !out) return fail(SNNGB_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        snngb::BoundInputs b;
        b.T = in->T;
        b.L = in->L;
        b.N_w = in->N_w;
        b.M_w = in->M_w;
        b.M_x = in->M_x;
        b.n = in->n;
        b.delta = in->delta;
        b.params = from_c(in->params);
        b.L_hbar = in->L_hbar;
        b.M_hbar = in->M_hbar;
        b.expression = from_c(in->expression);
        if (in->derive_loss_constants) {
            const auto lc = snngb::lsq_loss_constants(snngb::variant_nf(b).value);
            b.L_hbar = lc.lipschitz;
            b.M_hbar = lc.ceiling;
        }
        const auto r = snngb::assemble_report(b, in->gamma_probe, in->emp_error);
        *out = {r.a_tilde, r.b_tilde, r.n_f, r.rc_upper, r.cover_log_I, r.cover_log_B, r.gen_upper, r.alpha,
                r.gamma_probe, r.effective_depth, r.limit_branch, r.overflow, r.vacuous};
        return SNNGB_OK;
    });
}

snngb_status snngb_bound_format(const snngb_bound_report* r, snngb_text* out) {
    if (!r || !out) return fail(SNNGB_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        snngb::BoundReport b;
        b.a_tilde = r->a_tilde;
        b.b_tilde = r->b_tilde;
        b.n_f = r->n_f;
        b.rc_upper = r->rc_upper;
        b.cover_log_I = r->cover_log_I;
        b.cover_log_B = r->cover_log_B;
        b.gen_upper = r->gen_upper;
        b.alpha = r->alpha;
        b.gamma_probe = r->gamma_probe;
        b.effective_depth = r->effective_depth;
        b.limit_branch = r->limit_branch != 0;
        b.overflow = r->overflow != 0;
        b.vacuous = r->vacuous != 0;
        set_text(out, snngb::format_report(b));
        return SNNGB_OK;
    });
}

snngb_status snngb_sweep_run(const char* config_path, int paper_scale, int has_seed_override,
                             uint64_t seed_override, size_t jobs, const char* output_dir, snngb_text* csv_path_out) {
    return guarded([&] {
        snngb::SweepConfig cfg = config_path ? snngb::load_sweep_config(config_path) : snngb::SweepConfig{};
        if (paper_scale) cfg.apply_paper_scale();
        if (has_seed_override) cfg.seed = seed_override;
        if (jobs > 0) cfg.jobs = jobs;
        if (output_dir) cfg.output_dir = output_dir;
        const std::string path = snngb::run_sweep(cfg);
        if (csv_path_out) set_text(csv_path_out, path);
        return SNNGB_OK;
    });
}

snngb_status snngb_verify_run(const char* suite, uint64_t seed, snngb_text* report_out) {
    if (!suite) return fail(SNNGB_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        const auto rep = snngb::run_verify(suite, seed);
        if (report_out) set_text(report_out, rep.text());
        if (!rep.passed()) {
            last_error = "verification checks failed";
            return SNNGB_CHECK_FAILED;
        }
        return SNNGB_OK;
    });
}

snngb_status snngb_plot(const char* csv_path, const char* axis, const char* svg_path) {
    if (!csv_path || !axis || !svg_path) return fail(SNNGB_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        snngb::plot_csv(csv_path, snngb::parse_plot_axis(axis), svg_path);
        return SNNGB_OK;
    });
}

} // extern "C"
