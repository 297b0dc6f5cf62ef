/* C interface of the snngb library. Every function returns an snngb_status;
 * on failure snngb_last_error() describes the problem (thread-local). */
#ifndef SNNGB_H
#define SNNGB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef SNNGB_BUILDING_LIBRARY
#    define SNNGB_API __declspec(dllexport)
#  else
#    define SNNGB_API __declspec(dllimport)
#  endif
#else
#  define SNNGB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum snngb_status {
    SNNGB_OK = 0,
    SNNGB_INVALID_ARGUMENT = 1,
    SNNGB_DIMENSION_MISMATCH = 2,
    SNNGB_NUMERICAL = 3,
    SNNGB_IO = 4,
    SNNGB_PARSE = 5,
    SNNGB_CHECK_FAILED = 6, /* a verification suite reported violations */
    SNNGB_INTERNAL = 99
} snngb_status;

typedef enum snngb_expression {
    SNNGB_DEF = 0,
    SNNGB_SRM = 1,
    SNNGB_EID = 2,
    SNNGB_DTA = 3,
    SNNGB_GSF = 4
} snngb_expression;

typedef struct snngb_network snngb_network;
typedef struct snngb_dataset snngb_dataset;

/* Library-owned string; release with snngb_text_free. */
typedef struct snngb_text {
    char* data;
    size_t size;
} snngb_text;

typedef struct snngb_neuron_params {
    double tau_m, tau_r, u_rest, u_firing, u_reset, u_init;
} snngb_neuron_params;

typedef struct snngb_bound_inputs {
    double T;
    size_t L;
    size_t N_w;
    double M_w;
    double M_x;
    size_t n;
    double delta;
    snngb_neuron_params params;
    double L_hbar; /* ignored when derive_loss_constants != 0 */
    double M_hbar;
    snngb_expression expression;
    int derive_loss_constants; /* least-squares constants from N_f */
    double gamma_probe;
    double emp_error;
} snngb_bound_inputs;

typedef struct snngb_bound_report {
    double a_tilde, b_tilde, n_f, rc_upper, cover_log_I, cover_log_B, gen_upper, alpha, gamma_probe;
    size_t effective_depth;
    int limit_branch, overflow, vacuous;
} snngb_bound_report;

typedef struct snngb_train_options {
    size_t epochs;
    double learning_rate;
    size_t window;
    uint64_t seed;
    int finite_difference;
} snngb_train_options;

SNNGB_API const char* snngb_version(void);
SNNGB_API const char* snngb_last_error(void);
SNNGB_API const char* snngb_status_name(snngb_status s);
SNNGB_API void snngb_text_free(snngb_text* t);

SNNGB_API void snngb_default_params(snngb_neuron_params* out);
SNNGB_API void snngb_default_bound_inputs(snngb_bound_inputs* out);
SNNGB_API void snngb_default_train_options(snngb_train_options* out);

/* widths[0] is the input width, widths[depth] the output width. */
SNNGB_API snngb_status snngb_network_create(snngb_expression expr, const size_t* widths, size_t depth, double dt,
                                            double T, const snngb_neuron_params* params, double M_w, uint64_t seed,
                                            snngb_network** out);
SNNGB_API snngb_status snngb_network_load(const char* path, snngb_network** out);
SNNGB_API snngb_status snngb_network_save(const snngb_network* net, const char* path);
SNNGB_API void snngb_network_free(snngb_network* net);
SNNGB_API snngb_status snngb_network_grid_length(const snngb_network* net, size_t* out);

/* input: channel-major, input_width * grid_length samples.
 * output: output_width * grid_length samples, channel-major. */
SNNGB_API snngb_status snngb_network_forward(const snngb_network* net, const double* input, size_t input_len,
                                             double* output, size_t output_len);

/* Trains a copy on the XOR dataset's training split and returns it in *out. */
SNNGB_API snngb_status snngb_network_train_xor(const snngb_network* net, const snngb_dataset* ds,
                                               const snngb_train_options* opt, snngb_network** out,
                                               double* final_train_error);

/* n_in = n_go = 0 selects the scaled default counts. */
SNNGB_API snngb_status snngb_xor_generate(double T, double dt, size_t n_in, size_t n_go, uint64_t seed,
                                          snngb_dataset** out);
SNNGB_API snngb_status snngb_dataset_write(const snngb_dataset* ds, const char* events_path, const char* csv_path);
SNNGB_API void snngb_dataset_free(snngb_dataset* ds);

SNNGB_API snngb_status snngb_bound_compute(const snngb_bound_inputs* in, snngb_bound_report* out);
SNNGB_API snngb_status snngb_bound_format(const snngb_bound_report* r, snngb_text* out);

/* config_path may be NULL for defaults. seed_override applies when has_seed_override != 0.
 * jobs = 0 keeps the config value. */
SNNGB_API snngb_status snngb_sweep_run(const char* config_path, int paper_scale, int has_seed_override,
                                       uint64_t seed_override, size_t jobs, const char* output_dir,
                                       snngb_text* csv_path_out);

/* Returns SNNGB_CHECK_FAILED when any check fails; the report is filled either way. */
SNNGB_API snngb_status snngb_verify_run(const char* suite, uint64_t seed, snngb_text* report_out);

/* axis: "L", "Nw" or "T". */
SNNGB_API snngb_status snngb_plot(const char* csv_path, const char* axis, const char* svg_path);

#ifdef __cplusplus
}
#endif

#endif
