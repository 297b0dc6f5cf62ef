#pragma once

#include "snngb/learning.hpp"
#include "snngb/network.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace snngb {

struct SweepConfig {
    Expression expression = Expression::SRM;
    std::vector<double> T_values{100, 200, 300, 400, 500};
    std::vector<std::size_t> Nw_values{4};
    std::vector<std::size_t> L_values{2};
    std::size_t trials = 5;
    double dt = 1.0;
    TrainConfig train;
    NeuronParams params;
    double M_w = 1.0;
    double delta = 0.05;
    double gamma_probe = 0.5;
    std::uint64_t seed = 1;
    std::string output_dir = "runs";
    std::string output_name = "sweep.csv";
    bool record_wall_time = false; // off keeps the CSV byte-reproducible
    std::size_t jobs = 1;

    void validate() const;

    // T = 500:500:3000, N_w = 2:2:8, L = 2^(1:1:4), 10 trials.
    void apply_paper_scale();
};

// "a:b:c" (start:step:end, inclusive), "a,b,c" or a single value.
std::vector<double> parse_value_list(std::string_view text);

// Flat key=value file; '#' starts a comment. Unknown keys are rejected.
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig load_sweep_config(const std::string& path);

struct RunRecord {
    Expression expression = Expression::SRM;
    double T = 0.0;
    std::size_t N_w = 0;
    std::size_t L = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;      // network-init seed of the row
    std::uint64_t data_seed = 0; // dataset seed, shared across N_w and L
    double train_error = 0.0;
    double test_error = 0.0;
    double epsilon = 0.0;
    double n_f = 0.0;
    double rc_upper = 0.0;
    double gen_upper = 0.0;
    bool bv_pass = false;
    double wall_seconds = 0.0;
    std::string status = "ok"; // "ok" or the error code name of an aborted row
};

// Seeds of one grid row; pure functions of the master seed and coordinates.
std::uint64_t dataset_seed(std::uint64_t master, double T, std::size_t trial) noexcept;
std::uint64_t row_seed(std::uint64_t master, double T, std::size_t N_w, std::size_t L, std::size_t trial) noexcept;

RunRecord run_single(const SweepConfig& cfg, double T, std::size_t N_w, std::size_t L, std::size_t trial);

// Rows in grid order T, N_w, L, trial regardless of cfg.jobs.
std::vector<RunRecord> run_grid(const SweepConfig& cfg);

inline constexpr const char* csv_schema_line = "# snngb-runs v1";

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& rows, bool with_wall_time);
std::vector<RunRecord> read_runs_csv(std::istream& in);

// Runs the grid and writes output_dir/output_name through a temporary file
// and rename. Returns the final path.
std::string run_sweep(const SweepConfig& cfg);

struct CheckLine {
    std::string suite;
    std::string name;
    bool passed = false;
    double margin = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckLine> checks;

    bool passed() const noexcept;
    std::string text() const;
};

// suite is one of neurons, bounds, gronwall, bv, rademacher, all.
VerifyReport run_verify(std::string_view suite, std::uint64_t seed = 7);

enum class PlotAxis { L, Nw, T };

PlotAxis parse_plot_axis(std::string_view name);

struct PlotPoint {
    double x = 0.0;     // log2 L for the L axis
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation, 0 for one trial
    std::size_t count = 0;
};

struct PlotSeries {
    std::string label; // fixed co-variables, e.g. "T=500 Nw=4"
    std::vector<PlotPoint> points;
};

// Groups ok rows by the co-variables and averages epsilon over trials.
std::vector<PlotSeries> plot_series(const std::vector<RunRecord>& rows, PlotAxis axis);

std::string render_svg(const std::vector<PlotSeries>& series, PlotAxis axis);

// Reads a runs CSV and writes the SVG next to it or at svg_path.
void plot_csv(const std::string& csv_path, PlotAxis axis, const std::string& svg_path);

} // namespace snngb
