#pragma once

#include "snngb/neuron.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace snngb {

// The five membrane-potential expressions a network can be simulated with.
enum class Expression { DEF, SRM, EID, DTA, GsF };

const char* to_string(Expression e) noexcept;
Expression parse_expression(std::string_view name);

// Dense row-major matrix; rows index post-synaptic neurons.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) noexcept { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data[i * cols + j]; }

    // Entrywise 2-norm.
    double norm() const noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

struct NetworkConfig {
    Expression expression = Expression::DEF;
    std::vector<std::size_t> widths; // input width, hidden widths..., output width
    double dt = 1.0;
    double T = 100.0;
    NeuronParams params;
    std::optional<SrmKernels> kernels; // required for SRM
    double weight_norm_cap = 1.0;      // M_w

    std::size_t depth() const noexcept { return widths.empty() ? 0 : widths.size() - 1; }
    std::size_t input_width() const noexcept { return widths.front(); }
    std::size_t output_width() const noexcept { return widths.back(); }
    std::size_t steps() const;
    std::size_t grid_length() const { return steps() + 1; }

    void validate() const;

    // {input, hidden x (depth-1), output}.
    static std::vector<std::size_t> layered_widths(std::size_t input, std::size_t hidden,
                                                   std::size_t depth, std::size_t output);
};

class Network {
public:
    // Throws if shapes disagree with the config or a layer norm exceeds M_w.
    Network(NetworkConfig config, std::vector<Matrix> weights);

    static Network zeros(const NetworkConfig& config);

    // Entries uniform in [-1, 1], each layer rescaled to norm M_w / 2.
    static Network random(const NetworkConfig& config, std::uint64_t seed);

    const NetworkConfig& config() const noexcept { return config_; }
    const std::vector<Matrix>& weights() const noexcept { return weights_; }

    // Projects `weights` into the norm ball before building.
    Network with_weights(std::vector<Matrix> weights) const;

private:
    NetworkConfig config_;
    std::vector<Matrix> weights_;
};

// Rescales every matrix whose norm exceeds `cap` onto the sphere of radius cap.
std::vector<Matrix> project_weights(std::vector<Matrix> weights, double cap);
Network project_weights(const Network& net);

// f_agg = W s.
std::vector<double> aggregate(const Matrix& weights, std::span<const double> s_prev);

struct SimulationRecord {
    Trace output;                                 // s of the last layer, first output channel
    std::vector<Trace> outputs;                   // s of every output neuron
    std::vector<std::vector<Trace>> potentials;   // [layer][neuron], pre-reset u
    std::vector<std::vector<Trace>> spikes;       // [layer][neuron]
    std::vector<std::vector<Trace>> currents;     // [layer][neuron], f_agg
};

// Step-major states of one simulation, the form the gradient code consumes.
// Index k * width + i, layer l at position l - 1.
struct Tape {
    std::size_t length = 0;
    std::vector<std::vector<double>> u; // pre-reset potential
    std::vector<std::vector<double>> s; // spike value excite(u)
    std::vector<std::vector<double>> f; // aggregated input
    bool dta_unstable = false;
};

// Clips to [-1, 1] and flattens to step-major order.
std::vector<double> flatten_input(const MultiTrace& input);

// Largest ||x(t)||_2 over the grid after clipping.
double input_sup_norm(const MultiTrace& input);

// Simulates the first `length` grid points of a step-major input.
Tape simulate(const Network& net, std::span<const double> input, std::size_t length);

// Same, with weights that need not respect the norm cap (finite differences
// step outside the ball).
Tape simulate(const NetworkConfig& config, std::span<const Matrix> weights, std::span<const double> input,
              std::size_t length);

SimulationRecord forward(const Network& net, const MultiTrace& input);

// Versioned text format, see docs/formats.md.
void write_network(std::ostream& out, const Network& net);
Network read_network(std::istream& in);
void save_network(const std::string& path, const Network& net);
Network load_network(const std::string& path);

} // namespace snngb
