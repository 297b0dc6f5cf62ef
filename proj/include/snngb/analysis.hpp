#pragma once

#include "snngb/learning.hpp"
#include "snngb/network.hpp"
#include "snngb/neuron.hpp"
#include "snngb/seed.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace snngb {

// Derivative ceiling |du/dt| <= M_u t + C and the total-variation budget M_u T.
struct VariationBudget {
    double M_u = 0.0;
    double C = 0.0;
    double T = 0.0;
    double budget = 0.0;
};

// Sum of absolute increments over the grid.
double total_variation(const Trace& u);

// M_u = u_firing / tau_m + (tau_r / tau_m) M_agg, C = u_rest / tau_m.
VariationBudget variation_budget(const NeuronParams& params, double T, double M_agg);

// Largest |f_agg(t)| / max(t, dt) over the neurons of one layer.
double measured_m_agg(const std::vector<Trace>& layer_currents);

struct BvVerdict {
    bool passed = true;
    double worst_ratio = 0.0;    // max TV / allowance over all traces
    std::size_t traces_checked = 0;
    std::size_t violations = 0;
};

// Checks every potential trace against budget.budget and every spike trace
// against budget.budget / u_firing, with tolerance 1e-6 * budget.
BvVerdict bv_check(const SimulationRecord& record, const VariationBudget& budget, const NeuronParams& params);

// Per-layer budgets with M_agg measured from the record's own currents.
BvVerdict bv_check(const SimulationRecord& record, const NeuronParams& params, double T);

// max_k |u[k+1] - u[k]| / dt.
double lipschitz_estimate(const Trace& u);

// sqrt(mean over grid of (f - g)^2).
double l2_sample_distance(const Trace& f, const Trace& g);

// Greedy cover: the first uncovered point in input order becomes the next centre.
std::size_t greedy_cover(std::span<const Trace> points, double gamma);

struct RademacherEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t draws = 0;
    std::vector<double> per_draw_maxima;
};

struct RademacherOptions {
    std::size_t restarts = 5;
    // Projected ascent along the normalised gradient. learning_rate is the
    // first step length as a fraction of M_w; steps shrink linearly to 0.
    TrainConfig ascent{60, 0.5};
};

// Time-mean of output channel 0, the scalar f(X_i).
double scalarize(const Tape& tape, std::size_t output_width);

// Correlation (1/n) sum_i sigma_i f(w, X_i) and its gradient in w.
double correlation(const NetworkConfig& cfg, std::span<const Matrix> weights,
                   std::span<const std::vector<double>> inputs, std::span<const double> sigma,
                   std::vector<Matrix>* grad);

// Monte-Carlo estimate of the empirical Rademacher complexity of the M_w ball
// of networks with configuration `cfg`. Each sign draw maximises the
// correlation by projected gradient ascent; the result approximates the
// supremum from below.
RademacherEstimate estimate_rademacher(std::span<const MultiTrace> inputs, const NetworkConfig& cfg, std::size_t K,
                                       const RademacherOptions& opt, std::uint64_t seed);

} // namespace snngb
