#pragma once

#include "snngb/network.hpp"
#include "snngb/neuron.hpp"

#include <cstddef>
#include <span>
#include <string>

namespace snngb {

// Every symbol the closed-form bounds consume.
struct BoundInputs {
    double T = 1.0;
    std::size_t L = 1;
    std::size_t N_w = 1;
    double M_w = 1.0;
    double M_x = 1.0;
    std::size_t n = 1;
    double delta = 0.05;
    NeuronParams params;
    double L_hbar = 1.0;
    double M_hbar = 1.0;
    Expression expression = Expression::DEF;

    void validate() const;
};

struct ABTerms {
    double a_tilde = 0.0;
    double b_tilde = 0.0;
    double log_a_tilde = 0.0; // -inf when a_tilde == 0
    double log_b_tilde = 0.0; // -inf when b_tilde == 0
    bool overflow = false;    // a_tilde or b_tilde is +inf
};

struct NfValue {
    double value = 0.0;
    double log_value = 0.0;
    bool limit_branch = false; // a_tilde within 1e-9 of 1
    bool overflow = false;
};

enum class CoverClass { monotone, bounded_variation }; // I and B

enum class AlphaMode { sup_norm, l2_norm };

struct BoundReport {
    double a_tilde = 0.0;
    double b_tilde = 0.0;
    double n_f = 0.0;
    double rc_upper = 0.0;
    double cover_log_I = 0.0;
    double cover_log_B = 0.0;
    double gen_upper = 0.0;
    double alpha = 0.0;
    double gamma_probe = 0.0;
    std::size_t effective_depth = 0;
    bool limit_branch = false;
    bool overflow = false;
    bool vacuous = false; // rc_upper < 0
};

ABTerms compute_ab(const BoundInputs& inp);

NfValue compute_nf(double a_tilde, double b_tilde, std::size_t L, double M_x);

// Depth L for DEF/EID/GsF, max(L-1, 1) for SRM/DTA.
std::size_t variant_depth(Expression e, std::size_t L) noexcept;
NfValue variant_nf(const BoundInputs& inp);

// ((A^(L-1) - A^(-1)) / (A - 1)) B; algebraically equal to compute_nf's B term,
// kept as an independent cross-check.
double nf_b_term_alt_form(double a_tilde, double b_tilde, std::size_t L);

// Natural log of the covering-number bound for class I or B.
double covering_bound(double gamma, double T, double n_f, std::size_t N_w, CoverClass cls);

struct RademacherUpper {
    double value = 0.0;
    bool vacuous = false; // value < 0
};

RademacherUpper rademacher_upper(double T, double n_f, std::size_t N_w, std::size_t n);

// emp + 2 L_hbar max(rc, 0) + 3 M_hbar sqrt(ln(2/delta) / (2n)).
double generalization_upper(double emp_error, double rc, const BoundInputs& inp);

double alpha_bound(double n_f, double T, AlphaMode mode);

BoundReport assemble_report(const BoundInputs& inp, double gamma_probe, double emp_error = 0.0,
                            AlphaMode alpha_mode = AlphaMode::sup_norm);

// Flat key=value block, one entry per line.
std::string format_report(const BoundReport& r);

// Premise/conclusion outcome of an inequality check on one instance.
struct Verdict {
    bool premise_holds = false;
    bool conclusion_holds = false;
    double worst_margin = 0.0; // min over indices of (bound - value); negative on violation

    bool implication_holds() const noexcept { return !premise_holds || conclusion_holds; }
};

// u_n <= a_n + sum_{l<n} b_l u_l  =>  u_n <= a_n + sum_{l<n} a_l b_l prod_{j=l+1}^{n-1} (1 + b_j).
Verdict check_gronwall_discrete(std::span<const double> u, std::span<const double> a, std::span<const double> b);

// u(t) <= alpha(t) + int_0^t beta u  =>  u(t) <= alpha(t) exp(int_0^t beta), trapezoidal integrals.
Verdict check_gronwall_continuous(const Trace& u, const Trace& alpha, const Trace& beta);

// Builds u_k = a_k u_{k-1} + b_k and compares with the closed-form product bound.
Verdict check_gronwall_product(double u0, std::span<const double> a, std::span<const double> b);

struct BinomialVerdict {
    bool recurrence_ok = false;       // (n+1) C_{n+1} == (4n+2) C_n up to N
    bool sqrt_bound_ok = false;       // C(2N,N) <= 4^N / sqrt(pi N)
    bool six_pi_bound_ok = true;      // C(2N,N)^2 <= 2^{4N} / (6 pi), checked for N >= 6
    bool six_pi_checked = false;
    double log_central = 0.0;         // ln C(2N,N)

    bool passed() const noexcept { return recurrence_ok && sqrt_bound_ok && six_pi_bound_ok; }
};

BinomialVerdict binomial_bound_check(unsigned N);

} // namespace snngb
