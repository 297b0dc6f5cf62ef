#include "snngb/bounds.hpp"

#include "snngb/error.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace snngb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double x, double y) {
    if (x == -kInf) return y;
    if (y == -kInf) return x;
    const double hi = std::max(x, y);
    return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

double safe_log(double v) { return v > 0.0 ? std::log(v) : -kInf; }

} // namespace

void BoundInputs::validate() const {
    if (!(T > 0.0)) throw InvalidArgument("bound inputs: T must be positive");
    if (L < 1) throw InvalidArgument("bound inputs: L must be >= 1");
    if (N_w < 1) throw InvalidArgument("bound inputs: N_w must be >= 1");
    if (!(M_w >= 0.0)) throw InvalidArgument("bound inputs: M_w must be nonnegative");
    if (!(M_x >= 0.0)) throw InvalidArgument("bound inputs: M_x must be nonnegative");
    if (n < 1) throw InvalidArgument("bound inputs: n must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("bound inputs: delta must lie in (0, 1)");
    if (!(L_hbar >= 0.0) || !(M_hbar >= 0.0)) throw InvalidArgument("bound inputs: loss constants must be >= 0");
    params.validate();
}

ABTerms compute_ab(const BoundInputs& inp) {
    inp.validate();
    const auto& p = inp.params;
    const double growth = inp.T / p.tau_m; // log of exp(T / tau_m)
    ABTerms r;
    r.log_a_tilde = safe_log(inp.M_w) == -kInf
                        ? -kInf
                        : std::log(inp.T * p.tau_r / (p.tau_m * p.u_firing)) + growth + std::log(inp.M_w);
    r.a_tilde = std::exp(r.log_a_tilde);

    const double root_w = std::sqrt(static_cast<double>(inp.N_w));
    const double pre = root_w * std::abs(p.u_init) / p.u_firing +
                       inp.T * root_w * std::abs(p.u_rest) / (p.tau_m * p.u_firing);
    r.log_b_tilde = pre > 0.0 ? std::log(pre) + growth : -kInf;
    r.b_tilde = std::exp(r.log_b_tilde);
    r.overflow = std::isinf(r.a_tilde) || std::isinf(r.b_tilde);
    return r;
}

namespace {

// N_f from ln A and ln B so that overflowed A or B still give a finite log.
NfValue nf_from_logs(double log_a, double log_b, std::size_t L, double M_x) {
    NfValue r;
    const double Ld = static_cast<double>(L);

    // A^L M_x
    const double log_first = (log_a == -kInf || M_x == 0.0) ? -kInf : Ld * log_a + std::log(M_x);

    // (A^L - 1) / (A (A - 1)) B
    double log_second = -kInf;
    if (log_b > -kInf) {
        double log_geo = 0.0;
        if (std::abs(std::expm1(log_a)) <= 1e-9) {
            r.limit_branch = true;
            log_geo = std::log(Ld);
        } else if (log_a == -kInf) {
            log_geo = kInf;
        } else if (log_a > 0.0) {
            // ln(A^L - 1) - ln A - ln(A - 1), stable for huge A^L.
            const double log_am1 = log_a > 30.0 ? log_a + std::log1p(-std::exp(-log_a)) : std::log(std::expm1(log_a));
            log_geo = Ld * log_a + std::log1p(-std::exp(-Ld * log_a)) - log_a - log_am1;
        } else {
            log_geo = std::log1p(-std::exp(Ld * log_a)) - log_a - std::log1p(-std::exp(log_a));
        }
        log_second = log_geo + log_b;
    }
    r.log_value = log_add(log_first, log_second);
    r.value = std::exp(r.log_value);
    r.overflow = std::isinf(r.value);
    return r;
}

} // namespace

NfValue compute_nf(double a, double b, std::size_t L, double M_x) {
    if (L < 1) throw InvalidArgument("compute_nf: L must be >= 1");
    if (!(a >= 0.0) || !(b >= 0.0) || !(M_x >= 0.0)) throw InvalidArgument("compute_nf: negative input");
    return nf_from_logs(safe_log(a), safe_log(b), L, M_x);
}

double nf_b_term_alt_form(double a, double b, std::size_t L) {
    const double Ld = static_cast<double>(L);
    return (std::pow(a, Ld - 1.0) - 1.0 / a) / (a - 1.0) * b;
}

std::size_t variant_depth(Expression e, std::size_t L) noexcept {
    if (e == Expression::SRM || e == Expression::DTA) return L > 1 ? L - 1 : 1;
    return L;
}

NfValue variant_nf(const BoundInputs& inp) {
    const auto ab = compute_ab(inp);
    return nf_from_logs(ab.log_a_tilde, ab.log_b_tilde, variant_depth(inp.expression, inp.L), inp.M_x);
}

double covering_bound(double gamma, double T, double n_f, std::size_t N_w, CoverClass cls) {
    if (!(gamma > 0.0)) throw InvalidArgument("covering_bound: gamma must be positive");
    const double c = (cls == CoverClass::monotone) ? 4.0 : 16.0;
    const double k = (cls == CoverClass::monotone) ? 1.0 : 2.0;
    const double w = static_cast<double>(N_w);
    const double exponent = c * T * n_f * std::sqrt(w) / gamma;
    return w * (exponent * std::numbers::ln2 - k * std::log(6.0 * std::numbers::pi));
}

RademacherUpper rademacher_upper(double T, double n_f, std::size_t N_w, std::size_t n) {
    if (!(T > 0.0) || !(n_f >= 0.0) || N_w < 1 || n < 1)
        throw InvalidArgument("rademacher_upper: arguments must be positive");
    if (n_f == 0.0) return {0.0, false};
    const double pi = std::numbers::pi;
    const double ln2 = std::numbers::ln2;
    const double w15 = std::pow(static_cast<double>(N_w), 1.5);
    const double nd = static_cast<double>(n);
    // Both terms are linear in n_f; factor it out so an overflowed n_f gives
    // +-inf rather than inf - inf.
    const double per_nf = 128.0 * T * w15 * ln2 / (3.0 * pi * nd) -
                          32.0 * std::sqrt(2.0 * ln2 / (3.0 * pi)) * std::sqrt(T * w15 / nd);
    const double value = n_f * per_nf;
    return {value, value < 0.0};
}

double generalization_upper(double emp_error, double rc, const BoundInputs& inp) {
    if (!(inp.delta > 0.0 && inp.delta < 1.0)) throw InvalidArgument("generalization_upper: delta outside (0, 1)");
    if (inp.n < 1) throw InvalidArgument("generalization_upper: n must be >= 1");
    const double rc_sound = std::max(rc, 0.0);
    const double complexity = (inp.L_hbar == 0.0 || rc_sound == 0.0) ? 0.0 : 2.0 * inp.L_hbar * rc_sound;
    const double confidence =
        inp.M_hbar == 0.0
            ? 0.0
            : 3.0 * inp.M_hbar * std::sqrt(std::log(2.0 / inp.delta) / (2.0 * static_cast<double>(inp.n)));
    return emp_error + complexity + confidence;
}

double alpha_bound(double n_f, double T, AlphaMode mode) {
    if (mode == AlphaMode::sup_norm) return n_f;
    return n_f / std::pow(T, n_f / 2.0);
}

BoundReport assemble_report(const BoundInputs& inp, double gamma_probe, double emp_error, AlphaMode alpha_mode) {
    if (!(gamma_probe > 0.0)) throw InvalidArgument("assemble_report: gamma_probe must be positive");
    const auto ab = compute_ab(inp);
    BoundReport r;
    r.a_tilde = ab.a_tilde;
    r.b_tilde = ab.b_tilde;
    r.effective_depth = variant_depth(inp.expression, inp.L);
    const auto nf = nf_from_logs(ab.log_a_tilde, ab.log_b_tilde, r.effective_depth, inp.M_x);
    r.n_f = nf.value;
    r.limit_branch = nf.limit_branch;
    r.overflow = ab.overflow || nf.overflow;
    r.gamma_probe = gamma_probe;
    r.cover_log_I = covering_bound(gamma_probe, inp.T, r.n_f, inp.N_w, CoverClass::monotone);
    r.cover_log_B = covering_bound(gamma_probe, inp.T, r.n_f, inp.N_w, CoverClass::bounded_variation);
    const auto rc = rademacher_upper(inp.T, r.n_f, inp.N_w, inp.n);
    r.rc_upper = rc.value;
    r.vacuous = rc.vacuous;
    r.alpha = alpha_bound(r.n_f, inp.T, alpha_mode);
    r.gen_upper = generalization_upper(emp_error, r.rc_upper, inp);
    return r;
}

std::string format_report(const BoundReport& r) {
    std::ostringstream out;
    auto put = [&](const char* key, double v) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.10g", v);
        out << key << '=' << buf << '\n';
    };
    put("a_tilde", r.a_tilde);
    put("b_tilde", r.b_tilde);
    put("n_f", r.n_f);
    put("rc_upper", r.rc_upper);
    put("cover_log_I", r.cover_log_I);
    put("cover_log_B", r.cover_log_B);
    put("gen_upper", r.gen_upper);
    put("alpha", r.alpha);
    put("gamma_probe", r.gamma_probe);
    out << "effective_depth=" << r.effective_depth << '\n';
    out << "limit_branch=" << (r.limit_branch ? 1 : 0) << '\n';
    out << "overflow=" << (r.overflow ? 1 : 0) << '\n';
    out << "vacuous=" << (r.vacuous ? 1 : 0) << '\n';
    return out.str();
}

namespace {

void require_positive(std::span<const double> v, const char* what) {
    for (double x : v)
        if (!(x > 0.0)) throw InvalidArgument(std::string(what) + ": entries must be positive");
}

bool le_tol(double value, double bound, double rel) {
    return value <= bound + rel * std::max(1.0, std::abs(bound));
}

} // namespace

Verdict check_gronwall_discrete(std::span<const double> u, std::span<const double> a, std::span<const double> b) {
    if (u.size() != a.size() || u.size() != b.size())
        throw DimensionMismatch("check_gronwall_discrete: sequences differ in length");
    require_positive(u, "check_gronwall_discrete");
    require_positive(a, "check_gronwall_discrete");
    require_positive(b, "check_gronwall_discrete");

    Verdict v;
    v.premise_holds = true;
    v.conclusion_holds = true;
    v.worst_margin = kInf;
    double weighted = 0.0; // sum_{l<n} b_l u_l
    double chained = 0.0;  // sum_{l<n} a_l b_l prod_{j=l+1}^{n-1} (1 + b_j)
    for (std::size_t n = 0; n < u.size(); ++n) {
        if (u[n] > a[n] + weighted) v.premise_holds = false;
        const double bound = a[n] + chained;
        v.worst_margin = std::min(v.worst_margin, bound - u[n]);
        if (!le_tol(u[n], bound, 1e-12)) v.conclusion_holds = false;
        weighted += b[n] * u[n];
        chained = chained * (1.0 + b[n]) + a[n] * b[n];
    }
    return v;
}

Verdict check_gronwall_continuous(const Trace& u, const Trace& alpha, const Trace& beta) {
    if (!u.same_grid(alpha) || !u.same_grid(beta))
        throw DimensionMismatch("check_gronwall_continuous: traces must share one grid");
    for (std::size_t k = 0; k < beta.size(); ++k)
        if (beta[k] < 0.0) throw InvalidArgument("check_gronwall_continuous: beta must be nonnegative");
    for (std::size_t k = 1; k < alpha.size(); ++k)
        if (alpha[k] < alpha[k - 1]) throw InvalidArgument("check_gronwall_continuous: alpha must be nondecreasing");

    Verdict v;
    v.premise_holds = true;
    v.conclusion_holds = true;
    v.worst_margin = kInf;
    const double dt = u.dt();
    double int_bu = 0.0; // int_0^t beta u
    double int_b = 0.0;  // int_0^t beta
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (k > 0) {
            int_bu += 0.5 * dt * (beta[k - 1] * u[k - 1] + beta[k] * u[k]);
            int_b += 0.5 * dt * (beta[k - 1] + beta[k]);
        }
        if (u[k] > alpha[k] + int_bu) v.premise_holds = false;
        const double bound = alpha[k] * std::exp(int_b);
        v.worst_margin = std::min(v.worst_margin, bound - u[k]);
        if (!le_tol(u[k], bound, 1e-9)) v.conclusion_holds = false;
    }
    return v;
}

Verdict check_gronwall_product(double u0, std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionMismatch("check_gronwall_product: sequences differ in length");
    require_positive(a, "check_gronwall_product");
    require_positive(b, "check_gronwall_product");
    if (!(u0 > 0.0)) throw InvalidArgument("check_gronwall_product: u0 must be positive");

    Verdict v;
    v.premise_holds = true; // the extremal sequence meets the premise with equality
    v.conclusion_holds = true;
    v.worst_margin = kInf;
    double u = u0;
    const std::size_t K = a.size();
    for (std::size_t k = 1; k <= K; ++k) {
        u = a[k - 1] * u + b[k - 1];
        // Closed form evaluated from scratch: (prod a_j) u0 + sum_j b_j prod_{i>j} a_i.
        double head = u0;
        for (std::size_t j = 1; j <= k; ++j) head *= a[j - 1];
        double tail = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            double prod = b[j - 1];
            for (std::size_t i = j + 1; i <= k; ++i) prod *= a[i - 1];
            tail += prod;
        }
        const double bound = head + tail;
        v.worst_margin = std::min(v.worst_margin, bound - u);
        if (!le_tol(u, bound, 1e-12)) v.conclusion_holds = false;
    }
    return v;
}

BinomialVerdict binomial_bound_check(unsigned N) {
    using boost::multiprecision::cpp_int;
    using Real = boost::multiprecision::cpp_bin_float_100;
    if (N < 1) throw InvalidArgument("binomial_bound_check: N must be >= 1");

    BinomialVerdict v;
    v.recurrence_ok = true;
    cpp_int by_recurrence = 1; // C(0, 0)
    for (unsigned n = 0; n < N; ++n) {
        cpp_int next = by_recurrence * (4 * n + 2);
        if (next % (n + 1) != 0) v.recurrence_ok = false;
        next /= (n + 1);
        if ((n + 1) * next != (4 * n + 2) * by_recurrence) v.recurrence_ok = false;
        by_recurrence = next;
    }
    // Independent route: prod_{k=1}^{N} (N + k) / k, exact at every step.
    cpp_int by_product = 1;
    for (unsigned k = 1; k <= N; ++k) {
        by_product *= (N + k);
        by_product /= k;
    }
    if (by_product != by_recurrence) v.recurrence_ok = false;

    const Real c(by_recurrence);
    const Real pi = boost::math::constants::pi<Real>();
    const Real four_n = pow(Real(4), N);
    const Real sixteen_n = four_n * four_n;
    v.sqrt_bound_ok = c * c * pi * Real(N) <= sixteen_n;
    if (N >= 6) {
        v.six_pi_checked = true;
        v.six_pi_bound_ok = c * c * Real(6) * pi <= sixteen_n;
    }
    v.log_central = static_cast<double>(log(c));
    return v;
}

} // namespace snngb
