#include "snngb/harness.hpp"

#include "snngb/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>

namespace snngb {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view s) {
    s = trim(s);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
        throw ParseError("not a number: '" + std::string(s) + "'");
    return v;
}

std::size_t parse_count(std::string_view s) {
    const double v = parse_number(s);
    if (v < 0 || v != std::floor(v)) throw ParseError("not a nonnegative integer: '" + std::string(s) + "'");
    return static_cast<std::size_t>(v);
}

std::vector<std::size_t> to_counts(const std::vector<double>& v) {
    std::vector<std::size_t> out;
    for (double x : v) {
        if (x < 1 || x != std::floor(x)) throw ParseError("list entries must be positive integers");
        out.push_back(static_cast<std::size_t>(x));
    }
    return out;
}

bool parse_flag(std::string_view s) {
    s = trim(s);
    if (s == "1" || s == "true" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "no") return false;
    throw ParseError("not a flag: '" + std::string(s) + "'");
}

} // namespace

std::vector<double> parse_value_list(std::string_view text) {
    text = trim(text);
    if (text.empty()) throw ParseError("empty value list");
    std::vector<double> out;
    if (text.find(':') != std::string_view::npos) {
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos)
            throw ParseError("range must be start:step:end");
        const double a = parse_number(text.substr(0, c1));
        const double step = parse_number(text.substr(c1 + 1, c2 - c1 - 1));
        const double b = parse_number(text.substr(c2 + 1));
        if (!(step > 0.0) || b < a) throw ParseError("range needs step > 0 and end >= start");
        // Index-based so floating steps do not drift.
        const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        out.push_back(parse_number(item));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

void SweepConfig::validate() const {
    if (T_values.empty() || Nw_values.empty() || L_values.empty()) throw InvalidArgument("sweep lists must be nonempty");
    if (trials < 1) throw InvalidArgument("trials must be >= 1");
    if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
    for (double T : T_values)
        if (!(T > 0.0)) throw InvalidArgument("T values must be positive");
    for (auto w : Nw_values)
        if (w < 1) throw InvalidArgument("N_w values must be >= 1");
    for (auto l : L_values)
        if (l < 1) throw InvalidArgument("L values must be >= 1");
    if (!(M_w >= 0.0) || !std::isfinite(M_w)) throw InvalidArgument("M_w must be finite and nonnegative");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    if (!(gamma_probe > 0.0)) throw InvalidArgument("gamma must be positive");
    if (jobs < 1) throw InvalidArgument("jobs must be >= 1");
    if (output_name.empty()) throw InvalidArgument("output_name must be nonempty");
    train.validate();
    params.validate();
}

void SweepConfig::apply_paper_scale() {
    T_values = {500, 1000, 1500, 2000, 2500, 3000};
    Nw_values = {2, 4, 6, 8};
    L_values = {2, 4, 8, 16};
    trials = 10;
}

SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view v = line;
        if (auto h = v.find('#'); h != std::string_view::npos) v = v.substr(0, h);
        v = trim(v);
        if (v.empty()) continue;
        const auto eq = v.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key=value");
        const std::string key(trim(v.substr(0, eq)));
        const std::string_view val = trim(v.substr(eq + 1));
        try {
            if (key == "expression") cfg.expression = parse_expression(val);
            else if (key == "T") cfg.T_values = parse_value_list(val);
            else if (key == "Nw") cfg.Nw_values = to_counts(parse_value_list(val));
            else if (key == "L") cfg.L_values = to_counts(parse_value_list(val));
            else if (key == "log2L") {
                cfg.L_values.clear();
                for (auto e : to_counts(parse_value_list(val))) {
                    if (e > 20) throw ParseError("log2L entries must be <= 20");
                    cfg.L_values.push_back(std::size_t{1} << e);
                }
            }
            else if (key == "trials") cfg.trials = parse_count(val);
            else if (key == "dt") cfg.dt = parse_number(val);
            else if (key == "epochs") cfg.train.epochs = parse_count(val);
            else if (key == "learning_rate") cfg.train.learning_rate = parse_number(val);
            else if (key == "window") cfg.train.window = parse_count(val);
            else if (key == "gradient") {
                if (val == "adjoint") cfg.train.gradient_mode = GradientMode::adjoint;
                else if (val == "finite_difference") cfg.train.gradient_mode = GradientMode::finite_difference;
                else throw ParseError("gradient must be adjoint or finite_difference");
            }
            else if (key == "tau_m") cfg.params.tau_m = parse_number(val);
            else if (key == "tau_r") cfg.params.tau_r = parse_number(val);
            else if (key == "u_rest") cfg.params.u_rest = parse_number(val);
            else if (key == "u_firing") cfg.params.u_firing = parse_number(val);
            else if (key == "u_reset") cfg.params.u_reset = parse_number(val);
            else if (key == "u_init") cfg.params.u_init = parse_number(val);
            else if (key == "M_w") cfg.M_w = parse_number(val);
            else if (key == "delta") cfg.delta = parse_number(val);
            else if (key == "gamma") cfg.gamma_probe = parse_number(val);
            else if (key == "seed") {
                std::uint64_t s = 0;
                auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), s);
                if (ec != std::errc() || p != val.data() + val.size()) throw ParseError("seed must be an unsigned integer");
                cfg.seed = s;
            }
            else if (key == "output_dir") cfg.output_dir = std::string(val);
            else if (key == "output_name") cfg.output_name = std::string(val);
            else if (key == "wall_time") cfg.record_wall_time = parse_flag(val);
            else if (key == "jobs") cfg.jobs = parse_count(val);
            else throw ParseError("unknown key '" + key + "'");
        } catch (const Error& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    return parse_sweep_config(in);
}

} // namespace snngb
