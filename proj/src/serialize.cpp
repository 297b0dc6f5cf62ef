#include "snngb/error.hpp"
#include "snngb/network.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace snngb {

namespace {

constexpr const char* kMagic = "snngb-network";
constexpr int kVersion = 1;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_double(const std::string& tok, const std::string& key) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError("network file: bad number '" + tok + "' for " + key);
    return v;
}

std::size_t to_size(const std::string& tok, const std::string& key) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError("network file: bad integer '" + tok + "' for " + key);
    return v;
}

void write_kernel(std::ostream& out, const char* key, const Kernel& k, double lipschitz) {
    out << key << " exponential " << fmt(k.scale) << ' ' << fmt(k.tau) << ' ' << fmt(lipschitz) << '\n';
}

} // namespace

void write_network(std::ostream& out, const Network& net) {
    const auto& c = net.config();
    out << kMagic << ' ' << kVersion << '\n';
    out << "expression " << to_string(c.expression) << '\n';
    out << "widths";
    for (auto w : c.widths) out << ' ' << w;
    out << '\n';
    out << "dt " << fmt(c.dt) << '\n';
    out << "T " << fmt(c.T) << '\n';
    out << "tau_m " << fmt(c.params.tau_m) << '\n';
    out << "tau_r " << fmt(c.params.tau_r) << '\n';
    out << "u_rest " << fmt(c.params.u_rest) << '\n';
    out << "u_firing " << fmt(c.params.u_firing) << '\n';
    out << "u_reset " << fmt(c.params.u_reset) << '\n';
    out << "u_init " << fmt(c.params.u_init) << '\n';
    out << "weight_norm_cap " << fmt(c.weight_norm_cap) << '\n';
    if (c.kernels) {
        write_kernel(out, "kernel_eta", c.kernels->eta, c.kernels->lipschitz_eta);
        write_kernel(out, "kernel_epsilon", c.kernels->epsilon, c.kernels->lipschitz_epsilon);
    }
    for (std::size_t l = 0; l < net.weights().size(); ++l) {
        const auto& w = net.weights()[l];
        out << "layer " << (l + 1) << ' ' << w.rows << ' ' << w.cols << '\n';
        for (std::size_t i = 0; i < w.rows; ++i) {
            for (std::size_t j = 0; j < w.cols; ++j) out << (j ? " " : "") << fmt(w(i, j));
            out << '\n';
        }
    }
    out << "end\n";
}

Network read_network(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("network file: empty input");
    {
        std::istringstream hs(line);
        std::string magic;
        int version = 0;
        hs >> magic >> version;
        if (magic != kMagic) throw ParseError("network file: missing '" + std::string(kMagic) + "' header");
        if (version != kVersion) throw ParseError("network file: unsupported version " + std::to_string(version));
    }

    NetworkConfig cfg;
    std::map<std::string, std::vector<std::string>> header;
    std::vector<Matrix> weights;
    bool ended = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "end") {
            ended = true;
            break;
        }
        if (key == "layer") {
            std::size_t idx = 0, rows = 0, cols = 0;
            if (!(ls >> idx >> rows >> cols)) throw ParseError("network file: malformed layer line");
            if (idx != weights.size() + 1) throw ParseError("network file: layers out of order");
            Matrix m(rows, cols);
            for (std::size_t i = 0; i < rows; ++i) {
                if (!std::getline(in, line)) throw ParseError("network file: truncated weight block");
                std::istringstream rs(line);
                std::string tok;
                for (std::size_t j = 0; j < cols; ++j) {
                    if (!(rs >> tok)) throw ParseError("network file: short weight row");
                    m(i, j) = to_double(tok, "weight");
                }
                if (rs >> tok) throw ParseError("network file: long weight row");
            }
            weights.push_back(std::move(m));
            continue;
        }
        std::vector<std::string> vals;
        std::string tok;
        while (ls >> tok) vals.push_back(tok);
        header[key] = std::move(vals);
    }
    if (!ended) throw ParseError("network file: missing 'end'");

    auto scalar = [&](const char* key) -> double {
        auto it = header.find(key);
        if (it == header.end() || it->second.size() != 1)
            throw ParseError(std::string("network file: missing field ") + key);
        return to_double(it->second[0], key);
    };
    auto kernel = [&](const char* key, Kernel& k, double& lip) {
        const auto& v = header.at(key);
        if (v.size() != 4 || v[0] != "exponential") throw ParseError(std::string("network file: bad ") + key);
        k = Kernel{KernelFamily::exponential, to_double(v[1], key), to_double(v[2], key)};
        lip = to_double(v[3], key);
    };

    auto expr = header.find("expression");
    if (expr == header.end() || expr->second.size() != 1) throw ParseError("network file: missing expression");
    cfg.expression = parse_expression(expr->second[0]);
    auto widths = header.find("widths");
    if (widths == header.end()) throw ParseError("network file: missing widths");
    for (const auto& w : widths->second) cfg.widths.push_back(to_size(w, "widths"));
    cfg.dt = scalar("dt");
    cfg.T = scalar("T");
    cfg.params.tau_m = scalar("tau_m");
    cfg.params.tau_r = scalar("tau_r");
    cfg.params.u_rest = scalar("u_rest");
    cfg.params.u_firing = scalar("u_firing");
    cfg.params.u_reset = scalar("u_reset");
    cfg.params.u_init = scalar("u_init");
    cfg.weight_norm_cap = scalar("weight_norm_cap");
    if (header.count("kernel_eta") && header.count("kernel_epsilon")) {
        SrmKernels k;
        kernel("kernel_eta", k.eta, k.lipschitz_eta);
        kernel("kernel_epsilon", k.epsilon, k.lipschitz_epsilon);
        cfg.kernels = k;
    }
    return Network(std::move(cfg), std::move(weights));
}

void save_network(const std::string& path, const Network& net) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_network(out, net);
    if (!out) throw IoError("failed writing '" + path + "'");
}

Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_network(in);
}

} // namespace snngb
