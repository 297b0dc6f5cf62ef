#include "snngb/harness.hpp"

#include "snngb/analysis.hpp"
#include "snngb/bounds.hpp"
#include "snngb/error.hpp"
#include "snngb/seed.hpp"
#include "snngb/xor_task.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

namespace snngb {

namespace {

constexpr std::uint64_t tag_data = 0x64617461;  // "data"
constexpr std::uint64_t tag_net = 0x6e6574;     // "net"
constexpr std::uint64_t tag_train = 0x747261696e;

const char* columns =
    "expression,T,N_w,L,trial,seed,data_seed,train_error,test_error,epsilon,n_f,rc_upper,gen_upper,bv_pass,"
    "wall_seconds,status";

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

double parse_cell(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ParseError("runs CSV: bad number '" + s + "'");
    }
    if (used != s.size()) throw ParseError("runs CSV: bad number '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    try {
        std::size_t used = 0;
        auto v = std::stoull(s, &used);
        if (used != s.size()) throw ParseError("runs CSV: bad integer '" + s + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("runs CSV: bad integer '" + s + "'");
    }
}

} // namespace

std::uint64_t dataset_seed(std::uint64_t master, double T, std::size_t trial) noexcept {
    return derive_seed(master, {tag_data, std::bit_cast<std::uint64_t>(T), trial});
}

std::uint64_t row_seed(std::uint64_t master, double T, std::size_t N_w, std::size_t L, std::size_t trial) noexcept {
    return derive_seed(master, {tag_net, std::bit_cast<std::uint64_t>(T), N_w, L, trial});
}

RunRecord run_single(const SweepConfig& cfg, double T, std::size_t N_w, std::size_t L, std::size_t trial) {
    const auto start = std::chrono::steady_clock::now();
    RunRecord r;
    r.expression = cfg.expression;
    r.T = T;
    r.N_w = N_w;
    r.L = L;
    r.trial = trial;
    r.seed = row_seed(cfg.seed, T, N_w, L, trial);
    r.data_seed = dataset_seed(cfg.seed, T, trial);
    r.train_error = r.test_error = r.epsilon = r.n_f = r.rc_upper = r.gen_upper = std::nan("");
    try {
        const PulseCounts counts = scaled_pulse_counts(T);
        const XorDataset ds = generate_xor(T, cfg.dt, counts.inputs, counts.gocues, r.data_seed);
        const auto [train_range, test_range] = split(ds);

        NetworkConfig nc;
        nc.expression = cfg.expression;
        nc.widths = NetworkConfig::layered_widths(2, N_w, L, 1);
        nc.dt = cfg.dt;
        nc.T = T;
        nc.params = cfg.params;
        if (cfg.expression == Expression::SRM) nc.kernels = SrmKernels::defaults_for(cfg.params);
        nc.weight_norm_cap = cfg.M_w;

        const Network init = Network::random(nc, r.seed);
        TrainConfig tc = cfg.train;
        tc.seed = derive_seed(r.seed, tag_train);
        const Trace train_target = slice(ds.target, train_range);
        auto [net, report] = train(init, ds.input_trace, train_target, tc);

        const auto flat = flatten_input(ds.input_trace);
        r.train_error = fit_loss(nc, net.weights(), flat, ds.target, train_range.begin, train_range.end);
        r.test_error = test_range.size() > 0
                           ? fit_loss(nc, net.weights(), flat, ds.target, test_range.begin, test_range.end)
                           : 0.0;
        r.epsilon = gap(r.train_error, r.test_error);

        BoundInputs bi;
        bi.T = T;
        bi.L = L;
        bi.N_w = N_w;
        bi.M_w = cfg.M_w;
        bi.M_x = input_sup_norm(ds.input_trace);
        bi.n = train_range.size();
        bi.delta = cfg.delta;
        bi.params = cfg.params;
        bi.expression = cfg.expression;
        const NfValue nf = variant_nf(bi);
        const LossConstants lc = lsq_loss_constants(nf.value);
        bi.L_hbar = lc.lipschitz;
        bi.M_hbar = lc.ceiling;
        const BoundReport br = assemble_report(bi, cfg.gamma_probe, r.train_error);
        r.n_f = br.n_f;
        r.rc_upper = br.rc_upper;
        r.gen_upper = br.gen_upper;

        const SimulationRecord rec = forward(net, ds.input_trace);
        r.bv_pass = bv_check(rec, cfg.params, T).passed;
        r.status = "ok";
    } catch (const Error& e) {
        r.status = to_string(e.code());
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<RunRecord> run_grid(const SweepConfig& cfg) {
    cfg.validate();
    struct Job {
        double T;
        std::size_t N_w, L, trial;
    };
    std::vector<Job> jobs;
    for (double T : cfg.T_values)
        for (auto w : cfg.Nw_values)
            for (auto l : cfg.L_values)
                for (std::size_t t = 0; t < cfg.trials; ++t) jobs.push_back({T, w, l, t});

    std::vector<RunRecord> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++)
            rows[i] = run_single(cfg, jobs[i].T, jobs[i].N_w, jobs[i].L, jobs[i].trial);
    };
    const std::size_t n_threads = std::min(cfg.jobs, jobs.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    }
    return rows;
}

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& rows, bool with_wall_time) {
    out << csv_schema_line << '\n' << columns << '\n';
    for (const auto& r : rows) {
        out << to_string(r.expression) << ',' << fmt(r.T) << ',' << r.N_w << ',' << r.L << ',' << r.trial << ','
            << r.seed << ',' << r.data_seed << ',' << fmt(r.train_error) << ',' << fmt(r.test_error) << ','
            << fmt(r.epsilon) << ',' << fmt(r.n_f) << ',' << fmt(r.rc_upper) << ',' << fmt(r.gen_upper) << ','
            << (r.bv_pass ? 1 : 0) << ',' << (with_wall_time ? fmt(r.wall_seconds) : std::string("-")) << ','
            << r.status << '\n';
    }
}

std::vector<RunRecord> read_runs_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != csv_schema_line) throw ParseError("runs CSV: missing schema line");
    if (!std::getline(in, line) || line != columns) throw ParseError("runs CSV: unexpected column header");
    std::vector<RunRecord> rows;
    std::size_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 16) throw ParseError("runs CSV line " + std::to_string(lineno) + ": expected 16 cells");
        RunRecord r;
        try {
            r.expression = parse_expression(cells[0]);
        } catch (const Error&) {
            throw ParseError("runs CSV line " + std::to_string(lineno) + ": bad expression");
        }
        r.T = parse_cell(cells[1]);
        r.N_w = parse_u64(cells[2]);
        r.L = parse_u64(cells[3]);
        r.trial = parse_u64(cells[4]);
        r.seed = parse_u64(cells[5]);
        r.data_seed = parse_u64(cells[6]);
        r.train_error = parse_cell(cells[7]);
        r.test_error = parse_cell(cells[8]);
        r.epsilon = parse_cell(cells[9]);
        r.n_f = parse_cell(cells[10]);
        r.rc_upper = parse_cell(cells[11]);
        r.gen_upper = parse_cell(cells[12]);
        if (cells[13] != "0" && cells[13] != "1") throw ParseError("runs CSV: bv_pass must be 0 or 1");
        r.bv_pass = cells[13] == "1";
        r.wall_seconds = cells[14] == "-" ? 0.0 : parse_cell(cells[14]);
        r.status = cells[15];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string run_sweep(const SweepConfig& cfg) {
    namespace fs = std::filesystem;
    cfg.validate();
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.output_dir + "': " + ec.message());

    const auto rows = run_grid(cfg);
    const fs::path final_path = fs::path(cfg.output_dir) / cfg.output_name;
    fs::path tmp = final_path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        write_runs_csv(out, rows, cfg.record_wall_time);
        out.flush();
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, final_path, ec);
    if (ec) throw IoError("cannot rename to '" + final_path.string() + "': " + ec.message());
    return final_path.string();
}

} // namespace snngb
