#include "snngb/xor_task.hpp"

#include "snngb/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <vector>

namespace snngb {

PulseCounts scaled_pulse_counts(double T) noexcept {
    auto scale = [T](double n) {
        const double v = std::round(n * T / 3000.0);
        return static_cast<std::size_t>(std::max(4.0, v));
    };
    return {scale(300.0), scale(200.0)};
}

int xor_rule(std::span<const double> signs) noexcept {
    if (signs.size() != 2) return 0;
    return (signs[0] > 0.0) == (signs[1] > 0.0) ? 1 : -1;
}

namespace {

// k distinct draws from `pool`, without replacement.
std::vector<std::size_t> draw(std::vector<std::size_t> pool, std::size_t k, std::mt19937_64& rng) {
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(k);
    return pool;
}

} // namespace

XorDataset generate_xor(double T, double dt, std::size_t n_in, std::size_t n_go, std::uint64_t seed) {
    if (!(T > 0.0) || !(dt > 0.0)) throw InvalidArgument("generate_xor: T and dt must be positive");
    if (n_in < 1 || n_go < 1) throw InvalidArgument("generate_xor: pulse counts must be >= 1");
    const double ratio = T / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
        throw InvalidArgument("generate_xor: T / dt must be an integer");
    const std::size_t G = static_cast<std::size_t>(std::round(ratio)) + 1;
    if (n_go > G || n_in > G - n_go)
        throw InvalidArgument("generate_xor: more pulses than grid points");

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> all(G);
    for (std::size_t i = 0; i < G; ++i) all[i] = i;
    std::vector<std::size_t> cues = draw(all, n_go, rng);
    std::sort(cues.begin(), cues.end());

    std::vector<char> is_cue(G, 0);
    for (auto c : cues) is_cue[c] = 1;

    // segment_of[k]: index i of the inter-cue segment (cues[i], cues[i+1])
    // containing k, or -1 outside every inter-cue segment.
    std::vector<long> segment_of(G, -1);
    for (std::size_t i = 0; i + 1 < cues.size(); ++i)
        for (std::size_t k = cues[i] + 1; k < cues[i + 1]; ++k) segment_of[k] = static_cast<long>(i);

    std::size_t capacity = 0;
    for (std::size_t i = 0; i + 1 < cues.size(); ++i) capacity += std::min<std::size_t>(2, cues[i + 1] - cues[i] - 1);
    for (std::size_t k = 0; k < G; ++k)
        if (!is_cue[k] && segment_of[k] < 0) ++capacity;
    if (n_in > capacity) throw InvalidArgument("generate_xor: cannot place pulses with at most two per segment");

    std::vector<std::size_t> free_points;
    for (std::size_t k = 0; k < G; ++k)
        if (!is_cue[k]) free_points.push_back(k);
    std::vector<std::size_t> pulses = draw(free_points, n_in, rng);

    // Per-segment rejection: an overfull segment keeps two of its pulses at
    // random; the excess is redrawn one pulse at a time, rejecting points of
    // segments that already hold two.
    std::vector<char> occupied(G, 0);
    for (auto p : pulses) occupied[p] = 1;
    std::vector<std::vector<std::size_t>> members(cues.size());
    std::vector<std::size_t> keep;
    for (auto p : pulses) {
        if (segment_of[p] >= 0) members[static_cast<std::size_t>(segment_of[p])].push_back(p);
        else keep.push_back(p);
    }
    std::vector<std::size_t> count(cues.size(), 0);
    std::size_t excess = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        auto& m = members[i];
        if (m.size() > 2) {
            m = draw(m, m.size(), rng); // random order
            for (std::size_t j = 2; j < m.size(); ++j) occupied[m[j]] = 0;
            excess += m.size() - 2;
            m.resize(2);
        }
        count[i] = m.size();
        keep.insert(keep.end(), m.begin(), m.end());
    }
    for (std::size_t r = 0; r < excess; ++r) {
        std::vector<std::size_t> pool;
        for (auto k : free_points)
            if (!occupied[k] && (segment_of[k] < 0 || count[static_cast<std::size_t>(segment_of[k])] < 2))
                pool.push_back(k);
        const std::size_t p = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
        occupied[p] = 1;
        if (segment_of[p] >= 0) ++count[static_cast<std::size_t>(segment_of[p])];
        keep.push_back(p);
    }
    pulses = std::move(keep);
    std::sort(pulses.begin(), pulses.end());

    std::vector<double> signs(pulses.size());
    for (auto& s : signs) s = (rng() >> 63) ? 1.0 : -1.0;

    XorDataset ds;
    ds.T = T;
    ds.dt = dt;
    std::vector<double> in_times, go_times, go_amp(cues.size(), 1.0);
    for (auto p : pulses) in_times.push_back(static_cast<double>(p) * dt);
    for (auto c : cues) go_times.push_back(static_cast<double>(c) * dt);
    ds.input_pulses = SpikeEvents(std::move(in_times), signs);
    ds.gocue_pulses = SpikeEvents(std::move(go_times), std::move(go_amp));

    std::vector<double> in_ch(G, 0.0), go_ch(G, 0.0), target(G, 0.0);
    for (std::size_t i = 0; i < pulses.size(); ++i) in_ch[pulses[i]] = signs[i];
    for (auto c : cues) go_ch[c] = 1.0;

    std::vector<std::vector<double>> seg_signs(cues.size());
    for (std::size_t i = 0; i < pulses.size(); ++i)
        if (segment_of[pulses[i]] >= 0) seg_signs[static_cast<std::size_t>(segment_of[pulses[i]])].push_back(signs[i]);
    for (std::size_t i = 0; i + 1 < cues.size(); ++i) {
        const double value = xor_rule(seg_signs[i]);
        const std::size_t from = cues[i + 1];
        const std::size_t to = (i + 2 < cues.size()) ? cues[i + 2] : G;
        for (std::size_t k = from; k < to; ++k) target[k] = value;
    }

    ds.input_trace.channels = {Trace(0.0, dt, std::move(in_ch)), Trace(0.0, dt, std::move(go_ch))};
    ds.target = Trace(0.0, dt, std::move(target));
    ds.split_index = static_cast<std::size_t>(std::floor(0.8 * static_cast<double>(G - 1)));
    return ds;
}

std::pair<IndexRange, IndexRange> split(const XorDataset& ds) {
    const std::size_t G = ds.grid_length();
    return {{0, ds.split_index + 1}, {ds.split_index + 1, G}};
}

Trace slice(const Trace& tr, IndexRange range) {
    if (range.begin >= range.end || range.end > tr.size()) throw InvalidArgument("slice: range outside the trace");
    std::vector<double> v(tr.values().begin() + static_cast<std::ptrdiff_t>(range.begin),
                          tr.values().begin() + static_cast<std::ptrdiff_t>(range.end));
    return Trace(tr.time(range.begin), tr.dt(), std::move(v));
}

void write_events(std::ostream& out, const XorDataset& ds) {
    char buf[64];
    out << "# snngb-xor-events v1\n";
    std::snprintf(buf, sizeof buf, "%.17g", ds.T);
    out << "# T=" << buf;
    std::snprintf(buf, sizeof buf, "%.17g", ds.dt);
    out << " dt=" << buf << " split_index=" << ds.split_index << '\n';
    out << "# channel time amplitude\n";
    auto dump = [&](const char* name, const SpikeEvents& ev) {
        for (std::size_t i = 0; i < ev.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g", ev.times[i], ev.amplitudes[i]);
            out << name << ' ' << buf << '\n';
        }
    };
    dump("input", ds.input_pulses);
    dump("gocue", ds.gocue_pulses);
}

void write_trace_csv(std::ostream& out, const XorDataset& ds) {
    out << "index,t,input,gocue,target\n";
    char buf[128];
    for (std::size_t k = 0; k < ds.grid_length(); ++k) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%g,%g,%g\n", k, ds.target.time(k), ds.input_trace.channels[0][k],
                      ds.input_trace.channels[1][k], ds.target[k]);
        out << buf;
    }
}

} // namespace snngb
