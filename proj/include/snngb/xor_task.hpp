#pragma once

#include "snngb/neuron.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>

namespace snngb {

// Delayed-memory XOR: an input channel of +-1 pulses, a go-cue channel, and a
// target that after each closing cue reports the parity of the two pulses
// seen since the previous cue (+1 equal signs, -1 opposite, 0 otherwise).
struct XorDataset {
    double T = 0.0;
    double dt = 1.0;
    SpikeEvents input_pulses;
    SpikeEvents gocue_pulses;
    MultiTrace input_trace; // channel 0 input pulses, channel 1 go-cues
    Trace target;
    std::size_t split_index = 0; // last training grid index

    std::size_t grid_length() const noexcept { return target.size(); }
};

struct PulseCounts {
    std::size_t inputs = 0;
    std::size_t gocues = 0;
};

// round(n * T / 3000) with a floor of 4, from 300 input and 200 go-cue pulses.
PulseCounts scaled_pulse_counts(double T) noexcept;

// +1 for two pulses of equal sign, -1 for opposite signs, 0 for anything else.
int xor_rule(std::span<const double> segment_signs) noexcept;

XorDataset generate_xor(double T, double dt, std::size_t n_in, std::size_t n_go, std::uint64_t seed);

// Half-open grid index range.
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
};

// [0, split_index] and (split_index, end].
std::pair<IndexRange, IndexRange> split(const XorDataset& ds);

// Samples [range.begin, range.end) keeping their original times.
Trace slice(const Trace& tr, IndexRange range);

// Test minus train error; may be negative.
inline double gap(double train_err, double test_err) noexcept { return test_err - train_err; }

// Plain-text event list and rendered-trace CSV, see docs/formats.md.
void write_events(std::ostream& out, const XorDataset& ds);
void write_trace_csv(std::ostream& out, const XorDataset& ds);

} // namespace snngb
