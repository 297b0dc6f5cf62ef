#include <doctest.h>

#include "snngb/error.hpp"
#include "snngb/xor_task.hpp"

#include <cmath>
#include <sstream>

using namespace snngb;

TEST_CASE("xor rule") {
    const double pp[]{1, 1}, pm[]{1, -1}, mm[]{-1, -1}, one[]{1}, three[]{1, -1, 1};
    CHECK(xor_rule(pp) == 1);
    CHECK(xor_rule(mm) == 1);
    CHECK(xor_rule(pm) == -1);
    CHECK(xor_rule(one) == 0);
    CHECK(xor_rule(three) == 0);
    CHECK(xor_rule(std::span<const double>{}) == 0);
}

TEST_CASE("pulse count scaling") {
    CHECK(scaled_pulse_counts(3000).inputs == 300);
    CHECK(scaled_pulse_counts(3000).gocues == 200);
    CHECK(scaled_pulse_counts(500).inputs == 50);
    CHECK(scaled_pulse_counts(10).gocues == 4);
}

TEST_CASE("dataset invariants") {
    const auto ds = generate_xor(500, 1, 50, 33, 9);
    CHECK(ds.grid_length() == 501);
    CHECK(ds.input_pulses.size() == 50);
    CHECK(ds.gocue_pulses.size() == 33);
    ds.input_pulses.validate(500);
    ds.gocue_pulses.validate(500);
    for (double t : ds.input_pulses.times)
        for (double c : ds.gocue_pulses.times) CHECK(t != c);
    for (double a : ds.input_pulses.amplitudes) CHECK(std::abs(a) == 1.0);
    for (std::size_t k = 0; k < ds.grid_length(); ++k) {
        const double v = ds.target[k];
        CHECK((v == 0.0 || v == 1.0 || v == -1.0));
    }
    // Target is zero before the second cue.
    const auto second = static_cast<std::size_t>(std::lround(ds.gocue_pulses.times[1]));
    for (std::size_t k = 0; k < second; ++k) CHECK(ds.target[k] == 0.0);
    CHECK(ds.input_trace.channels.size() == 2);
    CHECK(ds.split_index == 400);
}

TEST_CASE("determinism and seed sensitivity") {
    const auto a = generate_xor(300, 1, 30, 20, 4);
    const auto b = generate_xor(300, 1, 30, 20, 4);
    const auto c = generate_xor(300, 1, 30, 20, 5);
    CHECK(a.target.values() == b.target.values());
    CHECK(a.input_pulses.times == b.input_pulses.times);
    CHECK(a.input_pulses.times != c.input_pulses.times);
}

TEST_CASE("split and gap") {
    const auto ds = generate_xor(10, 1, 4, 4, 1);
    CHECK(ds.split_index == 8);
    const auto [tr, te] = split(ds);
    CHECK(tr.begin == 0);
    CHECK(tr.end == 9);
    CHECK(te.begin == 9);
    CHECK(te.end == 11);
    const auto s = slice(ds.target, te);
    CHECK(s.size() == 2);
    CHECK(s.t0() == 9.0);
    CHECK_THROWS_AS(slice(ds.target, IndexRange{5, 5}), InvalidArgument);
    CHECK(gap(0.2, 0.5) == doctest::Approx(0.3));
    CHECK(gap(0.5, 0.2) == doctest::Approx(-0.3));
}

TEST_CASE("infeasible configurations are rejected") {
    CHECK_THROWS_AS(generate_xor(10, 1, 20, 4, 1), InvalidArgument);
    CHECK_THROWS_AS(generate_xor(10, 1, 4, 20, 1), InvalidArgument);
}

TEST_CASE("writers") {
    const auto ds = generate_xor(20, 1, 4, 4, 2);
    std::ostringstream ev, csv;
    write_events(ev, ds);
    write_trace_csv(csv, ds);
    CHECK(ev.str().rfind("# snngb-xor-events v1\n", 0) == 0);
    CHECK(csv.str().rfind("index,t,input,gocue,target\n", 0) == 0);
    std::size_t lines = 0;
    for (char ch : csv.str()) lines += ch == '\n';
    CHECK(lines == 22);
}

TEST_CASE("dense paper-scale pulse counts always place") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto ds = generate_xor(1500, 1, 150, 100, seed);
        CHECK(ds.input_pulses.size() == 150);
        const auto& cues = ds.gocue_pulses.times;
        for (std::size_t i = 0; i + 1 < cues.size(); ++i) {
            std::size_t n = 0;
            for (double t : ds.input_pulses.times) n += t > cues[i] && t < cues[i + 1];
            CHECK(n <= 2);
        }
    }
}
