#pragma once

#include <cstdint>
#include <initializer_list>

namespace snngb {

// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Pure function of (master, parts...); no global RNG state.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t h = mix64(master);
    for (auto p : parts) h = mix64(h ^ mix64(p));
    return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return derive_seed(master, {index});
}

} // namespace snngb
