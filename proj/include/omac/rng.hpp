#pragma once

#include <cstdint>

namespace omac {

// Counter-based generator: the i-th draw of stream s under seed k is a pure
// function of (k, s, i), so draws can be taken in any order or in parallel.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : key_(mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ULL))) {}

    static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t at(std::uint64_t i) const { return mix(key_ ^ mix(i)); }
    double uniform_at(std::uint64_t i) const { return static_cast<double>(at(i) >> 11) * 0x1.0p-53; }

    std::uint64_t next() { return at(counter_++); }
    double uniform() { return uniform_at(counter_++); }
    std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace omac
