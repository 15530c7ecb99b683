// Seedable deterministic random source used everywhere randomness is
// needed. Built on std::mt19937_64, whose output sequence is pinned by the
// C++ standard, with fixed draw derivations (documented below and in the
// README) so any implementation in any language can reproduce the exact
// stream:
//
//   next_u64()     raw mt19937_64 output, seeded via mt19937_64(seed)
//   next_double()  (next_u64() >> 11) * 2^-53, uniform in [0, 1)
//   uniform(a, b)  a + (b - a) * next_double()
//   next_index(n)  next_u64() % n
//   bernoulli(p)   next_double() < p
//
// Distribution adapters from <random> are deliberately not used; their
// sequences are implementation-defined.
#pragma once

#include <cstdint>
#include <random>

namespace gridres {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    // Index in [0, n); modulo bias is negligible for the n used here.
    std::uint64_t next_index(std::uint64_t n) { return next_u64() % n; }

    bool bernoulli(double p) { return next_double() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace gridres
