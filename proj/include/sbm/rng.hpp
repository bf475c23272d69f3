#pragma once

#include <cstdint>

namespace sbm {

// Counter-based generator: the i-th output is a pure function of
// (seed, stream, substream, i), so any draw sequence is reproducible
// byte-for-byte across platforms and independent of call interleaving
// elsewhere.  Mixing is SplitMix64 applied to a Weyl sequence.
//
// Stream ids (one per consumer, so pipeline stages never share a sequence):
//   kGraphStream     graph topology draws (attachment targets, edge pairs)
//   kLabelStream     per-edge label draws
//   kParallelStream  parallel-arc augmentation draws
//   kScenarioStream  live-arc coin flips; substream = scenario index
//   kRrStream        reverse-reachable set sampling; substream = sample index
//   kSeedRootStream  root choices for reverse-reachable samples
//   kTestStream      reserved for test fixtures
class CounterRng {
public:
    static constexpr uint64_t kGraphStream = 1;
    static constexpr uint64_t kLabelStream = 2;
    static constexpr uint64_t kParallelStream = 3;
    static constexpr uint64_t kScenarioStream = 4;
    static constexpr uint64_t kRrStream = 5;
    static constexpr uint64_t kSeedRootStream = 6;
    static constexpr uint64_t kTestStream = 99;

    CounterRng(uint64_t seed, uint64_t stream, uint64_t substream = 0)
        : key_(mix(mix(seed) ^ mix(stream * 0x9E3779B97F4A7C15ull + 1) ^
                   mix(substream * 0xBF58476D1CE4E5B9ull + 2))) {}

    uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ull); }

    // Uniform double in [0,1) with 53 random bits.
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), n >= 1, via masked rejection (unbiased).
    uint64_t next_below(uint64_t n) {
        if (n <= 1) return 0;
        uint64_t mask = ~uint64_t(0) >> __builtin_clzll(n - 1);
        for (;;) {
            uint64_t v = next_u64() & mask;
            if (v < n) return v;
        }
    }

    bool bernoulli(double p) { return next_unit() < p; }

    // Number of failures before the first success, success probability q.
    // Trial-by-trial so the result depends only on the draw sequence, not
    // on platform libm.
    int geometric_failures(double q) {
        int v = 0;
        while (!bernoulli(q)) ++v;
        return v;
    }

private:
    static uint64_t mix(uint64_t z) {
        z ^= z >> 30; z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27; z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    uint64_t key_;
    uint64_t counter_ = 0;
};

} // namespace sbm
