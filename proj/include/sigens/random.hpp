#pragma once

#include <cstdint>
#include <random>

namespace sigens {

std::uint64_t splitmix64(std::uint64_t x);

// Seeded random stream with deterministic substreams.
//
// A stream is identified by a 64-bit key. derive(i) hashes (key, i) into a new
// key, so substream i is the same no matter which thread asks for it or in
// which order. This is what keeps Monte Carlo results independent of the
// OpenMP thread count.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed = 0);

    RandomStream derive(std::uint64_t index) const;

    std::uint64_t key() const { return key_; }

    double uniform(double lo, double hi);
    double normal(double mean, double stddev);
    double standard_normal();

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t key_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace sigens
