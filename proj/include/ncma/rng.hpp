#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace ncma {

// Identifies one independent random stream: (seed, point, trial).
// Streams with different coordinates are seeded independently, so a
// trial's draws never depend on which worker runs it or in what order.
struct StreamId {
    std::uint64_t seed = 0;
    std::uint64_t point = 0;
    std::uint64_t trial = 0;
};

class RandomStream {
public:
    explicit RandomStream(StreamId id);
    explicit RandomStream(std::uint64_t seed) : RandomStream(StreamId{seed, 0, 0}) {}

    double uniform() { return uniform_(engine_); }
    double normal() { return normal_(engine_); }
    int bit() { return static_cast<int>(engine_() >> 63); }

    // Circularly-symmetric complex Gaussian with E|w|^2 = variance.
    std::complex<double> complex_gaussian(double variance);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace ncma
