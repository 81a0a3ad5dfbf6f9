#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ncma/constellation.hpp"

namespace ncma {

using Bits = std::vector<std::uint8_t>;

// One user's data symbols for a frame (T entries).
struct SymbolFrame {
    int user_id = 0;
    std::vector<std::uint32_t> indices;
};

// Differentially encoded samples, T + 1 entries; samples[0] is the 1+0i
// reference.
struct DiffFrame {
    std::vector<Complex> samples;

    std::size_t data_length() const { return samples.empty() ? 0 : samples.size() - 1; }
};

inline constexpr std::size_t kDefaultFrameLength = 100;

// Groups of log2(M) bits, MSB first, mapped through the constellation's labels.
SymbolFrame map_bits(std::span<const std::uint8_t> bits, const IndividualConstellation& c);

// samples[t] = samples[t-1] * exp(i * phase(indices[t-1])).
DiffFrame diff_encode(const SymbolFrame& frame, const IndividualConstellation& c);

// Inverse of diff_encode on an ideal channel: each consecutive-sample ratio
// is sliced to the nearest phase of c.
SymbolFrame diff_decode(const DiffFrame& frame, const IndividualConstellation& c);

// Uniform random bits for `symbols` symbols of c.
template <class Rng>
Bits random_bits(Rng& rng, std::size_t symbols, const IndividualConstellation& c) {
    Bits bits(symbols * static_cast<std::size_t>(c.bits_per_symbol()));
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
    return bits;
}

} // namespace ncma
