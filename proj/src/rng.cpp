#include "ncma/rng.hpp"

#include <cmath>

namespace ncma {

namespace {

std::seed_seq make_seed_seq(const StreamId& id) {
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    return std::seed_seq{lo(id.seed), hi(id.seed), lo(id.point), hi(id.point),
                         lo(id.trial), hi(id.trial)};
}

} // namespace

RandomStream::RandomStream(StreamId id) {
    auto seq = make_seed_seq(id);
    engine_.seed(seq);
}

std::complex<double> RandomStream::complex_gaussian(double variance) {
    const double s = std::sqrt(variance / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

} // namespace ncma
