#include "ncma/txchain.hpp"

#include <cmath>
#include <limits>

namespace ncma {

SymbolFrame map_bits(std::span<const std::uint8_t> bits, const IndividualConstellation& c) {
    const auto width = static_cast<std::size_t>(c.bits_per_symbol());
    require(!bits.empty(), "bit list is empty");
    require(bits.size() % width == 0,
            "bit count " + std::to_string(bits.size()) + " is not a multiple of " +
                std::to_string(width));
    SymbolFrame frame{c.user_id(), {}};
    frame.indices.reserve(bits.size() / width);
    for (std::size_t i = 0; i < bits.size(); i += width) {
        std::uint32_t label = 0;
        for (std::size_t b = 0; b < width; ++b) {
            require(bits[i + b] <= 1, "bit values must be 0 or 1");
            label = (label << 1) | bits[i + b];
        }
        frame.indices.push_back(static_cast<std::uint32_t>(c.index_of_label(label)));
    }
    return frame;
}

DiffFrame diff_encode(const SymbolFrame& frame, const IndividualConstellation& c) {
    require(!frame.indices.empty(), "symbol frame is empty");
    DiffFrame out;
    out.samples.reserve(frame.indices.size() + 1);
    out.samples.emplace_back(1.0, 0.0);
    for (auto idx : frame.indices) {
        require(idx < c.order(), "symbol index out of range for constellation");
        out.samples.push_back(out.samples.back() * c.symbol(idx));
    }
    return out;
}

SymbolFrame diff_decode(const DiffFrame& frame, const IndividualConstellation& c) {
    require(frame.samples.size() >= 2, "differential frame needs a reference and data");
    SymbolFrame out{c.user_id(), {}};
    out.indices.reserve(frame.data_length());
    for (std::size_t t = 1; t < frame.samples.size(); ++t) {
        const Complex ratio = std::conj(frame.samples[t - 1]) * frame.samples[t];
        std::uint32_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < c.order(); ++m) {
            const double d = std::norm(ratio - c.symbol(m));
            if (d < best_d) {
                best_d = d;
                best = static_cast<std::uint32_t>(m);
            }
        }
        out.indices.push_back(best);
    }
    return out;
}

} // namespace ncma
