#include "ncma/receiver.hpp"

#include <limits>

namespace ncma {

DetectionStat correlate(const ComplexMatrix& y, int antennas) {
    require(y.rows() >= 2, "received block needs at least two time samples");
    require(antennas >= 0 && static_cast<std::size_t>(antennas) <= y.cols(),
            "antenna count exceeds received columns");
    const std::size_t R = antennas == 0 ? y.cols() : static_cast<std::size_t>(antennas);
    require(R >= 1, "received block has no antennas");

    DetectionStat stat;
    stat.antennas_used = static_cast<int>(R);
    stat.z.reserve(y.rows() - 1);
    const double scale = 1.0 / static_cast<double>(R);
    for (std::size_t t = 1; t < y.rows(); ++t) {
        const auto prev = y.row(t - 1);
        const auto cur = y.row(t);
        Complex acc{0.0, 0.0};
        for (std::size_t r = 0; r < R; ++r) acc += std::conj(prev[r]) * cur[r];
        stat.z.push_back(acc * scale);
    }
    return stat;
}

std::size_t nearest_point(const JointConstellation& joint, Complex z) {
    const auto& pts = joint.points();
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < pts.size(); ++p) {
        const double d = std::norm(z - pts[p]);
        if (d < best_d) {
            best_d = d;
            best = p;
        }
    }
    return best;
}

DetectionResult demap(const DetectionStat& stat, const JointConstellation& joint,
                      std::span<const IndividualConstellation> constellations) {
    require(constellations.size() == joint.users(), "constellation count does not match joint");
    const std::size_t K = joint.users();
    const std::size_t T = stat.z.size();
    DetectionResult out;
    out.joint_indices.reserve(T);
    out.per_user_indices.assign(K, std::vector<std::uint32_t>(T));
    for (std::size_t t = 0; t < T; ++t) {
        const std::size_t p = nearest_point(joint, stat.z[t]);
        out.joint_indices.push_back(p);
        const auto tuple = joint.tuple(p);
        for (std::size_t k = 0; k < K; ++k) out.per_user_indices[k][t] = tuple[k];
    }
    out.per_user_bits = decide_bits(out, constellations);
    return out;
}

std::vector<Bits> decide_bits(const DetectionResult& result,
                              std::span<const IndividualConstellation> constellations) {
    require(result.per_user_indices.size() == constellations.size(),
            "constellation count does not match detection result");
    std::vector<Bits> bits(constellations.size());
    for (std::size_t k = 0; k < constellations.size(); ++k) {
        const auto& c = constellations[k];
        const auto width = c.bits_per_symbol();
        auto& out = bits[k];
        out.reserve(result.per_user_indices[k].size() * static_cast<std::size_t>(width));
        for (auto idx : result.per_user_indices[k]) {
            const auto label = c.label(idx);
            for (int b = width - 1; b >= 0; --b)
                out.push_back(static_cast<std::uint8_t>((label >> b) & 1u));
        }
    }
    return bits;
}

} // namespace ncma
