#pragma once

#include <span>
#include <vector>

#include "ncma/constellation.hpp"
#include "ncma/matrix.hpp"
#include "ncma/txchain.hpp"

namespace ncma {

// Antenna-averaged differential statistic, one sample per data symbol.
struct DetectionStat {
    std::vector<Complex> z;
    int antennas_used = 0;
};

struct DetectionResult {
    std::vector<std::vector<std::uint32_t>> per_user_indices;  // [user][t]
    std::vector<Bits> per_user_bits;
    std::vector<std::size_t> joint_indices;
};

// z[t-1] = (1/R) * sum_r conj(Y[t-1][r]) * Y[t][r] for t = 1..T.
// `antennas` selects the first R columns of Y; 0 means all of them.
DetectionStat correlate(const ComplexMatrix& y, int antennas = 0);

// Index of the nearest joint point; ties go to the lowest index.
std::size_t nearest_point(const JointConstellation& joint, Complex z);

// Nearest-joint-point decision per sample, split into per-user symbols and
// bits through the demap table and each user's labels.
DetectionResult demap(const DetectionStat& stat, const JointConstellation& joint,
                      std::span<const IndividualConstellation> constellations);

// Inverse of map_bits per user.
std::vector<Bits> decide_bits(const DetectionResult& result,
                              std::span<const IndividualConstellation> constellations);

} // namespace ncma
