#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ncma/constellation.hpp"
#include "ncma/matrix.hpp"
#include "ncma/rng.hpp"
#include "ncma/txchain.hpp"

namespace ncma {

enum class FadingModel { rayleigh, rician, gauss_markov };

std::string to_string(FadingModel m);
FadingModel parse_fading_model(const std::string& s);

struct ChannelConfig {
    int users = 1;
    int antennas = 1;
    FadingModel model = FadingModel::rayleigh;
    double kappa = 0.0;  // rician K-factor (LOS power / scattered power)
    double rho = 1.0;    // gauss-markov lag-1 correlation
    std::vector<double> gains{1.0};  // E|h_k|^2
    double snr_db = 10.0;            // +inf means noiseless
    std::uint64_t seed = 1;

    void validate() const;

    // Total complex noise power per antenna sample:
    // sum(gains) / sigma^2 = 10^(snr_db / 10).
    double noise_variance() const;
};

/// Complex gains h[t][r][k] for one frame.
///
/// Block-fading models (rayleigh, rician) hold one time slice that applies to
/// every sample of the frame.
class ChannelRealization {
public:
    ChannelRealization(std::size_t length, std::size_t antennas, std::size_t users,
                       bool time_varying, double noise_variance);

    std::size_t length() const { return length_; }
    std::size_t antennas() const { return antennas_; }
    std::size_t users() const { return users_; }
    bool time_varying() const { return time_varying_; }
    double noise_variance() const { return noise_variance_; }

    Complex& at(std::size_t t, std::size_t r, std::size_t k) {
        return gains_[index(t, r, k)];
    }
    const Complex& at(std::size_t t, std::size_t r, std::size_t k) const {
        return gains_[index(t, r, k)];
    }

    // Per-user LOS phases drawn for this realization (also drawn, unused,
    // for rayleigh so both models consume the stream identically).
    std::vector<double> los_phases;

private:
    std::size_t index(std::size_t t, std::size_t r, std::size_t k) const {
        return ((time_varying_ ? t : 0) * antennas_ + r) * users_ + k;
    }

    std::size_t length_;
    std::size_t antennas_;
    std::size_t users_;
    bool time_varying_;
    double noise_variance_;
    std::vector<Complex> gains_;
};

ChannelRealization realize(const ChannelConfig& cfg, std::size_t length, RandomStream& rng);

// Y[t][r] = sum_k h[t][r][k] * s_k[t] + n[t][r].
ComplexMatrix apply(const ChannelRealization& ch, std::span<const DiffFrame> frames,
                    RandomStream& rng);

} // namespace ncma
