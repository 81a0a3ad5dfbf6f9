#include "ncma/channel.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace ncma {

std::string to_string(FadingModel m) {
    switch (m) {
    case FadingModel::rayleigh: return "rayleigh";
    case FadingModel::rician: return "rician";
    case FadingModel::gauss_markov: return "gauss_markov";
    }
    return "unknown";
}

FadingModel parse_fading_model(const std::string& s) {
    if (s == "rayleigh") return FadingModel::rayleigh;
    if (s == "rician") return FadingModel::rician;
    if (s == "gauss_markov" || s == "gauss-markov") return FadingModel::gauss_markov;
    throw InvalidArgument("unknown fading model: " + s);
}

void ChannelConfig::validate() const {
    require(users >= 1, "channel needs at least one user");
    require(antennas >= 1, "antenna count must be >= 1");
    require(gains.size() == static_cast<std::size_t>(users), "one gain per user is required");
    for (double g : gains) require(std::isfinite(g) && g > 0.0, "gains must be positive");
    require(std::isfinite(kappa) && kappa >= 0.0, "kappa must be >= 0");
    require(rho >= 0.0 && rho <= 1.0, "rho must lie in [0, 1]");
    require(!std::isnan(snr_db) && snr_db != -INFINITY, "snr_db must be a number or +inf");
}

double ChannelConfig::noise_variance() const {
    if (std::isinf(snr_db) && snr_db > 0) return 0.0;
    const double total = std::accumulate(gains.begin(), gains.end(), 0.0);
    return total / std::pow(10.0, snr_db / 10.0);
}

ChannelRealization::ChannelRealization(std::size_t length, std::size_t antennas,
                                       std::size_t users, bool time_varying,
                                       double noise_variance)
    : length_(length),
      antennas_(antennas),
      users_(users),
      time_varying_(time_varying),
      noise_variance_(noise_variance),
      gains_((time_varying ? length : 1) * antennas * users) {}

ChannelRealization realize(const ChannelConfig& cfg, std::size_t length, RandomStream& rng) {
    cfg.validate();
    require(length >= 2, "channel length must cover a reference and one data sample");
    const auto R = static_cast<std::size_t>(cfg.antennas);
    const auto K = static_cast<std::size_t>(cfg.users);
    const bool varying = cfg.model == FadingModel::gauss_markov;
    ChannelRealization ch(length, R, K, varying, cfg.noise_variance());

    if (!varying) {
        // rayleigh is rician with kappa = 0: one code path, one draw order.
        const double kappa = cfg.model == FadingModel::rician ? cfg.kappa : 0.0;
        ch.los_phases.resize(K);
        for (auto& phi : ch.los_phases) phi = 2.0 * std::numbers::pi * rng.uniform();
        for (std::size_t r = 0; r < R; ++r) {
            for (std::size_t k = 0; k < K; ++k) {
                const double a = cfg.gains[k];
                const Complex g = rng.complex_gaussian(1.0);
                const Complex los = std::polar(std::sqrt(a * kappa / (kappa + 1.0)), ch.los_phases[k]);
                ch.at(0, r, k) = los + std::sqrt(a / (kappa + 1.0)) * g;
            }
        }
        return ch;
    }

    const double innovation = std::sqrt(1.0 - cfg.rho * cfg.rho);
    for (std::size_t t = 0; t < length; ++t) {
        for (std::size_t r = 0; r < R; ++r) {
            for (std::size_t k = 0; k < K; ++k) {
                const Complex w = rng.complex_gaussian(cfg.gains[k]);
                ch.at(t, r, k) = t == 0 ? w : cfg.rho * ch.at(t - 1, r, k) + innovation * w;
            }
        }
    }
    return ch;
}

ComplexMatrix apply(const ChannelRealization& ch, std::span<const DiffFrame> frames,
                    RandomStream& rng) {
    if (frames.size() != ch.users())
        throw InvalidArgument("frame count does not match channel user count");
    for (const auto& f : frames)
        if (f.samples.size() != ch.length())
            throw InvalidArgument("frame length does not match channel length");

    const std::size_t T = ch.length();
    const std::size_t R = ch.antennas();
    const std::size_t K = ch.users();
    const double nv = ch.noise_variance();
    ComplexMatrix y(T, R);
    for (std::size_t t = 0; t < T; ++t) {
        auto row = y.row(t);
        for (std::size_t r = 0; r < R; ++r) {
            Complex acc{0.0, 0.0};
            for (std::size_t k = 0; k < K; ++k) acc += ch.at(t, r, k) * frames[k].samples[t];
            if (nv > 0.0) acc += rng.complex_gaussian(nv);
            row[r] = acc;
        }
    }
    return y;
}

} // namespace ncma
