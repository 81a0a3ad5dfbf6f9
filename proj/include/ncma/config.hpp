#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncma/channel.hpp"
#include "ncma/constellation.hpp"
#include "ncma/simkit.hpp"

namespace ncma {

using Json = nlohmann::ordered_json;

// Flat simulation config shared by the simulate/sweep/hybrid/dump-cloud
// commands and by scenario presets. Angles are in degrees here and radians
// everywhere else.
struct SimConfig {
    Criterion criterion = Criterion::eep;
    int users = 2;
    std::size_t order = 4;
    std::vector<double> gammas;       // uep only
    std::vector<double> offsets_deg;  // uep only; empty means grid-searched
    std::vector<double> gains;        // empty means all 1.0
    int antennas = 128;
    FadingModel model = FadingModel::rayleigh;
    double kappa = 0.0;
    double rho = 1.0;
    double snr_db = 10.0;
    std::size_t frame_length = kDefaultFrameLength;
    std::size_t frames_per_trial = 1;
    std::size_t max_trials = 1000;
    std::size_t min_errors = 100;
    std::uint64_t seed = 1;

    std::vector<double> resolved_gains() const;
};

// Keys understood by SimConfig, in output order.
const std::vector<std::string>& sim_config_keys();

Json to_json(const SimConfig& cfg);

// Overlays the keys of `doc` on `cfg`. Keys outside sim_config_keys() and
// `extra_allowed` are rejected.
void merge_json(SimConfig& cfg, const Json& doc, const std::set<std::string>& extra_allowed = {});

// Builds the design named by cfg (EEP or UEP) under the configured gains.
DesignReport build_design(const SimConfig& cfg);

// UEP offsets in radians; grid-searched when cfg.offsets_deg is empty.
std::vector<double> resolved_offsets(const SimConfig& cfg);

ChannelConfig channel_config(const SimConfig& cfg);
SimPoint sim_point(const SimConfig& cfg);

} // namespace ncma
