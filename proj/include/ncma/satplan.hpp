#pragma once

#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ncma/config.hpp"

namespace ncma {

enum class Polarization { rhcp, lhcp };

std::string to_string(Polarization p);

// A reuse colour: (frequency, polarization, constellation set).
struct Color {
    int freq_index = 0;
    Polarization polarization = Polarization::rhcp;
    int const_set_index = 0;

    bool operator==(const Color&) const = default;
};

struct Beam {
    int beam_id = 0;
    Color color;
};

inline constexpr double kDefaultBeamBandwidthHz = 250e6;
inline constexpr double kDefaultBeamCapacityBps = 500e6;

struct FrequencyPlan {
    int n_freq = 1;
    int n_pol = 1;
    int n_const_sets = 1;
    std::vector<Beam> beams;
    double bandwidth_per_beam = kDefaultBeamBandwidthHz;
    double base_capacity_per_beam = kDefaultBeamCapacityBps;

    // Distinguishable colours, n_freq * n_pol * n_const_sets.
    int color_count() const { return n_freq * n_pol * n_const_sets; }

    // All colours in canonical order: frequency fastest, then polarization,
    // then constellation set. The first n_freq*n_pol entries are the classic
    // frequency/polarization reuse colours.
    std::vector<Color> palette() const;

    int colors_in_use() const;
    void validate() const;
};

// Beam i gets palette()[pattern[i % |pattern|]]; an empty pattern cycles the
// whole palette in canonical order.
FrequencyPlan build_plan(int n_freq, int n_pol, int n_const_sets, std::span<const int> beam_ids,
                         std::span<const int> pattern = {},
                         double bandwidth_per_beam = kDefaultBeamBandwidthHz,
                         double base_capacity_per_beam = kDefaultBeamCapacityBps);

struct BeamCapacity {
    int beam_id = 0;
    double capacity = 0.0;   // bits/s
    double bandwidth = 0.0;  // Hz
};

struct CapacityReport {
    std::vector<BeamCapacity> beams;
    double total_capacity = 0.0;
    double bandwidth_per_beam = 0.0;
    double system_bandwidth = 0.0;  // n_freq * bandwidth_per_beam
};

// Each beam carries base capacity times the number of constellation sets;
// bandwidth is untouched by the constellation dimension.
CapacityReport beam_capacity(const FrequencyPlan& plan);

// CSV: beam_id,freq_index,polarization,const_set_index,capacity.
void write_plan_csv(std::ostream& os, const FrequencyPlan& plan);

struct ScenarioPreset {
    std::string name;
    std::string direction;      // uplink | downlink
    std::string receiver_site;  // where the non-coherent massive MIMO receiver sits
    std::string orbit;
    std::string description;
    SimConfig sim;
    int n_freq = 2;
    int n_pol = 2;
    int n_const_sets = 1;
};

const std::vector<std::string>& scenario_names();

// Illustrative desk-scale defaults for each deployment scenario.
ScenarioPreset scenario_preset(const std::string& name);

// Metadata keys a preset document adds on top of the simulation keys.
const std::set<std::string>& preset_metadata_keys();

// Complete, flat simulation config document for the preset.
Json preset_to_json(const ScenarioPreset& preset);

} // namespace ncma
