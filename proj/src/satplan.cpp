#include "ncma/satplan.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <set>
#include <tuple>

namespace ncma {

std::string to_string(Polarization p) { return p == Polarization::rhcp ? "RHCP" : "LHCP"; }

std::vector<Color> FrequencyPlan::palette() const {
    std::vector<Color> out;
    out.reserve(static_cast<std::size_t>(color_count()));
    for (int c = 0; c < n_const_sets; ++c)
        for (int p = 0; p < n_pol; ++p)
            for (int f = 0; f < n_freq; ++f)
                out.push_back({f, p == 0 ? Polarization::rhcp : Polarization::lhcp, c});
    return out;
}

int FrequencyPlan::colors_in_use() const {
    std::set<std::tuple<int, int, int>> used;
    for (const auto& b : beams)
        used.emplace(b.color.freq_index, static_cast<int>(b.color.polarization),
                     b.color.const_set_index);
    return static_cast<int>(used.size());
}

void FrequencyPlan::validate() const {
    require(n_freq >= 1, "plan needs at least one frequency");
    require(n_pol == 1 || n_pol == 2, "plan polarization count must be 1 or 2");
    require(n_const_sets >= 1, "plan needs at least one constellation set");
    require(!beams.empty(), "plan has no beams");
    require(bandwidth_per_beam > 0.0, "beam bandwidth must be positive");
    require(base_capacity_per_beam > 0.0, "beam capacity must be positive");
    for (const auto& b : beams) {
        const auto& c = b.color;
        require(c.freq_index >= 0 && c.freq_index < n_freq, "beam frequency index out of bounds");
        require(c.const_set_index >= 0 && c.const_set_index < n_const_sets,
                "beam constellation set out of bounds");
        require(n_pol == 2 || c.polarization == Polarization::rhcp,
                "beam polarization out of bounds");
    }
}

FrequencyPlan build_plan(int n_freq, int n_pol, int n_const_sets, std::span<const int> beam_ids,
                         std::span<const int> pattern, double bandwidth_per_beam,
                         double base_capacity_per_beam) {
    FrequencyPlan plan;
    plan.n_freq = n_freq;
    plan.n_pol = n_pol;
    plan.n_const_sets = n_const_sets;
    plan.bandwidth_per_beam = bandwidth_per_beam;
    plan.base_capacity_per_beam = base_capacity_per_beam;
    require(n_freq >= 1 && n_const_sets >= 1 && (n_pol == 1 || n_pol == 2),
            "plan dimensions out of range");
    require(!beam_ids.empty(), "plan has no beams");

    const auto colors = plan.palette();
    std::vector<int> cycle(pattern.begin(), pattern.end());
    if (cycle.empty())
        for (int i = 0; i < plan.color_count(); ++i) cycle.push_back(i);
    for (int c : cycle)
        require(c >= 0 && c < plan.color_count(), "repeat pattern references an unknown colour");

    std::set<int> ids;
    for (std::size_t i = 0; i < beam_ids.size(); ++i) {
        require(ids.insert(beam_ids[i]).second, "duplicate beam id");
        plan.beams.push_back(
            {beam_ids[i], colors[static_cast<std::size_t>(cycle[i % cycle.size()])]});
    }
    plan.validate();
    return plan;
}

CapacityReport beam_capacity(const FrequencyPlan& plan) {
    plan.validate();
    CapacityReport r;
    r.bandwidth_per_beam = plan.bandwidth_per_beam;
    r.system_bandwidth = plan.bandwidth_per_beam * plan.n_freq;
    const double per_beam = plan.base_capacity_per_beam * plan.n_const_sets;
    for (const auto& b : plan.beams) {
        r.beams.push_back({b.beam_id, per_beam, plan.bandwidth_per_beam});
        r.total_capacity += per_beam;
    }
    return r;
}

void write_plan_csv(std::ostream& os, const FrequencyPlan& plan) {
    const auto cap = beam_capacity(plan);
    os << "beam_id,freq_index,polarization,const_set_index,capacity\n";
    char buf[160];
    for (std::size_t i = 0; i < plan.beams.size(); ++i) {
        const auto& b = plan.beams[i];
        std::snprintf(buf, sizeof buf, "%d,%d,%s,%d,%.10g\n", b.beam_id, b.color.freq_index,
                      to_string(b.color.polarization).c_str(), b.color.const_set_index,
                      cap.beams[i].capacity);
        os << buf;
    }
}

// ---------------------------------------------------------------------------
// Scenario presets. Numeric values are illustrative desk-scale defaults.

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"vsat_uplink", "mega_leo_gw", "mega_leo_maritime",
                                                "terrestrial_ntn"};
    return names;
}

ScenarioPreset scenario_preset(const std::string& name) {
    ScenarioPreset p;
    p.name = name;
    p.direction = "uplink";
    p.n_freq = 2;
    p.n_pol = 2;
    if (name == "vsat_uplink") {
        p.receiver_site = "satellite_payload";
        p.orbit = "GEO";
        p.description = "VSAT terminals in one GEO HTS beam share the uplink by constellation";
        p.sim.criterion = Criterion::eep;
        p.sim.users = 4;
        p.sim.order = 2;
        p.sim.model = FadingModel::rician;
        p.sim.kappa = 10.0;
        p.sim.antennas = 256;
        p.sim.snr_db = 10.0;
        p.n_const_sets = 2;
    } else if (name == "mega_leo_gw") {
        p.receiver_site = "satellite_payload";
        p.orbit = "LEO";
        p.description = "gateway stations reach one LEO satellite with distinct constellations";
        p.sim.criterion = Criterion::eep;
        p.sim.users = 2;
        p.sim.order = 4;
        p.sim.model = FadingModel::rician;
        p.sim.kappa = 5.0;
        p.sim.antennas = 256;
        p.sim.snr_db = 10.0;
        p.n_const_sets = 2;
    } else if (name == "mega_leo_maritime") {
        p.receiver_site = "satellite_payload";
        p.orbit = "LEO";
        p.description = "ships under one LEO beam share access by constellation";
        p.sim.criterion = Criterion::eep;
        p.sim.users = 4;
        p.sim.order = 2;
        p.sim.model = FadingModel::gauss_markov;
        p.sim.rho = 0.99;
        p.sim.antennas = 256;
        p.sim.snr_db = 10.0;
        p.n_const_sets = 2;
    } else if (name == "terrestrial_ntn") {
        p.receiver_site = "base_station";
        p.orbit = "LEO";
        p.description = "one terrestrial and one non-terrestrial user in the same beam, UEP";
        p.sim.criterion = Criterion::uep;
        p.sim.users = 2;
        p.sim.order = 4;
        p.sim.gammas = {1.0, 0.7};
        p.sim.model = FadingModel::rayleigh;
        p.sim.antennas = 128;
        p.sim.snr_db = 10.0;
        p.n_const_sets = 2;
    } else {
        throw InvalidArgument("unknown scenario preset: " + name);
    }
    if (p.sim.criterion == Criterion::uep && p.sim.offsets_deg.empty()) {
        for (double r : resolved_offsets(p.sim))
            p.sim.offsets_deg.push_back(r * 180.0 / std::numbers::pi);
    }
    return p;
}

const std::set<std::string>& preset_metadata_keys() {
    static const std::set<std::string> keys{"scenario",   "direction", "receiver_site",
                                            "orbit",      "description", "n_freq",
                                            "n_pol",      "n_const_sets", "provenance"};
    return keys;
}

Json preset_to_json(const ScenarioPreset& preset) {
    Json doc;
    doc["scenario"] = preset.name;
    doc["direction"] = preset.direction;
    doc["receiver_site"] = preset.receiver_site;
    doc["orbit"] = preset.orbit;
    doc["description"] = preset.description;
    doc["provenance"] = "illustrative defaults for desk-scale runs";
    doc["n_freq"] = preset.n_freq;
    doc["n_pol"] = preset.n_pol;
    doc["n_const_sets"] = preset.n_const_sets;
    const Json sim = to_json(preset.sim);
    for (const auto& [k, v] : sim.items()) doc[k] = v;
    return doc;
}

} // namespace ncma
