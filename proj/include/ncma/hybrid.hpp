#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ncma/constellation.hpp"
#include "ncma/simkit.hpp"

namespace ncma {

enum class Resource { time, frequency, code };

std::string to_string(Resource r);
Resource parse_resource(const std::string& s);

/// Users split into groups separated by an orthogonal resource; members of a
/// group share the resource through an EEP constellation design.
struct HybridPlan {
    int users = 0;
    int group_size = 0;
    std::size_t order = 0;
    Resource resource = Resource::time;
    std::vector<std::vector<int>> groups;
    std::vector<double> slot_fraction;
    std::vector<std::shared_ptr<const DesignReport>> designs;  // one per group

    void validate() const;
};

// ceil(N/g) consecutive groups, the last one smaller when g does not divide N.
// Throws CollisionError when EEP(group size, M) is not injective.
HybridPlan make_plan(int users, int group_size, std::size_t order, Resource resource);

// Per-user uncoded rate in bits per channel use, indexed by user id:
// log2(M) * slot_fraction * T/(T+1). No frame length means T -> infinity.
std::vector<double> rates(const HybridPlan& plan,
                          std::optional<std::size_t> frame_length = std::nullopt);

double sum_rate(const HybridPlan& plan, std::optional<std::size_t> frame_length = std::nullopt);

struct GroupCandidate {
    int group_size = 0;
    double worst_ser = 0.0;
    double sum_rate = 0.0;
    bool qualifies = false;
    bool selected = false;
    SimResult result;
};

struct ThresholdReport {
    int best_group_size = 1;
    bool fallback = false;
    std::vector<GroupCandidate> candidates;
};

// Simulates one representative group per candidate size with EEP(g, M)
// under base.channel (every gain set to base gain 0). Among sizes whose worst
// user SER <= target, picks the largest sum rate (smallest g on ties); if
// none qualifies returns g = 1 flagged as fallback.
ThresholdReport threshold_search(int users, std::span<const int> group_sizes, std::size_t order,
                                 const SimPoint& base, double target_ser, unsigned workers = 1);

// Structured-text plan export (JSON).
std::string plan_to_json(const HybridPlan& plan, std::optional<std::size_t> frame_length);

// CSV: g,worst_ser,sum_rate,selected.
void write_threshold_csv(std::ostream& os, const ThresholdReport& report);

} // namespace ncma
