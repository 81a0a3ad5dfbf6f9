#include "ncma/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

namespace ncma {

std::string to_string(Resource r) {
    switch (r) {
    case Resource::time: return "time";
    case Resource::frequency: return "frequency";
    case Resource::code: return "code";
    }
    return "unknown";
}

Resource parse_resource(const std::string& s) {
    if (s == "time") return Resource::time;
    if (s == "frequency") return Resource::frequency;
    if (s == "code") return Resource::code;
    throw InvalidArgument("unknown orthogonal resource: " + s);
}

void HybridPlan::validate() const {
    require(users >= 1, "plan has no users");
    require(groups.size() == slot_fraction.size() && groups.size() == designs.size(),
            "plan groups, fractions and designs disagree in length");
    std::vector<int> seen(static_cast<std::size_t>(users), 0);
    for (const auto& g : groups) {
        require(!g.empty(), "plan has an empty group");
        for (int u : g) {
            require(u >= 0 && u < users, "plan group references an unknown user");
            ++seen[static_cast<std::size_t>(u)];
        }
    }
    require(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }),
            "plan groups do not partition the users");
    double total = 0.0;
    for (double f : slot_fraction) {
        require(f > 0.0 && f <= 1.0, "slot fraction must lie in (0, 1]");
        total += f;
    }
    require(std::abs(total - 1.0) <= 1e-12, "slot fractions do not sum to 1");
    for (const auto& d : designs) require(d && d->unique, "group design is not injective");
}

HybridPlan make_plan(int users, int group_size, std::size_t order, Resource resource) {
    require(users >= 1, "user count must be >= 1");
    require(group_size >= 1, "group size must be >= 1");
    require(order >= 2 && is_power_of_two(order), "order must be a power of two >= 2");

    HybridPlan plan{.users = users, .group_size = group_size, .order = order,
                    .resource = resource, .groups = {}, .slot_fraction = {}, .designs = {}};
    const int n_groups = (users + group_size - 1) / group_size;
    for (int g = 0; g < n_groups; ++g) {
        std::vector<int> members;
        for (int u = g * group_size; u < std::min(users, (g + 1) * group_size); ++u)
            members.push_back(u);
        const auto size = static_cast<int>(members.size());
        const std::vector<double> unit(members.size(), 1.0);
        plan.designs.push_back(
            std::make_shared<const DesignReport>(make_report(design_eep(size, order), unit,
                                                             Criterion::eep)));
        plan.groups.push_back(std::move(members));
        plan.slot_fraction.push_back(1.0 / n_groups);
    }
    return plan;
}

std::vector<double> rates(const HybridPlan& plan, std::optional<std::size_t> frame_length) {
    plan.validate();
    double framing = 1.0;
    if (frame_length) {
        require(*frame_length >= 1, "frame length must be >= 1");
        framing = static_cast<double>(*frame_length) / static_cast<double>(*frame_length + 1);
    }
    const double bits = static_cast<double>(log2_exact(plan.order));
    std::vector<double> out(static_cast<std::size_t>(plan.users), 0.0);
    for (std::size_t g = 0; g < plan.groups.size(); ++g)
        for (int u : plan.groups[g])
            out[static_cast<std::size_t>(u)] = bits * plan.slot_fraction[g] * framing;
    return out;
}

double sum_rate(const HybridPlan& plan, std::optional<std::size_t> frame_length) {
    const auto r = rates(plan, frame_length);
    return std::accumulate(r.begin(), r.end(), 0.0);
}

ThresholdReport threshold_search(int users, std::span<const int> group_sizes, std::size_t order,
                                 const SimPoint& base, double target_ser, unsigned workers) {
    require(!group_sizes.empty(), "no candidate group sizes");
    require(target_ser > 0.0 && target_ser < 0.5, "target SER must lie in (0, 0.5)");
    require(users >= 1, "user count must be >= 1");

    ThresholdReport report;
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < group_sizes.size(); ++i) {
        const int g = group_sizes[i];
        require(g >= 1, "group size must be >= 1");
        const int simulated = std::min(g, users);
        SimPoint p = base;
        p.channel.users = simulated;
        p.channel.gains.assign(static_cast<std::size_t>(simulated), base.channel.gains.front());
        p.design = std::make_shared<const DesignReport>(
            make_report(design_eep(simulated, order), p.channel.gains, Criterion::eep));

        GroupCandidate c;
        c.group_size = g;
        c.result = run_point(p, {workers, i});
        for (const auto& u : c.result.users) c.worst_ser = std::max(c.worst_ser, u.ser);
        c.sum_rate = sum_rate(make_plan(users, g, order, Resource::time), base.frame_length);
        c.qualifies = c.worst_ser <= target_ser;
        report.candidates.push_back(std::move(c));
        const auto& cur = report.candidates.back();
        if (cur.qualifies) {
            const auto& b = best ? report.candidates[*best] : cur;
            if (!best || cur.sum_rate > b.sum_rate + 1e-12 ||
                (std::abs(cur.sum_rate - b.sum_rate) <= 1e-12 && cur.group_size < b.group_size))
                best = report.candidates.size() - 1;
        }
    }
    if (best) {
        report.candidates[*best].selected = true;
        report.best_group_size = report.candidates[*best].group_size;
    } else {
        report.fallback = true;
        report.best_group_size = 1;
        for (auto& c : report.candidates)
            if (c.group_size == 1) c.selected = true;
    }
    return report;
}

std::string plan_to_json(const HybridPlan& plan, std::optional<std::size_t> frame_length) {
    using nlohmann::ordered_json;
    const auto r = rates(plan, frame_length);
    ordered_json doc;
    doc["users"] = plan.users;
    doc["group_size"] = plan.group_size;
    doc["order"] = plan.order;
    doc["resource"] = to_string(plan.resource);
    if (frame_length) doc["frame_length"] = *frame_length;
    doc["sum_rate"] = std::accumulate(r.begin(), r.end(), 0.0);
    ordered_json groups = ordered_json::array();
    for (std::size_t g = 0; g < plan.groups.size(); ++g) {
        const auto& d = *plan.designs[g];
        ordered_json rec;
        rec["group"] = g;
        rec["members"] = plan.groups[g];
        rec["slot_fraction"] = plan.slot_fraction[g];
        rec["design"] = "eep(" + std::to_string(plan.groups[g].size()) + "," +
                        std::to_string(plan.order) + ")";
        rec["min_distance"] = d.min_distance;
        rec["papr"] = d.papr;
        ordered_json per_user = ordered_json::array();
        for (int u : plan.groups[g]) per_user.push_back(r[static_cast<std::size_t>(u)]);
        rec["user_rates"] = per_user;
        groups.push_back(rec);
    }
    doc["groups"] = groups;
    return doc.dump(2);
}

void write_threshold_csv(std::ostream& os, const ThresholdReport& report) {
    os << "g,worst_ser,sum_rate,selected\n";
    char buf[128];
    for (const auto& c : report.candidates) {
        std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%d\n", c.group_size, c.worst_ser,
                      c.sum_rate, c.selected ? 1 : 0);
        os << buf;
    }
}

} // namespace ncma
