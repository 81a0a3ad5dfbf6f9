#include "ncma/catalog.hpp"

#include <cstdio>
#include <cstdlib>
#include <numbers>

#include <json.hpp>

namespace ncma {

namespace {

using nlohmann::ordered_json;

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

std::uint32_t parse_label(const std::string& s, int width) {
    require(static_cast<int>(s.size()) == width,
            "bit label '" + s + "' has the wrong length for this order");
    std::uint32_t v = 0;
    for (char c : s) {
        require(c == '0' || c == '1', "bit label '" + s + "' is not binary");
        v = (v << 1) | static_cast<std::uint32_t>(c - '0');
    }
    return v;
}

} // namespace

double round_significant12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

std::string catalog_to_json(std::span<const IndividualConstellation> constellations,
                            Criterion criterion) {
    ordered_json doc;
    doc["criterion"] = to_string(criterion);
    ordered_json users = ordered_json::array();
    for (const auto& c : constellations) {
        ordered_json rec;
        rec["user_id"] = c.user_id();
        rec["M"] = c.order();
        ordered_json phases = ordered_json::array();
        ordered_json bits = ordered_json::array();
        for (std::size_t i = 0; i < c.order(); ++i) {
            phases.push_back(round_significant12(c.phase(i) * kRadToDeg));
            bits.push_back(c.bit_string(i));
        }
        rec["phases_deg"] = phases;
        rec["bit_map"] = bits;
        users.push_back(rec);
    }
    doc["users"] = users;
    return doc.dump(2) + "\n";
}

Catalog catalog_from_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("catalog is not valid JSON: ") + e.what());
    }
    require(doc.is_object() && doc.contains("users") && doc["users"].is_array(),
            "catalog must be an object with a 'users' array");
    Catalog cat;
    if (doc.contains("criterion")) {
        require(doc["criterion"].is_string(), "catalog criterion must be a string");
        cat.criterion = parse_criterion(doc["criterion"].get<std::string>());
    }
    try {
        for (const auto& rec : doc["users"]) {
            require(rec.is_object(), "catalog user record must be an object");
            for (const auto& [key, _] : rec.items())
                require(key == "user_id" || key == "M" || key == "phases_deg" || key == "bit_map",
                        "unknown catalog key: " + key);
            const int user_id = rec.at("user_id").get<int>();
            const auto order = rec.at("M").get<std::size_t>();
            const auto deg = rec.at("phases_deg").get<std::vector<double>>();
            const auto bits = rec.at("bit_map").get<std::vector<std::string>>();
            require(order >= 2 && is_power_of_two(order), "catalog M must be a power of two");
            require(deg.size() == order && bits.size() == order,
                    "catalog record lengths do not match M");
            const int width = log2_exact(order);
            std::vector<double> phases;
            std::vector<std::uint32_t> labels;
            for (std::size_t i = 0; i < order; ++i) {
                phases.push_back(deg[i] / kRadToDeg);
                labels.push_back(parse_label(bits[i], width));
            }
            cat.constellations.emplace_back(user_id, std::move(phases), std::move(labels));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed catalog record: ") + e.what());
    }
    require(!cat.constellations.empty(), "catalog has no users");
    return cat;
}

void write_joint_csv(std::ostream& os, const JointConstellation& joint) {
    os << "tuple,re,im\n";
    char buf[96];
    for (std::size_t p = 0; p < joint.size(); ++p) {
        std::string tuple;
        for (auto v : joint.tuple(p)) {
            if (!tuple.empty()) tuple += ':';
            tuple += std::to_string(v);
        }
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", joint.point(p).real(),
                      joint.point(p).imag());
        os << tuple << buf;
    }
}

void write_cloud_csv(std::ostream& os, std::span<const CloudSample> cloud) {
    os << "t,re,im,sent\n";
    char buf[128];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g,%zu\n", i, cloud[i].z.real(),
                      cloud[i].z.imag(), cloud[i].sent);
        os << buf;
    }
}

} // namespace ncma
