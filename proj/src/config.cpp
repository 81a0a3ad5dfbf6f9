#include "ncma/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ncma {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double number_or_inf(const Json& v, const std::string& key) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return INFINITY;
    }
    throw InvalidArgument("config key '" + key + "' must be a number");
}

template <class T>
T get_as(const Json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidArgument("config key '" + key + "' has the wrong type");
    }
}

} // namespace

std::vector<double> SimConfig::resolved_gains() const {
    if (gains.empty()) return std::vector<double>(static_cast<std::size_t>(std::max(users, 0)), 1.0);
    return gains;
}

const std::vector<std::string>& sim_config_keys() {
    static const std::vector<std::string> keys{
        "criterion", "users",      "order",      "gammas",           "offsets_deg",
        "gains",     "antennas",   "model",      "kappa",            "rho",
        "snr_db",    "frame_length", "frames_per_trial", "max_trials", "min_errors",
        "seed"};
    return keys;
}

Json to_json(const SimConfig& cfg) {
    Json doc;
    doc["criterion"] = to_string(cfg.criterion);
    doc["users"] = cfg.users;
    doc["order"] = cfg.order;
    doc["gammas"] = cfg.gammas;
    doc["offsets_deg"] = cfg.offsets_deg;
    doc["gains"] = cfg.resolved_gains();
    doc["antennas"] = cfg.antennas;
    doc["model"] = to_string(cfg.model);
    doc["kappa"] = cfg.kappa;
    doc["rho"] = cfg.rho;
    if (std::isinf(cfg.snr_db))
        doc["snr_db"] = "inf";
    else
        doc["snr_db"] = cfg.snr_db;
    doc["frame_length"] = cfg.frame_length;
    doc["frames_per_trial"] = cfg.frames_per_trial;
    doc["max_trials"] = cfg.max_trials;
    doc["min_errors"] = cfg.min_errors;
    doc["seed"] = cfg.seed;
    return doc;
}

void merge_json(SimConfig& cfg, const Json& doc, const std::set<std::string>& extra_allowed) {
    require(doc.is_object(), "config document must be an object");
    const auto& keys = sim_config_keys();
    for (const auto& [key, v] : doc.items()) {
        if (extra_allowed.contains(key)) continue;
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw InvalidArgument("unknown config key: " + key);
        if (key == "criterion") cfg.criterion = parse_criterion(get_as<std::string>(v, key));
        else if (key == "users") cfg.users = get_as<int>(v, key);
        else if (key == "order") cfg.order = get_as<std::size_t>(v, key);
        else if (key == "gammas") cfg.gammas = get_as<std::vector<double>>(v, key);
        else if (key == "offsets_deg") cfg.offsets_deg = get_as<std::vector<double>>(v, key);
        else if (key == "gains") cfg.gains = get_as<std::vector<double>>(v, key);
        else if (key == "antennas") cfg.antennas = get_as<int>(v, key);
        else if (key == "model") cfg.model = parse_fading_model(get_as<std::string>(v, key));
        else if (key == "kappa") cfg.kappa = get_as<double>(v, key);
        else if (key == "rho") cfg.rho = get_as<double>(v, key);
        else if (key == "snr_db") cfg.snr_db = number_or_inf(v, key);
        else if (key == "frame_length") cfg.frame_length = get_as<std::size_t>(v, key);
        else if (key == "frames_per_trial") cfg.frames_per_trial = get_as<std::size_t>(v, key);
        else if (key == "max_trials") cfg.max_trials = get_as<std::size_t>(v, key);
        else if (key == "min_errors") cfg.min_errors = get_as<std::size_t>(v, key);
        else if (key == "seed") cfg.seed = get_as<std::uint64_t>(v, key);
    }
}

std::vector<double> resolved_offsets(const SimConfig& cfg) {
    require(cfg.criterion == Criterion::uep, "offsets only apply to the uep criterion");
    require(cfg.gammas.size() == static_cast<std::size_t>(cfg.users),
            "uep needs one gamma per user");
    if (cfg.offsets_deg.empty()) {
        const double step = 2.0 * std::numbers::pi / static_cast<double>(cfg.order) / 16.0;
        const auto gains = cfg.resolved_gains();
        return optimize_offsets(cfg.users, cfg.order, cfg.gammas, step, gains).offsets;
    }
    require(cfg.offsets_deg.size() == static_cast<std::size_t>(cfg.users),
            "uep needs one offset per user");
    std::vector<double> out;
    for (double d : cfg.offsets_deg) out.push_back(d * kDeg);
    return out;
}

DesignReport build_design(const SimConfig& cfg) {
    const auto gains = cfg.resolved_gains();
    require(gains.size() == static_cast<std::size_t>(cfg.users), "one gain per user is required");
    if (cfg.criterion == Criterion::eep) {
        require(cfg.gammas.empty() && cfg.offsets_deg.empty(),
                "gammas and offsets only apply to the uep criterion");
        return make_report(design_eep(cfg.users, cfg.order), gains, Criterion::eep);
    }
    const auto offsets = resolved_offsets(cfg);
    return make_report(design_uep(cfg.users, cfg.order, cfg.gammas, offsets), gains,
                       Criterion::uep);
}

ChannelConfig channel_config(const SimConfig& cfg) {
    ChannelConfig ch;
    ch.users = cfg.users;
    ch.antennas = cfg.antennas;
    ch.model = cfg.model;
    ch.kappa = cfg.kappa;
    ch.rho = cfg.rho;
    ch.gains = cfg.resolved_gains();
    ch.snr_db = cfg.snr_db;
    ch.seed = cfg.seed;
    ch.validate();
    return ch;
}

SimPoint sim_point(const SimConfig& cfg) {
    SimPoint p;
    p.design = std::make_shared<const DesignReport>(build_design(cfg));
    p.channel = channel_config(cfg);
    p.frame_length = cfg.frame_length;
    p.frames_per_trial = cfg.frames_per_trial;
    p.max_trials = cfg.max_trials;
    p.min_errors = cfg.min_errors;
    p.seed = cfg.seed;
    p.validate();
    return p;
}

} // namespace ncma
