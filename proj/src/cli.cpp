#include "ncma/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "ncma/catalog.hpp"
#include "ncma/config.hpp"
#include "ncma/hybrid.hpp"
#include "ncma/satplan.hpp"
#include "ncma/simkit.hpp"

namespace ncma::cli {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct Common {
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out;
};

// Flags mirroring SimConfig. Only flags actually given override the config
// file, which in turn overrides the defaults.
struct SimFlags {
    std::string config_path;
    std::string criterion;
    int users = 0;
    std::size_t order = 0;
    std::vector<double> gammas, offsets_deg, gains;
    int antennas = 0;
    std::string model;
    double kappa = 0.0, rho = 0.0;
    std::string snr;
    std::size_t frame_length = 0, frames_per_trial = 0, max_trials = 0, min_errors = 0;
    std::map<std::string, CLI::Option*> given;
};

void add_sim_flags(CLI::App* app, SimFlags& f, bool design_flags) {
    app->add_option("--config", f.config_path, "flat JSON config document")->check(CLI::ExistingFile);
    if (design_flags) {
        f.given["criterion"] = app->add_option("--criterion", f.criterion, "eep | uep");
        f.given["users"] = app->add_option("--users,-K", f.users, "user count");
        f.given["order"] = app->add_option("--order,-M", f.order, "constellation order per user");
        f.given["gammas"] = app->add_option("--gammas", f.gammas, "uep spacing factors")->delimiter(',');
        f.given["offsets_deg"] =
            app->add_option("--offsets", f.offsets_deg, "uep base angles, degrees")->delimiter(',');
        f.given["gains"] = app->add_option("--gains", f.gains, "per-user average power")->delimiter(',');
    }
    f.given["antennas"] = app->add_option("--antennas,-R", f.antennas, "receive antennas");
    f.given["model"] = app->add_option("--model", f.model, "rayleigh | rician | gauss_markov");
    f.given["kappa"] = app->add_option("--kappa", f.kappa, "rician K-factor");
    f.given["rho"] = app->add_option("--rho", f.rho, "gauss-markov correlation");
    f.given["snr_db"] = app->add_option("--snr", f.snr, "per-antenna SNR in dB, or inf");
    f.given["frame_length"] = app->add_option("--frame-length", f.frame_length, "data symbols per frame");
    f.given["frames_per_trial"] = app->add_option("--frames-per-trial", f.frames_per_trial);
    f.given["max_trials"] = app->add_option("--max-trials", f.max_trials);
    f.given["min_errors"] = app->add_option("--min-errors", f.min_errors);
}

double parse_snr(const std::string& s) {
    if (s == "inf" || s == "+inf") return INFINITY;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || !std::isfinite(v)) throw InvalidArgument("invalid --snr value: " + s);
    return v;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(path + " is not valid JSON: " + e.what());
    }
}

SimConfig resolve(const SimFlags& f, const Common& common, const SimConfig& defaults) {
    SimConfig cfg = defaults;
    if (!f.config_path.empty()) merge_json(cfg, read_json_file(f.config_path), preset_metadata_keys());
    auto has = [&](const char* key) {
        auto it = f.given.find(key);
        return it != f.given.end() && it->second->count() > 0;
    };
    if (has("criterion")) cfg.criterion = parse_criterion(f.criterion);
    if (has("users")) cfg.users = f.users;
    if (has("order")) cfg.order = f.order;
    if (has("gammas")) cfg.gammas = f.gammas;
    if (has("offsets_deg")) cfg.offsets_deg = f.offsets_deg;
    if (has("gains")) cfg.gains = f.gains;
    if (has("antennas")) cfg.antennas = f.antennas;
    if (has("model")) cfg.model = parse_fading_model(f.model);
    if (has("kappa")) cfg.kappa = f.kappa;
    if (has("rho")) cfg.rho = f.rho;
    if (has("snr_db")) cfg.snr_db = parse_snr(f.snr);
    if (has("frame_length")) cfg.frame_length = f.frame_length;
    if (has("frames_per_trial")) cfg.frames_per_trial = f.frames_per_trial;
    if (has("max_trials")) cfg.max_trials = f.max_trials;
    if (has("min_errors")) cfg.min_errors = f.min_errors;
    cfg.seed = common.seed;
    // A uep design switched to eep by flag should not drag uep parameters along.
    if (cfg.criterion == Criterion::eep && !has("gammas")) cfg.gammas.clear();
    if (cfg.criterion == Criterion::eep && !has("offsets_deg")) cfg.offsets_deg.clear();
    require(cfg.users >= 1, "user count must be >= 1");
    return cfg;
}

void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw DomainError("cannot write " + path);
    write(file);
    if (!file) throw DomainError("failed writing " + path);
}

std::string fmt(double v, int precision = 12) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

void config_comment(std::ostream& os, const Json& cfg) { os << "# config: " << cfg.dump() << '\n'; }

// --- design / validate -----------------------------------------------------

void print_design(std::ostream& os, const DesignReport& r) {
    os << "criterion: " << to_string(r.criterion) << '\n';
    os << "users: " << r.constellations.size() << '\n';
    const double base = r.constellations.front().phase(0);
    for (const auto& c : r.constellations) {
        os << "user " << c.user_id() << ": M=" << c.order() << " phases_deg";
        for (double p : c.phases()) os << ' ' << fmt(round_significant12(p * kRadToDeg));
        os << "  bits";
        for (std::size_t i = 0; i < c.order(); ++i) os << ' ' << c.bit_string(i);
        if (c.user_id() > 0)
            os << "  rotation_deg " << fmt(round_significant12(wrap_phase(c.phase(0) - base) * kRadToDeg));
        os << '\n';
    }
    os << "joint_points: " << r.joint.size() << '\n';
    os << "unique: " << (r.unique ? "yes" : "no") << '\n';
    if (r.collision)
        os << "collision: " << format_tuple(r.collision->tuple_a) << " and "
           << format_tuple(r.collision->tuple_b) << '\n';
    os << "min_distance: " << fmt(r.min_distance) << '\n';
    os << "papr: " << fmt(r.papr) << " (" << fmt(10.0 * std::log10(r.papr), 4) << " dB)\n";
}

int cmd_design(const SimFlags& f, const Common& common, const std::string& catalog_path,
               const std::string& joint_csv, std::ostream& out, std::ostream& err) {
    SimConfig defaults;
    defaults.users = 1;
    const auto cfg = resolve(f, common, defaults);
    DesignReport report;
    try {
        report = build_design(cfg);
    } catch (const CollisionError& e) {
        emit(common.out, out, [&](std::ostream& os) {
            os << "unique: no\n";
            os << "collision: " << format_tuple(e.witness().tuple_a) << " and "
               << format_tuple(e.witness().tuple_b) << '\n';
        });
        err << "error: " << e.what() << '\n';
        return refused;
    }
    emit(common.out, out, [&](std::ostream& os) { print_design(os, report); });
    if (!report.unique) {
        err << "error: design is not injective\n";
        return refused;
    }
    if (!catalog_path.empty())
        emit(catalog_path, out, [&](std::ostream& os) {
            os << catalog_to_json(report.constellations, report.criterion);
        });
    if (!joint_csv.empty())
        emit(joint_csv, out, [&](std::ostream& os) { write_joint_csv(os, report.joint); });
    return ok;
}

int cmd_validate(const std::string& catalog_path, std::vector<double> gains, double tol,
                 const Common& common, std::ostream& out, std::ostream& err) {
    std::ifstream in(catalog_path);
    if (!in) throw InvalidArgument("cannot open " + catalog_path);
    std::stringstream text;
    text << in.rdbuf();
    auto cat = catalog_from_json(text.str());
    if (gains.empty()) gains.assign(cat.constellations.size(), 1.0);
    const auto joint = build_joint(cat.constellations, gains);
    const auto collision = validate_unique(joint, tol);
    emit(common.out, out, [&](std::ostream& os) {
        os << "users: " << cat.constellations.size() << '\n';
        os << "joint_points: " << joint.size() << '\n';
        os << "unique: " << (collision ? "no" : "yes") << '\n';
        if (collision)
            os << "collision: " << format_tuple(collision->tuple_a) << " and "
               << format_tuple(collision->tuple_b) << '\n';
        os << "min_distance: " << fmt(min_distance(joint, tol).value) << '\n';
        os << "papr: " << fmt(papr(joint)) << '\n';
    });
    if (collision) {
        err << "error: joint constellation has coinciding symbols\n";
        return refused;
    }
    return ok;
}

// --- simulation commands ---------------------------------------------------

int cmd_sweep(const SimFlags& f, const Common& common, const std::string& axis_name,
              const std::vector<double>& values, std::ostream& out) {
    const auto cfg = resolve(f, common, SimConfig{});
    const auto axis = parse_sweep_axis(axis_name);
    const auto base = sim_point(cfg);
    const auto table = sweep(base, axis, values, common.threads);
    Json doc = to_json(cfg);
    doc["command"] = "sweep";
    doc["axis"] = to_string(axis);
    doc["values"] = values;
    emit(common.out, out, [&](std::ostream& os) {
        config_comment(os, doc);
        write_results_csv(os, table);
    });
    return ok;
}

int cmd_simulate(const SimFlags& f, const Common& common, std::ostream& out) {
    const auto cfg = resolve(f, common, SimConfig{});
    const auto point = sim_point(cfg);
    SweepTable table;
    table.axis = SweepAxis::snr_db;
    table.values = {cfg.snr_db};
    table.results.push_back(run_point(point, {common.threads, 0}));
    Json doc = to_json(cfg);
    doc["command"] = "simulate";
    emit(common.out, out, [&](std::ostream& os) {
        config_comment(os, doc);
        write_results_csv(os, table);
    });
    return ok;
}

int cmd_dump_cloud(const SimFlags& f, const Common& common, std::size_t frames, std::ostream& out) {
    const auto cfg = resolve(f, common, SimConfig{});
    const auto cloud = collect_cloud(sim_point(cfg), frames);
    Json doc = to_json(cfg);
    doc["command"] = "dump-cloud";
    doc["frames"] = frames;
    emit(common.out, out, [&](std::ostream& os) {
        config_comment(os, doc);
        write_cloud_csv(os, cloud);
    });
    return ok;
}

struct HybridArgs {
    int users = 4;
    int group = 2;
    std::size_t order = 4;
    std::string resource = "time";
    std::vector<int> search;
    double target_ser = 0.1;
    double gain = 1.0;
};

int cmd_hybrid(const HybridArgs& h, const SimFlags& f, const Common& common, std::ostream& out,
               std::ostream& err) {
    auto cfg = resolve(f, common, SimConfig{});
    const auto resource = parse_resource(h.resource);
    if (h.search.empty()) {
        const auto plan = make_plan(h.users, h.group, h.order, resource);
        emit(common.out, out,
             [&](std::ostream& os) { os << plan_to_json(plan, cfg.frame_length) << '\n'; });
        return ok;
    }
    cfg.criterion = Criterion::eep;
    cfg.users = 1;
    cfg.order = h.order;
    cfg.gains = {h.gain};
    const auto base = sim_point(cfg);
    const auto report = threshold_search(h.users, h.search, h.order, base, h.target_ser,
                                         common.threads);
    Json doc = to_json(cfg);
    doc.erase("users");
    doc.erase("gains");
    doc["command"] = "hybrid";
    doc["total_users"] = h.users;
    doc["candidates"] = h.search;
    doc["target_ser"] = h.target_ser;
    doc["gain"] = h.gain;
    emit(common.out, out, [&](std::ostream& os) {
        config_comment(os, doc);
        os << "# selected_g: " << report.best_group_size
           << " fallback: " << (report.fallback ? "true" : "false") << '\n';
        write_threshold_csv(os, report);
    });
    if (report.fallback) err << "note: no group size met the SER target; falling back to g = 1\n";
    return ok;
}

struct PlanArgs {
    int freq = 2;
    int pol = 2;
    int const_sets = 1;
    int beams = 7;
    std::vector<int> beam_ids;
    std::vector<int> pattern;
    double bandwidth = kDefaultBeamBandwidthHz;
    double capacity = kDefaultBeamCapacityBps;
};

int cmd_plan(const PlanArgs& a, const Common& common, std::ostream& out) {
    std::vector<int> ids = a.beam_ids;
    if (ids.empty()) {
        require(a.beams >= 1, "beam count must be >= 1");
        for (int i = 0; i < a.beams; ++i) ids.push_back(i);
    }
    const auto plan = build_plan(a.freq, a.pol, a.const_sets, ids, a.pattern, a.bandwidth, a.capacity);
    const auto cap = beam_capacity(plan);
    Json doc;
    doc["command"] = "plan";
    doc["n_freq"] = a.freq;
    doc["n_pol"] = a.pol;
    doc["n_const_sets"] = a.const_sets;
    doc["beam_ids"] = ids;
    doc["pattern"] = a.pattern;
    doc["bandwidth_per_beam"] = a.bandwidth;
    doc["base_capacity_per_beam"] = a.capacity;
    emit(common.out, out, [&](std::ostream& os) {
        config_comment(os, doc);
        os << "# colors: " << plan.color_count() << " colors_in_use: " << plan.colors_in_use()
           << " capacity_multiplier: " << plan.n_const_sets
           << " bandwidth_per_beam: " << fmt(cap.bandwidth_per_beam)
           << " total_capacity: " << fmt(cap.total_capacity) << '\n';
        write_plan_csv(os, plan);
    });
    return ok;
}

int cmd_preset(const std::string& name, const Common& common, std::ostream& out) {
    auto preset = scenario_preset(name);
    preset.sim.seed = common.seed;
    emit(common.out, out, [&](std::ostream& os) { os << preset_to_json(preset).dump(2) << '\n'; });
    return ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Constellation-domain multiple access toolkit for non-coherent massive MIMO", "ncma"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--seed", common.seed, "global seed")->envname("NCMA_SEED");
    app.add_option("--threads,-j", common.threads, "worker threads; outputs do not depend on it")
        ->check(CLI::PositiveNumber);
    app.add_option("--out,-o", common.out, "output path (default stdout)");

    SimFlags design_f, sim_f, sweep_f, cloud_f, hybrid_f;
    std::string catalog_out, joint_csv;
    auto* design = app.add_subcommand("design", "design per-user constellations and report the joint");
    add_sim_flags(design, design_f, true);
    design->add_option("--catalog", catalog_out, "write the design catalog here");
    design->add_option("--joint-csv", joint_csv, "write the joint constellation CSV here");

    std::string catalog_in;
    std::vector<double> validate_gains;
    double tol = kDistanceTolerance;
    auto* validate = app.add_subcommand("validate", "check a catalog's joint constellation for collisions");
    validate->add_option("--catalog", catalog_in, "catalog document")->required()->check(CLI::ExistingFile);
    validate->add_option("--gains", validate_gains, "per-user average power")->delimiter(',');
    validate->add_option("--tol", tol, "collision distance tolerance");

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo SER/BER at one operating point");
    add_sim_flags(simulate, sim_f, true);

    std::string axis;
    std::vector<double> values;
    auto* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo SER/BER along one axis");
    add_sim_flags(sweep_cmd, sweep_f, true);
    sweep_cmd->add_option("--axis", axis, "snr | R | rho | kappa | K")->required();
    sweep_cmd->add_option("--values", values, "sorted axis values")->required()->delimiter(',');

    HybridArgs hargs;
    auto* hybrid = app.add_subcommand("hybrid", "hybrid orthogonal/constellation access plan and group-size search");
    add_sim_flags(hybrid, hybrid_f, false);
    hybrid->add_option("--users,-N", hargs.users, "total users");
    hybrid->add_option("--group,-g", hargs.group, "users per constellation group");
    hybrid->add_option("--order,-M", hargs.order, "constellation order");
    hybrid->add_option("--resource", hargs.resource, "time | frequency | code");
    hybrid->add_option("--search", hargs.search, "candidate group sizes to simulate")->delimiter(',');
    hybrid->add_option("--target-ser", hargs.target_ser, "worst-user SER target for --search");
    hybrid->add_option("--gain", hargs.gain, "per-user average power in the simulated group");

    PlanArgs pargs;
    auto* plan = app.add_subcommand("plan", "frequency plan with a constellation colour dimension");
    plan->add_option("--freq", pargs.freq, "frequency slots");
    plan->add_option("--pol", pargs.pol, "polarizations (1 or 2)");
    plan->add_option("--constellations", pargs.const_sets, "constellation sets");
    plan->add_option("--beams", pargs.beams, "beam count (ids 0..n-1)");
    plan->add_option("--beam-ids", pargs.beam_ids, "explicit beam ids")->delimiter(',');
    plan->add_option("--pattern", pargs.pattern, "colour repeat pattern (palette indices)")->delimiter(',');
    plan->add_option("--bandwidth", pargs.bandwidth, "bandwidth per beam, Hz");
    plan->add_option("--capacity", pargs.capacity, "base capacity per beam, bit/s");

    std::string preset_name;
    auto* preset = app.add_subcommand("preset", "export a scenario preset as a simulation config");
    preset->add_option("name", preset_name, "vsat_uplink | mega_leo_gw | mega_leo_maritime | terrestrial_ntn")
        ->required();

    std::size_t frames = 10;
    auto* cloud = app.add_subcommand("dump-cloud", "detection statistic samples for point-cloud plots");
    add_sim_flags(cloud, cloud_f, true);
    cloud->add_option("--frames", frames, "frames to simulate");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        if (*design) return cmd_design(design_f, common, catalog_out, joint_csv, out, err);
        if (*validate) return cmd_validate(catalog_in, validate_gains, tol, common, out, err);
        if (*simulate) return cmd_simulate(sim_f, common, out);
        if (*sweep_cmd) return cmd_sweep(sweep_f, common, axis, values, out);
        if (*hybrid) return cmd_hybrid(hargs, hybrid_f, common, out, err);
        if (*plan) return cmd_plan(pargs, common, out);
        if (*preset) return cmd_preset(preset_name, common, out);
        if (*cloud) return cmd_dump_cloud(cloud_f, common, frames, out);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return refused;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return refused;
    }
    return usage;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, out, err);
}

} // namespace ncma::cli
