#include "ncma/simkit.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include "ncma/receiver.hpp"
#include "ncma/txchain.hpp"

namespace ncma {

namespace {

struct TrialCounts {
    std::vector<std::uint64_t> symbol_errors;
    std::vector<std::uint64_t> bit_errors;
};

struct Frame {
    std::vector<SymbolFrame> sent;
    std::vector<Bits> bits;
    DetectionStat stat;
    DetectionResult detected;
};

Frame simulate_frame(const SimPoint& p, const JointConstellation& joint, RandomStream& rng) {
    const auto& cs = p.design->constellations;
    Frame f;
    std::vector<DiffFrame> tx;
    tx.reserve(cs.size());
    for (const auto& c : cs) {
        f.bits.push_back(random_bits(rng, p.frame_length, c));
        f.sent.push_back(map_bits(f.bits.back(), c));
        tx.push_back(diff_encode(f.sent.back(), c));
    }
    const auto ch = realize(p.channel, p.frame_length + 1, rng);
    const auto y = apply(ch, tx, rng);
    f.stat = correlate(y);
    f.detected = demap(f.stat, joint, cs);
    return f;
}

TrialCounts run_trial(const SimPoint& p, const JointConstellation& joint, StreamId id) {
    RandomStream rng(id);
    const std::size_t K = p.design->constellations.size();
    TrialCounts out{std::vector<std::uint64_t>(K, 0), std::vector<std::uint64_t>(K, 0)};
    for (std::size_t n = 0; n < p.frames_per_trial; ++n) {
        const auto f = simulate_frame(p, joint, rng);
        for (std::size_t k = 0; k < K; ++k) {
            const auto& sent = f.sent[k].indices;
            const auto& got = f.detected.per_user_indices[k];
            for (std::size_t t = 0; t < sent.size(); ++t) out.symbol_errors[k] += sent[t] != got[t];
            const auto& b0 = f.bits[k];
            const auto& b1 = f.detected.per_user_bits[k];
            for (std::size_t i = 0; i < b0.size(); ++i) out.bit_errors[k] += b0[i] != b1[i];
        }
    }
    return out;
}

JointConstellation receiver_joint(const SimPoint& p) {
    auto joint = build_joint(p.design->constellations, p.channel.gains);
    if (auto c = validate_unique(joint)) {
        throw DomainError("non-injective design: joint symbols " + format_tuple(c->tuple_a) +
                          " and " + format_tuple(c->tuple_b) + " coincide");
    }
    return joint;
}

} // namespace

void SimPoint::validate() const {
    require(design != nullptr, "simulation point has no design");
    channel.validate();
    require(design->constellations.size() == static_cast<std::size_t>(channel.users),
            "design user count does not match channel user count");
    require(frame_length >= 1, "frame length must be >= 1");
    require(frames_per_trial >= 1, "frames per trial must be >= 1");
    require(max_trials >= 1, "max trials must be >= 1");
    require(min_errors >= 1, "min errors must be >= 1");
}

Interval wilson95(std::uint64_t errors, std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(errors) / n;
    const double denom = 1.0 + z * z / n;
    const double center = (phat + z * z / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

SimResult run_point(const SimPoint& point, RunOptions options) {
    point.validate();
    const auto joint = receiver_joint(point);
    const auto start = std::chrono::steady_clock::now();
    const std::size_t K = point.design->constellations.size();
    const unsigned workers = std::max(1u, options.workers);

    std::vector<std::uint64_t> sym_err(K, 0), bit_err(K, 0);
    std::size_t done = 0;
    bool stop = false;
    const std::size_t batch = static_cast<std::size_t>(workers) * 4;
    std::vector<TrialCounts> slots;

    while (!stop) {
        const std::size_t first = done;
        const std::size_t count = std::min(batch, point.max_trials - done);
        slots.assign(count, {});
        auto work = [&](std::size_t i) {
            slots[i] = run_trial(point, joint, {point.seed, options.point_index, first + i});
        };
        if (workers == 1 || count == 1) {
            for (std::size_t i = 0; i < count; ++i) work(i);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < std::min<std::size_t>(workers, count); ++w) {
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < count; i = next++) work(i);
                });
            }
        }
        // Reduce in trial order and stop at the same trial a serial run would.
        for (std::size_t i = 0; i < count && !stop; ++i) {
            for (std::size_t k = 0; k < K; ++k) {
                sym_err[k] += slots[i].symbol_errors[k];
                bit_err[k] += slots[i].bit_errors[k];
            }
            ++done;
            const bool enough = std::all_of(sym_err.begin(), sym_err.end(),
                                            [&](auto e) { return e >= point.min_errors; });
            stop = enough || done >= point.max_trials;
        }
    }

    SimResult res;
    res.trials = done;
    const std::uint64_t symbols = done * point.frames_per_trial * point.frame_length;
    for (std::size_t k = 0; k < K; ++k) {
        UserStats u;
        u.symbols = symbols;
        u.symbol_errors = sym_err[k];
        u.bits = symbols * static_cast<std::uint64_t>(point.design->constellations[k].bits_per_symbol());
        u.bit_errors = bit_err[k];
        u.ser = static_cast<double>(u.symbol_errors) / static_cast<double>(u.symbols);
        u.ber = static_cast<double>(u.bit_errors) / static_cast<double>(u.bits);
        u.ser_ci = wilson95(u.symbol_errors, u.symbols);
        res.users.push_back(u);
    }
    res.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

std::string to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::snr_db: return "snr_db";
    case SweepAxis::antennas: return "R";
    case SweepAxis::rho: return "rho";
    case SweepAxis::kappa: return "kappa";
    case SweepAxis::users: return "K";
    }
    return "unknown";
}

SweepAxis parse_sweep_axis(const std::string& s) {
    if (s == "snr" || s == "snr_db") return SweepAxis::snr_db;
    if (s == "R" || s == "antennas") return SweepAxis::antennas;
    if (s == "rho") return SweepAxis::rho;
    if (s == "kappa") return SweepAxis::kappa;
    if (s == "K" || s == "users") return SweepAxis::users;
    throw InvalidArgument("unknown sweep axis: " + s);
}

namespace {

int integral_value(double v, const char* what) {
    require(std::isfinite(v) && v >= 1.0 && v == std::floor(v),
            std::string(what) + " must be a positive integer");
    return static_cast<int>(v);
}

} // namespace

SimPoint with_axis(const SimPoint& base, SweepAxis axis, double value) {
    SimPoint p = base;
    switch (axis) {
    case SweepAxis::snr_db: p.channel.snr_db = value; break;
    case SweepAxis::antennas: p.channel.antennas = integral_value(value, "antenna count"); break;
    case SweepAxis::rho:
        p.channel.model = FadingModel::gauss_markov;
        p.channel.rho = value;
        break;
    case SweepAxis::kappa:
        p.channel.model = FadingModel::rician;
        p.channel.kappa = value;
        break;
    case SweepAxis::users: {
        require(base.design != nullptr, "simulation point has no design");
        const int K = integral_value(value, "user count");
        const auto order = base.design->constellations.front().order();
        const std::vector<double> gains(static_cast<std::size_t>(K), base.channel.gains.front());
        p.design = std::make_shared<const DesignReport>(
            make_report(design_eep(K, order), gains, Criterion::eep));
        p.channel.users = K;
        p.channel.gains = gains;
        break;
    }
    }
    return p;
}

SweepTable sweep(const SimPoint& base, SweepAxis axis, std::span<const double> values,
                 unsigned workers) {
    require(!values.empty(), "sweep needs at least one value");
    require(std::is_sorted(values.begin(), values.end()), "sweep values must be sorted");
    SweepTable table;
    table.axis = axis;
    table.values.assign(values.begin(), values.end());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto p = with_axis(base, axis, values[i]);
        table.results.push_back(run_point(p, {workers, i}));
    }
    return table;
}

std::vector<CloudSample> collect_cloud(const SimPoint& point, std::size_t frames) {
    point.validate();
    const auto joint = receiver_joint(point);
    std::vector<CloudSample> out;
    for (std::size_t n = 0; n < frames; ++n) {
        RandomStream rng({point.seed, 0, n});
        const auto f = simulate_frame(point, joint, rng);
        std::vector<std::uint32_t> tuple(f.sent.size());
        for (std::size_t t = 0; t < f.stat.z.size(); ++t) {
            for (std::size_t k = 0; k < tuple.size(); ++k) tuple[k] = f.sent[k].indices[t];
            out.push_back({n, t, f.stat.z[t], joint.index_of(tuple)});
        }
    }
    return out;
}

void write_results_csv(std::ostream& os, const SweepTable& table) {
    require(table.values.size() == table.results.size(), "sweep table is inconsistent");
    os << "axis_value,user_id,ser,ber,ci95,symbols,errors\n";
    char buf[256];
    for (std::size_t i = 0; i < table.values.size(); ++i) {
        const auto& r = table.results[i];
        for (std::size_t k = 0; k < r.users.size(); ++k) {
            const auto& u = r.users[k];
            std::snprintf(buf, sizeof buf, "%.10g,%zu,%.10g,%.10g,%.10g,%llu,%llu\n",
                          table.values[i], k, u.ser, u.ber, u.ci95(),
                          static_cast<unsigned long long>(u.symbols),
                          static_cast<unsigned long long>(u.symbol_errors));
            os << buf;
        }
    }
}

} // namespace ncma
