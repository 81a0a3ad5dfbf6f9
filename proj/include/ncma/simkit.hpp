#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ncma/channel.hpp"
#include "ncma/constellation.hpp"

namespace ncma {

struct SimPoint {
    std::shared_ptr<const DesignReport> design;
    ChannelConfig channel;
    std::size_t frame_length = kDefaultFrameLength;  // data symbols per frame
    std::size_t frames_per_trial = 1;
    std::size_t max_trials = 1000;
    std::size_t min_errors = 100;
    std::uint64_t seed = 1;

    void validate() const;
};

struct Interval {
    double low = 0.0;
    double high = 0.0;

    double halfwidth() const { return (high - low) / 2.0; }
    bool overlaps(const Interval& o) const { return low <= o.high && o.low <= high; }
};

// Wilson score interval at 95% for `errors` out of `trials`.
Interval wilson95(std::uint64_t errors, std::uint64_t trials);

struct UserStats {
    double ser = 0.0;
    double ber = 0.0;
    Interval ser_ci;
    std::uint64_t symbols = 0;
    std::uint64_t symbol_errors = 0;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;

    double ci95() const { return ser_ci.halfwidth(); }
};

struct SimResult {
    std::vector<UserStats> users;
    std::size_t trials = 0;
    double wall_time = 0.0;  // seconds; not part of any deterministic output
};

struct RunOptions {
    unsigned workers = 1;
    std::uint64_t point_index = 0;  // stream coordinate of this point
};

// Trials run until every user has at least min_errors symbol errors or
// max_trials is reached. Counts equal those of a serial run whatever the
// worker count. Throws DomainError when the design is not injective under the
// channel gains.
SimResult run_point(const SimPoint& point, RunOptions options = {});

enum class SweepAxis { snr_db, antennas, rho, kappa, users };

std::string to_string(SweepAxis a);
SweepAxis parse_sweep_axis(const std::string& s);

// Copy of base with `axis` set to `value`. The users axis rebuilds an EEP
// design of the base order with every gain equal to base gain 0.
SimPoint with_axis(const SimPoint& base, SweepAxis axis, double value);

struct SweepTable {
    SweepAxis axis = SweepAxis::snr_db;
    std::vector<double> values;
    std::vector<SimResult> results;
};

// One run_point per value; value i uses stream point index i.
SweepTable sweep(const SimPoint& base, SweepAxis axis, std::span<const double> values,
                 unsigned workers = 1);

// One z sample of a simulated frame and the joint point actually sent.
struct CloudSample {
    std::size_t frame = 0;
    std::size_t t = 0;
    Complex z;
    std::size_t sent = 0;
};

std::vector<CloudSample> collect_cloud(const SimPoint& point, std::size_t frames);

// CSV: axis_value,user_id,ser,ber,ci95,symbols,errors.
void write_results_csv(std::ostream& os, const SweepTable& table);

} // namespace ncma
