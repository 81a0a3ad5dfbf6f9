#include <doctest.h>

#include <sstream>

#include "ncma/receiver.hpp"
#include "ncma/simkit.hpp"

using namespace ncma;

namespace {

SimPoint eep_point(int users, std::size_t order, int antennas, double snr_db) {
    SimPoint p;
    const std::vector<double> gains(static_cast<std::size_t>(users), 1.0);
    p.design = std::make_shared<const DesignReport>(
        make_report(design_eep(users, order), gains, Criterion::eep));
    p.channel.users = users;
    p.channel.antennas = antennas;
    p.channel.gains = gains;
    p.channel.snr_db = snr_db;
    return p;
}

void check_same_counts(const SimResult& a, const SimResult& b) {
    REQUIRE(a.users.size() == b.users.size());
    CHECK(a.trials == b.trials);
    for (std::size_t k = 0; k < a.users.size(); ++k) {
        CHECK(a.users[k].symbol_errors == b.users[k].symbol_errors);
        CHECK(a.users[k].bit_errors == b.users[k].bit_errors);
        CHECK(a.users[k].symbols == b.users[k].symbols);
    }
}

} // namespace

TEST_CASE("wilson interval reference values") {
    // reference values from an independent statistics package
    auto i = wilson95(0, 10);
    CHECK(i.low == doctest::Approx(0.0));
    CHECK(i.high == doctest::Approx(0.277532799863).epsilon(1e-10));
    i = wilson95(5, 10);
    CHECK(i.low == doctest::Approx(0.236593090513).epsilon(1e-10));
    CHECK(i.high == doctest::Approx(0.763406909487).epsilon(1e-10));
    i = wilson95(75, 100);
    CHECK(i.low == doctest::Approx(0.656955364519).epsilon(1e-10));
    CHECK(i.high == doctest::Approx(0.824547886377).epsilon(1e-10));
    i = wilson95(1, 100000);
    CHECK(i.low == doctest::Approx(0.000001765248).epsilon(1e-6));
    CHECK(i.high == doctest::Approx(0.000056647097).epsilon(1e-8));
    CHECK(i.halfwidth() == doctest::Approx((i.high - i.low) / 2));
    CHECK(Interval{0.1, 0.2}.overlaps({0.2, 0.3}));
    CHECK_FALSE(Interval{0.1, 0.2}.overlaps({0.21, 0.3}));
}

TEST_CASE("run_point counts are independent of the worker count") {
    auto p = eep_point(2, 4, 16, 5.0);
    p.max_trials = 40;
    p.min_errors = 150;
    const auto serial = run_point(p);
    for (unsigned w : {2u, 3u, 8u}) check_same_counts(serial, run_point(p, {w, 0}));
}

TEST_CASE("stopping rule matches a serial prefix") {
    auto p = eep_point(2, 4, 16, 5.0);
    p.max_trials = 500;
    p.min_errors = 120;
    const auto stopped = run_point(p, {4, 0});
    REQUIRE(stopped.trials < p.max_trials);
    for (const auto& u : stopped.users) CHECK(u.symbol_errors >= p.min_errors);

    auto capped = p;
    capped.min_errors = 1'000'000;
    capped.max_trials = stopped.trials;
    check_same_counts(stopped, run_point(capped));

    capped.max_trials = stopped.trials - 1;
    const auto before = run_point(capped);
    bool short_of_target = false;
    for (const auto& u : before.users) short_of_target |= u.symbol_errors < p.min_errors;
    CHECK(short_of_target);
}

TEST_CASE("statistics bookkeeping") {
    auto p = eep_point(2, 8, 8, 0.0);
    p.frame_length = 37;
    p.frames_per_trial = 3;
    p.max_trials = 5;
    p.min_errors = 1'000'000;
    const auto r = run_point(p);
    CHECK(r.trials == 5);
    for (const auto& u : r.users) {
        CHECK(u.symbols == 5 * 3 * 37);
        CHECK(u.bits == u.symbols * 3);
        CHECK(u.bit_errors >= u.symbol_errors);
        CHECK(u.bit_errors <= u.symbol_errors * 3);
        CHECK(u.ser == doctest::Approx(double(u.symbol_errors) / u.symbols));
        CHECK(u.ser_ci.low <= u.ser);
        CHECK(u.ser_ci.high >= u.ser);
    }
}

TEST_CASE("noiseless single user never errs") {
    auto p = eep_point(1, 8, 4, INFINITY);
    p.max_trials = 20;
    const auto r = run_point(p);
    CHECK(r.users[0].symbol_errors == 0);
    CHECK(r.users[0].bit_errors == 0);
}

TEST_CASE("hopeless snr gives chance-level errors") {
    // with noise dominating, z is uniformly oriented: 3 of 4 decisions fail
    auto p = eep_point(1, 4, 8, -60.0);
    p.max_trials = 100;
    const auto r = run_point(p);
    CHECK(r.users[0].ser_ci.low <= 0.75);
    CHECK(r.users[0].ser_ci.high >= 0.75);
}

TEST_CASE("non-injective designs are refused") {
    SimPoint p;
    const std::vector<double> gains{1.0, 1.0};
    p.design = std::make_shared<const DesignReport>(make_report(
        design_uep(2, 4, std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, 0.0}), gains,
        Criterion::uep));
    p.channel.users = 2;
    p.channel.gains = gains;
    CHECK_THROWS_AS(run_point(p), DomainError);
    // design and channel disagree on the user count
    auto q = eep_point(2, 4, 4, 10.0);
    q.channel.users = 3;
    q.channel.gains = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(run_point(q), InvalidArgument);
}

TEST_CASE("sweep axes") {
    auto p = eep_point(2, 4, 8, 10.0);
    CHECK(with_axis(p, SweepAxis::snr_db, 3.0).channel.snr_db == 3.0);
    CHECK(with_axis(p, SweepAxis::antennas, 64).channel.antennas == 64);
    CHECK_THROWS_AS(with_axis(p, SweepAxis::antennas, 6.5), InvalidArgument);
    const auto rho = with_axis(p, SweepAxis::rho, 0.9);
    CHECK(rho.channel.model == FadingModel::gauss_markov);
    CHECK(rho.channel.rho == 0.9);
    const auto kap = with_axis(p, SweepAxis::kappa, 4.0);
    CHECK(kap.channel.model == FadingModel::rician);
    const auto k4 = with_axis(p, SweepAxis::users, 4);
    CHECK(k4.channel.users == 4);
    CHECK(k4.design->constellations.size() == 4);
    CHECK(k4.design->unique);
    CHECK_THROWS_AS(with_axis(p, SweepAxis::users, 3), CollisionError);
    CHECK(parse_sweep_axis("R") == SweepAxis::antennas);
    CHECK(parse_sweep_axis("snr") == SweepAxis::snr_db);
    CHECK(to_string(SweepAxis::users) == "K");
    CHECK_THROWS_AS(parse_sweep_axis("gamma"), InvalidArgument);
}

TEST_CASE("sweep runs each value on its own stream") {
    auto p = eep_point(2, 4, 8, 5.0);
    p.max_trials = 10;
    const std::vector<double> v{5.0, 5.0};
    const auto t = sweep(p, SweepAxis::snr_db, v);
    REQUIRE(t.results.size() == 2);
    CHECK(t.results[0].users[0].symbol_errors != t.results[1].users[0].symbol_errors);
    check_same_counts(t.results[0], run_point(p, {1, 0}));
    check_same_counts(t.results[1], run_point(p, {1, 1}));
    const std::vector<double> unsorted{10.0, 5.0};
    CHECK_THROWS_AS(sweep(p, SweepAxis::snr_db, unsorted), InvalidArgument);

    std::ostringstream os;
    write_results_csv(os, t);
    std::string line;
    std::istringstream is(os.str());
    std::getline(is, line);
    CHECK(line == "axis_value,user_id,ser,ber,ci95,symbols,errors");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 4);
}

TEST_CASE("point cloud tags the transmitted joint point") {
    auto p = eep_point(2, 4, 1024, INFINITY);
    p.frame_length = 30;
    const auto cloud = collect_cloud(p, 3);
    REQUIRE(cloud.size() == 90);
    std::size_t hits = 0;
    for (const auto& s : cloud) hits += nearest_point(p.design->joint, s.z) == s.sent;
    CHECK(hits == cloud.size());
    CHECK(cloud.back().frame == 2);
    CHECK(cloud.back().t == 29);
}

TEST_CASE("hopeless snr with two users") {
    auto p = eep_point(2, 4, 8, -60.0);
    p.max_trials = 100;
    for (const auto& u : run_point(p).users) {
        CHECK(u.ser_ci.low <= 0.75);
        CHECK(u.ser_ci.high >= 0.75);
    }
}

TEST_CASE("eep users see the same error rate") {
    auto p = eep_point(2, 4, 128, 10.0);
    p.max_trials = 300;
    p.min_errors = 2000;
    const auto r = run_point(p);
    CHECK(r.users[0].ser_ci.overlaps(r.users[1].ser_ci));
}
