#include <doctest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "ncma/constellation.hpp"
#include "oracles.hpp"

using namespace ncma;
using std::numbers::pi;

namespace {

oracle::Phases raw_phases(const std::vector<IndividualConstellation>& cs) {
    oracle::Phases out;
    for (const auto& c : cs) out.push_back(c.phases());
    return out;
}

} // namespace

TEST_CASE("phase helpers") {
    CHECK(is_power_of_two(1));
    CHECK(is_power_of_two(64));
    CHECK_FALSE(is_power_of_two(0));
    CHECK_FALSE(is_power_of_two(6));
    CHECK(log2_exact(16) == 4);
    CHECK_THROWS_AS(log2_exact(12), InvalidArgument);
    CHECK(wrap_phase(-pi / 2) == doctest::Approx(3 * pi / 2));
    CHECK(wrap_phase(5 * pi) == doctest::Approx(pi));
    CHECK(circular_distance(0.1, 2 * pi - 0.1) == doctest::Approx(0.2));
}

TEST_CASE("gray labels over sorted phases") {
    for (std::size_t m : {2u, 4u, 8u, 16u, 32u}) {
        // scrambled phase order so index order differs from angular order
        std::vector<double> ph;
        for (std::size_t i = 0; i < m; ++i) ph.push_back(((i * 5) % m) * 2 * pi / m + 0.3);
        IndividualConstellation c(0, ph);
        const auto order = c.sorted_indices();
        for (std::size_t i = 0; i < m; ++i) {
            const auto a = c.label(order[i]);
            const auto b = c.label(order[(i + 1) % m]);
            CHECK(std::popcount(a ^ b) == 1);
        }
        for (std::size_t i = 0; i < m; ++i) CHECK(c.index_of_label(c.label(i)) == i);
        CHECK(c.min_chord_distance() == doctest::Approx(2 * std::sin(pi / m)));
    }
}

TEST_CASE("bit strings are msb first") {
    IndividualConstellation c(0, {0.0, pi / 2, pi, 3 * pi / 2});
    CHECK(c.bit_string(0) == "00");
    CHECK(c.bit_string(1) == "01");
    CHECK(c.bit_string(2) == "11");
    CHECK(c.bit_string(3) == "10");
}

TEST_CASE("constellation rejects bad input") {
    CHECK_THROWS_AS(IndividualConstellation(0, {0.0, 1.0, 2.0}), InvalidArgument);
    CHECK_THROWS_AS(IndividualConstellation(0, {0.0}), InvalidArgument);
    CHECK_THROWS_AS(IndividualConstellation(0, {0.0, 2 * pi}), InvalidArgument);
    CHECK_THROWS_AS(IndividualConstellation(-1, {0.0, pi}), InvalidArgument);
    CHECK_NOTHROW(IndividualConstellation(0, {0.0, pi / 2, pi, 3 * pi / 2}, {0, 1, 3, 2}).labels());
    // 00 and 11 adjacent on the circle
    CHECK_THROWS_AS(IndividualConstellation(0, {0.0, pi / 2, pi, 3 * pi / 2}, {0, 3, 1, 2}),
                    InvalidArgument);
    CHECK_THROWS_AS(IndividualConstellation(0, {0.0, pi / 2, pi, 3 * pi / 2}, {0, 1, 1, 2}),
                    InvalidArgument);
}

TEST_CASE("eep places users at fractional rotations") {
    const auto cs = design_eep(2, 4);
    REQUIRE(cs.size() == 2);
    for (std::size_t m = 0; m < 4; ++m) {
        CHECK(cs[0].phase(m) == doctest::Approx(m * pi / 2));
        CHECK(circular_distance(cs[1].phase(m), cs[0].phase(m) + pi / 4) < 1e-12);
    }
    const auto c3 = design_eep(4, 2);
    for (int k = 0; k < 4; ++k) CHECK(c3[k].phase(0) == doctest::Approx(k * pi / 4));
}

TEST_CASE("eep collision is reported with a witness") {
    try {
        design_eep(3, 4);
        FAIL("expected a collision");
    } catch (const CollisionError& e) {
        const auto& w = e.witness();
        CHECK(w.distance <= kDistanceTolerance);
        CHECK(w.point_a < w.point_b);
        CHECK(std::string(e.what()).find("collision") != std::string::npos);
    }
    CHECK_THROWS_AS(design_eep(0, 4), InvalidArgument);
    CHECK_THROWS_AS(design_eep(2, 6), InvalidArgument);
}

TEST_CASE("joint enumeration matches the oracle") {
    const auto cs = design_uep(3, 4, std::vector<double>{1.0, 0.8, 0.6},
                               std::vector<double>{0.0, 0.2, 0.5});
    const std::vector<double> gains{1.0, 0.7, 1.3};
    const auto joint = build_joint(cs, gains);
    const auto ref = oracle::enumerate_sums(raw_phases(cs), gains);
    REQUIRE(joint.size() == ref.size());
    for (std::size_t p = 0; p < ref.size(); ++p) {
        CHECK(std::abs(joint.point(p) - ref[p]) < 1e-12);
        const auto t = joint.tuple(p);
        CHECK(joint.index_of(t) == p);
        // user 0 most significant
        CHECK(t[0] == p / 16);
        CHECK(t[2] == p % 4);
    }
    CHECK(joint.min_distance() == doctest::Approx(oracle::min_pairwise(ref)).epsilon(1e-12));
    CHECK(papr(joint) == doctest::Approx(oracle::papr(ref)).epsilon(1e-12));
}

TEST_CASE("validate_unique agrees with the oracle on random designs") {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> gam(0.05, 1.0), off(0.0, 2 * pi);
    std::uniform_int_distribution<int> users(1, 3), logm(1, 3), coarse(0, 7);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = users(gen);
        const std::size_t m = std::size_t{1} << logm(gen);
        std::vector<double> g, o;
        for (int i = 0; i < k; ++i) {
            // coarse grid values make exact collisions common
            if (trial % 2 == 0) {
                g.push_back((coarse(gen) + 1) / 8.0);
                o.push_back(coarse(gen) * pi / 4);
            } else {
                g.push_back(gam(gen));
                o.push_back(off(gen));
            }
        }
        const auto cs = design_uep(k, m, g, o);
        const std::vector<double> gains(static_cast<std::size_t>(k), 1.0);
        const auto joint = build_joint(cs, gains);
        const auto pts = oracle::enumerate_sums(raw_phases(cs), gains);
        const auto ref = oracle::first_collision(pts, kDistanceTolerance);
        const auto got = validate_unique(joint);
        REQUIRE(got.has_value() == ref.has_value());
        if (ref) {
            CHECK(got->point_a == ref->first);
            CHECK(got->point_b == ref->second);
        } else {
            CHECK(min_distance(joint).valid);
            CHECK(min_distance(joint).value == doctest::Approx(oracle::min_pairwise(pts)).epsilon(1e-12));
        }
    }
}

TEST_CASE("eep(2,4) distance and papr constants") {
    const auto cs = design_eep(2, 4);
    const std::vector<double> gains{1.0, 1.0};
    const auto joint = build_joint(cs, gains);
    CHECK(std::abs(min_distance(joint).value - (2 - std::sqrt(2.0))) < 1e-9);
    CHECK(std::abs(papr(joint) - (2 + std::sqrt(2.0)) / 2) < 1e-9);
    CHECK(papr_db(joint) == doctest::Approx(10 * std::log10((2 + std::sqrt(2.0)) / 2)));
}

TEST_CASE("make_report flags collisions") {
    const auto cs = design_uep(2, 4, std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, 0.0});
    const std::vector<double> gains{1.0, 1.0};
    const auto r = make_report(cs, gains, Criterion::uep);
    CHECK_FALSE(r.unique);
    REQUIRE(r.collision);
    CHECK(format_tuple(r.collision->tuple_a) == "(0,1)");
    CHECK(format_tuple(r.collision->tuple_b) == "(1,0)");
    CHECK_FALSE(min_distance(r.joint).valid);
    CHECK(min_distance(r.joint).value == 0.0);
}

TEST_CASE("uep gamma range") {
    CHECK_THROWS_AS(design_uep(1, 4, std::vector<double>{0.0}, std::vector<double>{0.0}),
                    InvalidArgument);
    CHECK_THROWS_AS(design_uep(1, 4, std::vector<double>{1.5}, std::vector<double>{0.0}),
                    InvalidArgument);
    const auto c = design_uep(1, 4, std::vector<double>{0.5}, std::vector<double>{0.1});
    CHECK(c[0].phase(3) == doctest::Approx(0.1 + 3 * 0.5 * pi / 2));
}

TEST_CASE("optimize_offsets against an exhaustive grid") {
    SUBCASE("K=2 M=4 step pi/16") {
        const std::vector<double> g{1.0, 1.0};
        const auto r = optimize_offsets(2, 4, g, pi / 16);
        const auto [idx, d] = oracle::best_offset_k2(4, g, pi / 16);
        CHECK(idx == 3);
        CHECK(d == doctest::Approx(0.672190909).epsilon(1e-8));
        CHECK(r.offsets[0] == 0.0);
        CHECK(r.offsets[1] == doctest::Approx(idx * pi / 16));
        CHECK(r.min_distance == doctest::Approx(d).epsilon(1e-12));
    }
    SUBCASE("K=2 M=2 ties go to the smallest offset") {
        const std::vector<double> g{1.0, 1.0};
        CHECK(optimize_offsets(2, 2, g, pi / 8).offsets[1] == doctest::Approx(3 * pi / 8));
        CHECK(optimize_offsets(2, 2, g, pi / 4).offsets[1] == doctest::Approx(pi / 2));
        CHECK(optimize_offsets(2, 2, g, pi / 4).min_distance == doctest::Approx(2.0));
    }
    SUBCASE("uep gammas") {
        const std::vector<double> g{1.0, 0.5};
        const auto r = optimize_offsets(2, 4, g, pi / 32);
        const auto [idx, d] = oracle::best_offset_k2(4, g, pi / 32);
        CHECK(r.offsets[1] == doctest::Approx(idx * pi / 32));
        CHECK(r.min_distance == doctest::Approx(d).epsilon(1e-12));
    }
    SUBCASE("single user") {
        const std::vector<double> g{1.0};
        const auto r = optimize_offsets(1, 4, g, pi / 8);
        CHECK(r.offsets == std::vector<double>{0.0});
        CHECK(r.min_distance == doctest::Approx(std::sqrt(2.0)));
    }
    SUBCASE("step must tile the sector") {
        const std::vector<double> g{1.0, 1.0};
        CHECK_THROWS_AS(optimize_offsets(2, 4, g, 0.3), InvalidArgument);
    }
}

TEST_CASE("small designs") {
    const auto q = design_eep(1, 4);
    for (std::size_t m = 0; m < 4; ++m) CHECK(q[0].phase(m) == doctest::Approx(m * pi / 2));
    const std::vector<double> one{1.0};
    const auto qj = build_joint(q, one);
    for (std::size_t m = 0; m < 4; ++m) CHECK(std::abs(qj.point(m) - q[0].symbol(m)) < 1e-15);
    CHECK_FALSE(validate_unique(qj));
    CHECK(min_distance(qj).value == doctest::Approx(std::sqrt(2.0)));
    CHECK(papr(build_joint(design_eep(1, 8), one)) == doctest::Approx(1.0));

    const auto b = design_eep(2, 2);
    CHECK(b[1].phase(0) == doctest::Approx(pi / 2));
    CHECK(b[1].phase(1) == doctest::Approx(3 * pi / 2));
    const std::vector<double> g{1.0, 1.0};
    const auto bj = build_joint(b, g);
    const auto pts = oracle::enumerate_sums(oracle::placement(2, {1.0, 1.0}, {0.0, pi / 2}), g);
    REQUIRE(bj.size() == 4);
    for (std::size_t p = 0; p < 4; ++p) {
        CHECK(std::abs(bj.point(p) - pts[p]) < 1e-12);
        CHECK(std::abs(bj.point(p)) == doctest::Approx(std::sqrt(2.0)));
    }
    CHECK(min_distance(bj).value == doctest::Approx(oracle::min_pairwise(pts)));
    CHECK(min_distance(bj).value == doctest::Approx(2.0));
    CHECK(papr(bj) == doctest::Approx(1.0));

    const auto e = build_joint(design_eep(2, 4), g);
    CHECK(std::abs(e.point(0) - (1.0 + std::polar(1.0, pi / 4))) < 1e-12);
}

TEST_CASE("uep spacing sets per-user protection") {
    const auto cs = design_uep(2, 4, std::vector<double>{1.0, 0.5}, std::vector<double>{0.0, pi / 8});
    CHECK(cs[0].min_chord_distance() == doctest::Approx(2 * std::sin(pi / 4)));
    CHECK(cs[1].min_chord_distance() == doctest::Approx(2 * std::sin(pi / 8)));
    CHECK(cs[0].min_chord_distance() == doctest::Approx(1.414).epsilon(1e-3));
    CHECK(cs[1].min_chord_distance() == doctest::Approx(0.765).epsilon(1e-3));
    const auto u = design_uep(1, 4, std::vector<double>{1.0}, std::vector<double>{0.0});
    CHECK(u[0].phases() == design_eep(1, 4)[0].phases());
}
