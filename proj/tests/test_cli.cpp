#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ncma/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = ncma::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "ncma_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("design report") {
    const auto r = run({"design", "-K", "2", "-M", "4"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "rotation_deg 45"));
    CHECK(contains(r.out, "joint_points: 16"));
    CHECK(contains(r.out, "unique: yes"));
    CHECK(contains(r.out, "min_distance: 0.585786437627"));
}

TEST_CASE("design refuses coinciding symbols") {
    auto r = run({"design", "--criterion", "uep", "-K", "2", "-M", "4", "--gammas", "1,1",
                  "--offsets", "0,0"});
    CHECK(r.code == 1);
    CHECK(contains(r.out, "collision: (0,1) and (1,0)"));
    r = run({"design", "-K", "3", "-M", "4"});
    CHECK(r.code == 1);
    CHECK(contains(r.err, "collision"));
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({"design", "--users", "0"}).code == 2);
    CHECK(run({"design", "--bogus"}).code == 2);
    CHECK(run({"simulate", "--model", "nakagami"}).code == 2);
    CHECK(run({"sweep", "--axis", "gamma", "--values", "1"}).code == 2);
    CHECK(run({"preset", "nowhere"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("catalog written by design validates") {
    const auto cat = scratch("eep24.json");
    const auto joint = scratch("eep24_joint.csv");
    REQUIRE(run({"design", "-K", "2", "-M", "4", "--catalog", cat.string(), "--joint-csv",
                 joint.string()}).code == 0);
    auto r = run({"validate", "--catalog", cat.string()});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "unique: yes"));
    CHECK(slurp(joint).rfind("tuple,re,im\n", 0) == 0);
    // a tolerance above the minimum distance flags a collision
    r = run({"validate", "--catalog", cat.string(), "--tol", "0.6"});
    CHECK(r.code == 1);
    CHECK(contains(r.out, "unique: no"));
}

TEST_CASE("simulate csv carries its config and is reproducible") {
    const std::vector<std::string> args{"--seed", "11", "simulate", "-K", "2", "-M", "4", "-R", "16",
                                        "--snr", "5", "--max-trials", "20"};
    const auto a = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out.rfind("# config: {", 0) == 0);
    CHECK(contains(a.out, "\"seed\":11"));
    CHECK(contains(a.out, "axis_value,user_id,ser,ber,ci95,symbols,errors\n"));
    auto threaded = args;
    threaded.insert(threaded.begin(), {"-j", "4"});
    CHECK(run(threaded).out == a.out);
    auto other = args;
    other[1] = "12";
    CHECK(run(other).out != a.out);
}

TEST_CASE("seed from the environment") {
    const std::vector<std::string> args{"simulate", "-K", "1", "-M", "4", "-R", "4", "--snr", "0",
                                        "--max-trials", "5"};
    ::setenv("NCMA_SEED", "99", 1);
    const auto env = run(args);
    ::unsetenv("NCMA_SEED");
    auto flag = args;
    flag.insert(flag.begin(), {"--seed", "99"});
    CHECK(env.code == 0);
    CHECK(env.out == run(flag).out);
}

TEST_CASE("config file with flag overrides") {
    const auto path = scratch("cfg.json");
    {
        std::ofstream f(path);
        f << R"({"users": 2, "order": 4, "antennas": 8, "snr_db": 0, "max_trials": 3})";
    }
    const auto r = run({"simulate", "--config", path.string(), "-R", "32"});
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "\"antennas\":32"));
    CHECK(contains(r.out, "\"snr_db\":0"));
    {
        std::ofstream f(path);
        f << R"({"users": 2, "antenas": 8})";
    }
    CHECK(run({"simulate", "--config", path.string()}).code == 2);
}

TEST_CASE("sweep output rows") {
    const auto out = scratch("sweep.csv");
    REQUIRE(run({"-o", out.string(), "sweep", "-K", "2", "-M", "4", "-R", "8", "--axis", "snr",
                 "--values", "0,10", "--max-trials", "4"}).code == 0);
    const auto text = slurp(out);
    CHECK(contains(text, "\n0,0,"));
    CHECK(contains(text, "\n10,1,"));
    CHECK(run({"sweep", "--axis", "snr", "--values", "10,0", "--max-trials", "2"}).code == 2);
}

TEST_CASE("hybrid plan and search") {
    auto r = run({"hybrid", "-N", "4", "-g", "2", "-M", "4"});
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "\"slot_fraction\": 0.5"));
    r = run({"hybrid", "-N", "6", "-g", "3", "-M", "4"});
    CHECK(r.code == 1);
    r = run({"hybrid", "-N", "4", "-M", "4", "--search", "1,2", "--target-ser", "0.1", "--snr",
             "-60", "-R", "8", "--max-trials", "5"});
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "# selected_g: 1 fallback: true"));
}

TEST_CASE("frequency plan") {
    const auto r = run({"plan", "--freq", "2", "--pol", "2", "--constellations", "2", "--beams", "8"});
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "# colors: 8"));
    CHECK(contains(r.out, "capacity_multiplier: 2"));
    CHECK(run({"plan", "--pol", "3"}).code == 2);
}

TEST_CASE("presets load back as configs") {
    for (const char* name : {"vsat_uplink", "mega_leo_gw", "mega_leo_maritime", "terrestrial_ntn"}) {
        const auto path = scratch(std::string(name) + ".json");
        REQUIRE(run({"-o", path.string(), "preset", name}).code == 0);
        const auto r = run({"simulate", "--config", path.string(), "--max-trials", "1", "-R", "8"});
        CHECK(r.code == 0);
    }
}

TEST_CASE("dump cloud") {
    const auto r = run({"dump-cloud", "-K", "2", "-M", "4", "-R", "64", "--frames", "2",
                        "--frame-length", "10"});
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "t,re,im,sent\n"));
    std::istringstream is(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(is, line)) rows += !line.empty() && line[0] != '#';
    CHECK(rows == 21);
}

TEST_CASE("single user design") {
    const auto r = run({"design", "--users", "1", "--order", "4"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "min_distance: 1.41421356237"));
}
