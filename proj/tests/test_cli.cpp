#include "scpw/cli.hpp"
#include "scpw/pipeline.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace scpw;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "scpw");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            row.push_back(cell);
        if (!line.empty() && line.back() == ',')
            row.emplace_back();
        rows.push_back(row);
    }
    return rows;
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "scpw_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("threshold")
{
    const auto r = run({"threshold", "--moments", "4,17,76"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["delta_c"].get<double>() == doctest::Approx(4.0 / 13));
    CHECK(j["a"].get<double>() == doctest::Approx(-72));
    CHECK(j["b"].get<double>() == doctest::Approx(21.125));
    CHECK(j["eigenvalues_at"].size() == 1u);
    CHECK(j["eigenvalues_at"][0]["stability"] == "critical");

    const auto at = json::parse(run({"threshold", "--moments", "4,17,76", "--delta", "0.2,0.5"}).out);
    CHECK(at["eigenvalues_at"][0]["stability"] == "stable_dfe");
    CHECK(at["eigenvalues_at"][1]["stability"] == "unstable_dfe");
    CHECK(at["eigenvalues_at"][1]["eigs"][0].get<double>() > 0);
}

TEST_CASE("threshold on a regular network")
{
    const auto r = run({"threshold", "--moments", "2,4,8"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["delta_c"].get<double>() == 1.0);
    CHECK(j["a"].get<double>() == -12.0);
    CHECK(j["b"].get<double>() == 2.0);
    CHECK(j.contains("warning"));
    CHECK(j["bifurcation"]["a_contraction"].is_null());
}

TEST_CASE("threshold from a degree file")
{
    const auto path = scratch("degrees.txt");
    {
        std::ofstream f(path);
        for (int i = 0; i < 10; ++i)
            f << (i % 2 ? 3 : 5) << '\n';
    }
    const auto r = run({"threshold", "--degrees", path.string()});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["delta_c"].get<double>() == doctest::Approx(4.0 / 13));
}

TEST_CASE("input errors exit with code 2")
{
    auto check_error = [](const Result& r, const std::string& needle) {
        CHECK(r.code == 2);
        CHECK(r.out.empty());
        const auto j = json::parse(r.err);
        CHECK(j["exit_code"] == 2);
        CHECK(j["error"].get<std::string>().find(needle) != std::string::npos);
    };
    check_error(run({"threshold", "--moments", "2,3,100"}), "Jensen");
    check_error(run({"threshold", "--moments", "4,17,70"}), "Cauchy");
    check_error(run({"threshold"}), "moments source");
    check_error(run({"threshold", "--moments", "4,17,76", "--poisson", "3"}), "exactly one");
    check_error(run({"threshold", "--moments", "4,17"}), "expects 3");
    check_error(run({"threshold", "--moments", "4,x,76"}), "not a number");
    check_error(run({"threshold", "--degrees", "/nonexistent/degrees.txt"}), "degrees.txt");
    check_error(run({"equilibrium", "--moments", "4,17,76"}), "--delta");
    check_error(run({"bifurcation", "--moments", "4,17,76", "--delta-min", "0"}), "--delta-max");
    check_error(run({"bifurcation", "--moments", "4,17,76", "--delta-min", "0", "--delta-max", "1"}), "positive");
    check_error(run({"bifurcation", "--moments", "4,17,76", "--delta-min", "0.1", "--delta-max", "1", "--steps",
                     "1"}),
                "2 steps");
    check_error(run({"bifurcation", "--moments", "4,17,76", "--delta-min", "0.1", "--delta-max", "1", "--spacing",
                     "cubic"}),
                "spacing");
    check_error(run({"netsim", "--moments", "4,17,76", "--delta", "1"}), "degree source");
    check_error(run({"sensitivity", "--regime", "mid", "--at", "4,17,76"}), "regime");

    const auto usage = run({"frobnicate"});
    CHECK(usage.code == 2);
    CHECK(json::parse(usage.err)["kind"] == "usage");
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("equilibrium")
{
    const auto r = run({"equilibrium", "--bimodal", "3,5000,5,5000", "--delta", "0.5"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["solution"]["w_star"].get<double>() == doctest::Approx(0.41530901396774833).epsilon(1e-10));
    CHECK(j["solution"]["method"] == "newton");
    CHECK(j["stability"] == "unstable_dfe");
    CHECK(j.contains("near"));
    CHECK(j.contains("far"));

    const auto below = json::parse(run({"equilibrium", "--moments", "4,17,76", "--delta", "0.2"}).out);
    CHECK(below["solution"]["status"] == "no_endemic");
    CHECK_FALSE(below.contains("near"));
}

TEST_CASE("simulate")
{
    const auto r = run({"simulate", "--moments", "4,17,76", "--delta", "0.5", "--t-end", "300"});
    REQUIRE(r.code == 0);
    const auto rows = csv(r.out);
    CHECK(rows[0] == std::vector<std::string>{"T", "v", "w", "x", "y", "z"});
    CHECK(std::stod(rows.back()[0]) == 300.0);
    CHECK(std::stod(rows.back()[2]) == doctest::Approx(0.415309).epsilon(1e-5));
}

TEST_CASE("bifurcation sweep reproduces the bimodal figure")
{
    const auto r = run({"bifurcation", "--moments", "4,17,76", "--delta-min", "0.05", "--delta-max", "1.0",
                        "--steps", "96"});
    REQUIRE(r.code == 0);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 97u);
    CHECK(rows[0] == std::vector<std::string>{"delta", "eta", "eps", "w_ode", "w_poly", "w_near", "w_far"});
    double prev_delta = 0.0, prev_w = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        REQUIRE(row.size() == 7u);
        const double delta = std::stod(row[0]);
        CHECK(delta > prev_delta);
        prev_delta = delta;
        const double w_ode = std::stod(row[3]), w_poly = std::stod(row[4]);
        if (delta <= 4.0 / 13) {
            CHECK(w_ode == 0.0);
            CHECK(w_poly == 0.0);
            CHECK(row[5].empty());
            CHECK(row[6].empty());
        } else {
            CHECK(std::abs(w_ode - w_poly) < 1e-6);
            CHECK(w_poly > prev_w);
            prev_w = w_poly;
        }
    }
    CHECK(prev_w > 0.7);
}

TEST_CASE("poisson sweep crosses at 0.1")
{
    const auto r = run({"bifurcation", "--poisson", "10", "--delta-min", "0.02", "--delta-max", "0.5", "--steps",
                        "49"});
    REQUIRE(r.code == 0);
    const auto rows = csv(r.out);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double delta = std::stod(rows[i][0]);
        CHECK((std::stod(rows[i][4]) > 0) == (delta > 0.1 + 1e-12));
    }
}

TEST_CASE("sensitivity")
{
    const auto dir = scratch("sens");
    fs::remove_all(dir);
    const auto r = run({"sensitivity", "--out", dir.string(), "--resolution", "21"});
    REQUIRE(r.code == 0);
    int files = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        ++files;
        std::ifstream f(e.path());
        std::string header;
        std::getline(f, header);
        CHECK(header == "k1,k2,k3,regime,delta,feasible,d_k1,d_k2,d_k3");
    }
    CHECK(files == 6);
    CHECK(fs::exists(dir / "sensitivity_near_k3_20.csv"));
    CHECK(fs::exists(dir / "sensitivity_far_k3_400.csv"));

    const auto cell = csv(run({"sensitivity", "--at", "4,17,76", "--regime", "near"}).out);
    REQUIRE(cell.size() == 2u);
    CHECK(std::stod(cell[1][6]) == doctest::Approx(-17.0 / 46));
    CHECK(std::stod(cell[1][7]) == doctest::Approx(4.0 / 46));
    CHECK(std::stod(cell[1][8]) == 0.0);

    const auto masked = csv(run({"sensitivity", "--at", "4,15,76", "--regime", "far"}).out);
    CHECK(masked[1][5] == "false");
    CHECK(masked[1][6].empty());
}

TEST_CASE("netsim and validate are deterministic")
{
    const auto edges = scratch("net.txt");
    const std::vector<std::string> sim{"netsim", "--poisson", "8", "--nodes", "300", "--delta", "0.3",
                                       "--t-max", "20", "--seed", "4", "--edges-out", edges.string()};
    const auto a = run(sim);
    REQUIRE(a.code == 0);
    CHECK(a.out.rfind("t,prevalence\n", 0) == 0);
    CHECK(run(sim).out == a.out);

    // same network read back from disk, same seed
    const auto b = run({"netsim", "--edges", edges.string(), "--delta", "0.3", "--t-max", "20", "--seed", "4"});
    CHECK(b.out == a.out);

    const std::vector<std::string> val{"validate", "--poisson", "10", "--nodes", "400", "--delta", "0.2",
                                       "--runs", "4", "--t-max", "40", "--seed", "9"};
    const auto v = run(val);
    REQUIRE(v.code == 0);
    const auto j = json::parse(v.out);
    for (const char* key : {"delta", "runs", "mean", "sd", "extinct_count", "w_scpw", "gap"})
        CHECK(j.contains(key));
    CHECK(j["gap"].get<double>() == doctest::Approx(j["mean"].get<double>() - j["w_scpw"].get<double>()));
    CHECK(run(val).out == v.out);
}

TEST_CASE("output file")
{
    const auto path = scratch("threshold.json");
    const auto r = run({"threshold", "--poisson", "10", "--out", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    CHECK(json::parse(f)["delta_c"].get<double>() == doctest::Approx(0.1));
}
