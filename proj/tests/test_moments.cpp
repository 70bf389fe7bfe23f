#include "scpw/error.hpp"
#include "scpw/moments.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

using namespace scpw;

TEST_CASE("bimodal network of 5000 degree-3 and 5000 degree-5 nodes")
{
    std::vector<std::int64_t> seq(5000, 3);
    seq.insert(seq.end(), 5000, 5);
    const auto m = moments_from_sequence(seq);
    CHECK(m == DegreeMoments{4, 17, 76});
    CHECK(moments_from_bimodal(3, 5000, 5, 5000) == m);
}

TEST_CASE("small sequences")
{
    const std::vector<std::int64_t> ones{1, 1};
    CHECK(moments_from_sequence(ones) == DegreeMoments{1, 1, 1});

    const std::vector<std::int64_t> abc{1, 2, 3};
    const auto m = moments_from_sequence(abc);
    CHECK(m.k1 == 2.0);
    CHECK(m.k2 == doctest::Approx(14.0 / 3.0).epsilon(1e-15));
    CHECK(m.k3 == 12.0);

    CHECK(moments_from_bimodal(2, 1, 4, 3) == DegreeMoments{3.5, 13, 50});
}

TEST_CASE("degenerate bimodal is regular")
{
    for (std::int64_t k : {1, 2, 7, 31})
        CHECK(moments_from_bimodal(k, 3, k, 11) == DegreeMoments{double(k), double(k * k), double(k * k * k)});
}

TEST_CASE("sequence and bimodal agree bit for bit")
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> deg(0, 60), cnt(1, 400);
    for (int i = 0; i < 50; ++i) {
        const auto ka = deg(rng), kb = deg(rng) + 1, na = cnt(rng), nb = cnt(rng);
        std::vector<std::int64_t> seq(na, ka);
        seq.insert(seq.end(), nb, kb);
        CHECK(moments_from_sequence(seq) == moments_from_bimodal(ka, na, kb, nb));
    }
}

TEST_CASE("poisson moments")
{
    CHECK(moments_from_poisson(10) == DegreeMoments{10, 110, 1310});
    CHECK(moments_from_poisson(1) == DegreeMoments{1, 2, 5});
    CHECK(moments_from_poisson(0.5) == DegreeMoments{0.5, 0.75, 1.375});
    CHECK_THROWS_AS(moments_from_poisson(0), InvalidInput);
    CHECK_THROWS_AS(moments_from_poisson(-1), InvalidInput);
}

TEST_CASE("feasibility")
{
    const auto ok = check_feasibility({4, 17, 76});
    CHECK(ok.ok());
    CHECK(ok.jensen_margin == 1.0);
    CHECK(ok.cauchy_schwarz_margin == 15.0);

    const auto regular = check_feasibility({2, 4, 8});
    CHECK(regular.ok());
    CHECK(regular.jensen_margin == 0.0);
    CHECK(regular.cauchy_schwarz_margin == 0.0);

    const auto bad = check_feasibility({2, 3, 100});
    CHECK_FALSE(bad.ok());
    CHECK_FALSE(bad.jensen_ok);
    CHECK(bad.cauchy_schwarz_ok);
    CHECK(bad.describe().find("Jensen") != std::string::npos);

    CHECK_FALSE(check_feasibility({4, 17, 70}).cauchy_schwarz_ok);
    CHECK_FALSE(check_feasibility({-1, 1, 1}).ok());
    CHECK_THROWS_AS(require_feasible({2, 3, 100}), InvalidInput);
    CHECK_NOTHROW(require_feasible({2, 4, 8}));

    // just inside the relative tolerance
    CHECK(check_feasibility({2, 4 * (1 - 1e-13), 8}).jensen_ok);
    CHECK_FALSE(check_feasibility({2, 4 * (1 - 1e-10), 8}).jensen_ok);
}

TEST_CASE("empirical moments are always feasible")
{
    std::mt19937_64 rng(11);
    std::geometric_distribution<std::int64_t> geo(0.05);
    for (int i = 0; i < 200; ++i) {
        std::vector<std::int64_t> seq(1 + rng() % 500);
        for (auto& d : seq)
            d = geo(rng);
        seq[0] += 1;
        CHECK(check_feasibility(moments_from_sequence(seq)).ok());
    }
}

TEST_CASE("large degrees keep full precision")
{
    const std::int64_t big = 1 << 20;
    std::vector<std::int64_t> seq(1000, 1);
    seq.push_back(big);
    const auto m = moments_from_sequence(seq);
    const long double n = 1001;
    CHECK(m.k3 == static_cast<double>((1000.0L + static_cast<long double>(big) * big * big) / n));
}

TEST_CASE("invalid sequences")
{
    CHECK_THROWS_AS(moments_from_sequence(std::vector<std::int64_t>{}), InvalidInput);
    CHECK_THROWS_AS(moments_from_sequence(std::vector<std::int64_t>{0, 0}), InvalidInput);
    CHECK_THROWS_AS(moments_from_sequence(std::vector<std::int64_t>{1, -2}), InvalidInput);
    CHECK_THROWS_AS(moments_from_bimodal(3, 0, 5, 0), InvalidInput);
    CHECK_THROWS_AS(moments_from_bimodal(0, 2, 0, 3), InvalidInput);
}

TEST_CASE("degree text")
{
    CHECK(parse_degree_text("3\n\n5\n  4 \n") == std::vector<std::int64_t>{3, 5, 4});
    CHECK_THROWS_AS(parse_degree_text("3\nfour\n"), InvalidInput);
    CHECK_THROWS_AS(parse_degree_text("3\n-1\n"), InvalidInput);
    CHECK_THROWS_AS(parse_degree_text("2.5\n"), InvalidInput);

    const auto path = std::filesystem::temp_directory_path() / "scpw_degrees_test.txt";
    {
        std::ofstream f(path);
        f << "3\n5\n3\n5\n";
    }
    CHECK(moments_from_sequence(read_degree_file(path)) == DegreeMoments{4, 17, 76});
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_degree_file(path), InvalidInput);
}
