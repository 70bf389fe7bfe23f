#include "scpw/error.hpp"
#include "scpw/model.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace scpw;
using doctest::Approx;

namespace {

const DegreeMoments bimodal{4, 17, 76};
const DegreeMoments poisson{10, 110, 1310};

DegreeMoments random_feasible(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double k1 = 1.0 + 20.0 * u(rng);
    const double k2 = k1 * k1 * (1.0 + 0.01 + 3.0 * u(rng));
    const double k3 = k2 * k2 / k1 * (1.0 + 0.01 + 3.0 * u(rng));
    return {k1, k2, k3};
}

// Physically consistent state: prevalence p, pair correlation c.
NState random_state(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double p = 0.02 + 0.9 * u(rng);
    const double c = 0.5 * u(rng);
    const double x = p * (1 - p) * (1 - c);
    const double y = (1 - p) * (1 - p) + p * (1 - p) * c;
    const double z = p * p + p * (1 - p) * c;
    return NState::make(1 - p, p, x, y, z);
}

double rel(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

} // namespace

TEST_CASE("parameters of the bimodal network")
{
    const auto p = derive_params(bimodal, 0.5);
    CHECK(p.alpha == Approx(-15).epsilon(1e-14));
    CHECK(p.beta == Approx(7).epsilon(1e-14));
    CHECK(p.delta_c == Approx(4.0 / 13).epsilon(1e-14));
    CHECK(p.kbar == Approx(13.0 / 4).epsilon(1e-14));
    CHECK(p.sigma == Approx(16.0 / 13).epsilon(1e-14));
    CHECK(p.lambda == Approx(-15.0 / 13).epsilon(1e-14));
    CHECK(p.mu == Approx(28.0 / 13).epsilon(1e-14));
    CHECK(p.delta == 0.5);
}

TEST_CASE("parameters of the analytic poisson distribution")
{
    const auto p = derive_params(poisson, 1.0);
    CHECK(p.alpha == Approx(-100).epsilon(1e-13));
    CHECK(p.beta == Approx(20).epsilon(1e-13));
    CHECK(p.delta_c == Approx(0.1).epsilon(1e-14));
    CHECK(p.kbar == Approx(10).epsilon(1e-14));
}

TEST_CASE("derived constants on random feasible triples")
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        const auto m = random_feasible(rng);
        const auto p = derive_params(m, 1.0);
        CHECK(rel(p.alpha / p.k1 + p.beta, p.kbar) < 1e-12);
        CHECK(rel(p.sigma, p.k1 * p.delta_c) < 1e-14);
        CHECK(rel(p.lambda, p.alpha * p.delta_c / p.k1) < 1e-14);
        CHECK(rel(p.mu, p.beta * p.delta_c) < 1e-14);
        CHECK(p.delta_c > 0);
    }
}

TEST_CASE("derive_params rejects invalid input")
{
    CHECK_THROWS_AS(derive_params({2, 4, 8}, 1.0), InvalidInput);
    CHECK_THROWS_AS(derive_params({3, 9 * (1 + 1e-11), 27 * (1 + 1e-10)}, 1.0), InvalidInput);
    CHECK_THROWS_AS(derive_params({2, 3, 100}, 1.0), InvalidInput);
    CHECK_THROWS_AS(derive_params({0.5, 0.3, 0.5}, 1.0), InvalidInput);
    CHECK_THROWS_AS(derive_params(bimodal, -0.1), InvalidInput);
    CHECK_THROWS_AS(derive_params(bimodal, std::nan("")), InvalidInput);
}

TEST_CASE("state construction")
{
    const auto s = NState::make(0.9, 0.1, 0.1, 0.75, 0.05);
    CHECK(s.v() == 0.9);
    CHECK(s.z() == 0.05);

    const auto clamped = NState::make(1.0, -5e-13, 0.0, 1.0, -5e-13);
    CHECK(clamped.w() == 0.0);
    CHECK(clamped.z() == 0.0);

    CHECK_THROWS_AS(NState::make(1.0, -1e-9, 0.0, 1.0, 0.0), InvalidInput);
    CHECK_THROWS_AS(NState::make(0.9, 0.2, 0.1, 0.75, 0.05), InvalidInput);
    CHECK_THROWS_AS(NState::make(0.9, 0.1, 0.1, 0.8, 0.05), InvalidInput);

    const auto nudged = NState::make(0.9 + 5e-10, 0.1, 0.1, 0.75, 0.05);
    CHECK(std::abs(nudged.v() + nudged.w() - 1.0) < 1e-15);
    CHECK(NState::dfe() == NState::make(1, 0, 0, 1, 0));
}

TEST_CASE("nondimensional right-hand side")
{
    const auto p = derive_params(bimodal, 0.5);

    SUBCASE("frozen regression vector")
    {
        // exact rational evaluation of the dimensional equations with the original Q form
        const auto r = rhs_nondim(NState::make(0.9, 0.1, 0.1, 0.7, 0.1), p);
        CHECK(r[0] == Approx(-0.1).epsilon(1e-14));
        CHECK(r[1] == Approx(0.1).epsilon(1e-14));
        CHECK(r[2] == Approx(139.0 / 2560).epsilon(1e-13));
        CHECK(r[3] == Approx(-111.0 / 2560).epsilon(1e-13));
        CHECK(r[4] == Approx(-167.0 / 2560).epsilon(1e-13));
    }

    SUBCASE("disease-free state is a fixed point")
    {
        for (double c : rhs_nondim(NState::dfe(), p))
            CHECK(c == 0.0);
        // with x = w = 0 only the II-pair recovery terms survive
        for (double y : {0.6, 0.2}) {
            const double z = 1 - y;
            const auto r = rhs_nondim(NState::make(1, 0, 0, y, z), p);
            CHECK(r == Rhs{0, 0, z, 0, -2 * z});
        }
    }

    SUBCASE("no transmission")
    {
        const auto q = with_delta(p, 0.0);
        const auto s = NState::make(0.7, 0.3, 0.2, 0.45, 0.15);
        const auto r = rhs_nondim(s, q);
        CHECK(r[0] == Approx(0.3));
        CHECK(r[1] == Approx(-0.3));
        CHECK(r[2] == Approx(0.15 - 0.2));
        CHECK(r[3] == Approx(0.4));
        CHECK(r[4] == Approx(-0.3));
    }

    SUBCASE("conservation")
    {
        std::mt19937_64 rng(9);
        for (int i = 0; i < 500; ++i) {
            const auto r = rhs_nondim(random_state(rng), with_delta(p, 0.1 + 3.0 * (i % 7)));
            CHECK(std::abs(r[0] + r[1]) < 1e-14);
            CHECK(std::abs(2 * r[2] + r[3] + r[4]) < 1e-14);
        }
    }

    SUBCASE("closure floor")
    {
        CHECK_THROWS_AS(rhs_nondim(NState::make(0, 1, 0, 0, 1), p), NumericalError);
    }
}

TEST_CASE("closure rewrite matches the original form")
{
    std::mt19937_64 rng(21);
    for (int i = 0; i < 300; ++i) {
        const auto m = random_feasible(rng);
        const auto p = derive_params(m, 1.0);
        const auto d = dimensionalize(random_state(rng), 1e4, m.k1);
        const double ns = (d.SI + d.SS) / d.S;
        const double original =
            1.0 / (ns * d.S) *
            ((m.k2 * (m.k2 - m.k1 * ns) + m.k3 * (ns - m.k1)) / (ns * (m.k2 - m.k1 * m.k1)) - 1.0);
        CHECK(rel(closure_q(d, p.alpha, p.beta), original) < 1e-12);
    }
}

TEST_CASE("dimensional right-hand side")
{
    SUBCASE("scaling consistency")
    {
        const double n = 1e4, tau = 0.15, gamma = 1.0;
        const auto s = NState::make(0.9, 0.1, 0.1, 0.75, 0.05);
        const auto r = rhs_dim(dimensionalize(s, n, bimodal.k1), tau, gamma, bimodal);
        const auto nd = rhs_nondim(s, derive_params(bimodal, tau / gamma));
        const double scale[5] = {n, n, bimodal.k1 * n, bimodal.k1 * n, bimodal.k1 * n};
        for (int i = 0; i < 5; ++i)
            CHECK(r[i] == Approx(gamma * scale[i] * nd[i]).epsilon(1e-10));
    }

    SUBCASE("faster clock")
    {
        const auto s = NState::make(0.8, 0.2, 0.12, 0.6, 0.16);
        const auto a = rhs_dim(dimensionalize(s, 500, 4), 0.3, 1.0, bimodal);
        const auto b = rhs_dim(dimensionalize(s, 500, 4), 0.6, 2.0, bimodal);
        for (int i = 0; i < 5; ++i)
            CHECK(b[i] == Approx(2 * a[i]).epsilon(1e-13));
    }

    SUBCASE("disease free")
    {
        const DimState dfe{1e4, 0, 0, 4e4, 0, 1e4, 4};
        for (double c : rhs_dim(dfe, 0.2, 1.0, bimodal))
            CHECK(c == 0.0);
    }

    SUBCASE("conservation")
    {
        std::mt19937_64 rng(4);
        for (int i = 0; i < 100; ++i) {
            const auto r = rhs_dim(dimensionalize(random_state(rng), 1e4, 4), 0.7, 1.0, bimodal);
            CHECK(std::abs(r[0] + r[1]) < 1e-14 * 1e4);
            CHECK(std::abs(2 * r[2] + r[3] + r[4]) < 1e-14 * 1e4 * 4);
        }
    }
}

TEST_CASE("nondimensionalization")
{
    const auto s = nondimensionalize({9000, 1000, 4000, 30000, 2000, 1e4, 4});
    CHECK(s.v() == Approx(0.9));
    CHECK(s.w() == Approx(0.1));
    CHECK(s.x() == Approx(0.1));
    CHECK(s.y() == Approx(0.75));
    CHECK(s.z() == Approx(0.05));

    CHECK(nondimensionalize({100, 0, 0, 300, 0, 100, 3}) == NState::dfe());
    const auto d = dimensionalize(NState::dfe(), 100, 3);
    CHECK(d.S == 100);
    CHECK(d.SS == 300);

    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        const auto st = random_state(rng);
        const auto back = nondimensionalize(dimensionalize(st, 12345, 6.5));
        for (int j = 0; j < 5; ++j)
            CHECK(rel(back.values()[j], st.values()[j]) < 1e-14);
    }
}
