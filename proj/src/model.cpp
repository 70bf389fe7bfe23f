#include "scpw/model.hpp"

#include "scpw/error.hpp"

#include <cmath>
#include <string>

namespace scpw {

namespace {

struct ClosureConstants {
    double alpha;
    double beta;
};

ClosureConstants closure_constants(const DegreeMoments& m)
{
    require_feasible(m);
    const double var = m.k2 - m.k1 * m.k1;
    if (!(var > kVarianceFloor * m.k1 * m.k1))
        throw InvalidInput("degree distribution is (near-)regular: variance " + std::to_string(var) +
                           " leaves the closure constants alpha, beta undefined");
    return {(m.k2 * m.k2 - m.k1 * m.k3) / var, (m.k3 - m.k2 * m.k1) / var - 1.0};
}

constexpr double kClampTol = 1e-12;
constexpr double kConservationTol = 1e-9;

} // namespace

ScpwParams derive_params(const DegreeMoments& m, double delta)
{
    const auto [alpha, beta] = closure_constants(m);
    if (!(m.k2 > m.k1))
        throw InvalidInput("epidemic threshold undefined for <k^2> <= <k>");
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw InvalidInput("delta must be a nonnegative finite number");

    ScpwParams p;
    p.k1 = m.k1;
    p.alpha = alpha;
    p.beta = beta;
    p.delta_c = m.k1 / (m.k2 - m.k1);
    p.kbar = (m.k2 - m.k1) / m.k1;
    p.sigma = m.k1 * p.delta_c;
    p.lambda = alpha * p.delta_c / m.k1;
    p.mu = beta * p.delta_c;
    p.delta = delta;
    return p;
}

ScpwParams with_delta(ScpwParams p, double delta)
{
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw InvalidInput("delta must be a nonnegative finite number");
    p.delta = delta;
    return p;
}

NState NState::make(double v, double w, double x, double y, double z)
{
    std::array<double, 5> c{v, w, x, y, z};
    for (auto& ci : c) {
        if (!std::isfinite(ci))
            throw InvalidInput("state component is not finite");
        if (ci < -kClampTol)
            throw InvalidInput("state component " + std::to_string(ci) + " is negative");
        if (ci < 0.0)
            ci = 0.0;
    }
    const double nodes = c[0] + c[1];
    const double edges = 2.0 * c[2] + c[3] + c[4];
    if (std::abs(nodes - 1.0) > kConservationTol)
        throw InvalidInput("v + w = " + std::to_string(nodes) + " violates node conservation");
    if (std::abs(edges - 1.0) > kConservationTol)
        throw InvalidInput("2x + y + z = " + std::to_string(edges) + " violates edge conservation");
    c[0] /= nodes;
    c[1] /= nodes;
    for (int i = 2; i < 5; ++i)
        c[i] /= edges;
    for (const auto ci : c)
        if (ci > 1.0 + kClampTol)
            throw InvalidInput("state component exceeds 1");
    return NState(c);
}

NState NState::dfe()
{
    return NState({1.0, 0.0, 0.0, 1.0, 0.0});
}

Rhs rhs_nondim(const std::array<double, 5>& s, const ScpwParams& p)
{
    const auto [v, w, x, y, z] = s;
    const double sum = x + y;
    if (!(sum >= kClosureFloor))
        throw NumericalError("closure denominator x + y = " + std::to_string(sum) + " below floor");

    const double d = p.delta;
    // Per-edge closure rate shared by the three edge equations.
    const double closure = p.alpha * d / p.k1 * v * x / (sum * sum) + p.beta * d * x / sum;
    const double infection = p.k1 * d * x;

    Rhs r;
    r[0] = w - infection;
    r[1] = infection - w;
    r[2] = z - (d + 1.0) * x + closure * (y - x);
    r[3] = 2.0 * x - 2.0 * closure * y;
    r[4] = -2.0 * z + 2.0 * d * x + 2.0 * closure * x;
    return r;
}

Rhs rhs_nondim(const NState& s, const ScpwParams& p)
{
    return rhs_nondim(s.values(), p);
}

double closure_q(const DimState& s, double alpha, double beta)
{
    const double susceptible_stubs = s.SI + s.SS;
    return alpha * s.S / (susceptible_stubs * susceptible_stubs) + beta / susceptible_stubs;
}

Rhs rhs_dim(const DimState& s, double tau, double gamma, const DegreeMoments& m)
{
    const auto [alpha, beta] = closure_constants(m);
    const double stubs = s.SI + s.SS;
    if (!(stubs >= kClosureFloor * m.k1 * s.n))
        throw NumericalError("closure denominator [SI] + [SS] below floor");
    const double q = closure_q(s, alpha, beta);
    const double triple = tau * s.SI * q;

    Rhs r;
    r[0] = gamma * s.I - tau * s.SI;
    r[1] = tau * s.SI - gamma * s.I;
    r[2] = gamma * (s.II - s.SI) - tau * s.SI + triple * (s.SS - s.SI);
    r[3] = 2.0 * gamma * s.SI - 2.0 * triple * s.SS;
    r[4] = -2.0 * gamma * s.II + 2.0 * tau * s.SI + 2.0 * triple * s.SI;
    return r;
}

NState nondimensionalize(const DimState& s)
{
    if (!(s.n > 0.0) || !(s.k1 > 0.0))
        throw InvalidInput("population size and mean degree must be positive");
    const double edges = s.k1 * s.n;
    return NState::make(s.S / s.n, s.I / s.n, s.SI / edges, s.SS / edges, s.II / edges);
}

DimState dimensionalize(const NState& s, double n, double k1)
{
    if (!(n > 0.0) || !(k1 > 0.0))
        throw InvalidInput("population size and mean degree must be positive");
    const double edges = k1 * n;
    return {s.v() * n, s.w() * n, s.x() * edges, s.y() * edges, s.z() * edges, n, k1};
}

} // namespace scpw
