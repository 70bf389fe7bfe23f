#include "scpw/threshold.hpp"

#include "scpw/error.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <functional>

namespace scpw {

namespace {

double quad_form(const Vec3& u, const Mat3& m, const Vec3& v)
{
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            acc += u[i] * m[i][j] * v[j];
    return acc;
}

} // namespace

std::string to_string(Stability s)
{
    switch (s) {
    case Stability::stable_dfe:
        return "stable_dfe";
    case Stability::critical:
        return "critical";
    case Stability::unstable_dfe:
        return "unstable_dfe";
    }
    return "unknown";
}

double epidemic_threshold(const DegreeMoments& m)
{
    require_feasible(m);
    if (!(m.k2 > m.k1))
        throw InvalidInput("epidemic threshold undefined: <k^2> <= <k> (all degrees <= 1)");
    return m.k1 / (m.k2 - m.k1);
}

DfeLinearization dfe_linearization(const ScpwParams& p)
{
    return dfe_linearization(p.k1, p.kbar, p.delta);
}

DfeLinearization dfe_linearization(double k1, double kbar, double delta)
{
    const double d = delta;
    DfeLinearization lin;
    lin.jacobian = {{{-1.0, k1 * d, 0.0}, {0.0, kbar * d - (d + 1.0), 1.0}, {0.0, 2.0 * d, -2.0}}};

    const double u = d * (kbar - 1.0);
    lin.trace_B = u - 3.0;
    lin.det_B = 2.0 * (1.0 - d * kbar);
    lin.discriminant_B = (u + 1.0) * (u + 1.0) + 8.0 * d;

    // Numerically stable quadratic roots; the small root goes through det/q.
    const double root = std::sqrt(lin.discriminant_B);
    const double q = 0.5 * (lin.trace_B - root);
    const double other = lin.det_B / q;
    lin.eigenvalues = {-1.0, q, other};
    std::sort(lin.eigenvalues.begin(), lin.eigenvalues.end(), std::greater<>());
    return lin;
}

Stability stability(const ScpwParams& p)
{
    const double gap = p.delta - p.delta_c;
    if (std::abs(gap) <= kCriticalBand)
        return Stability::critical;
    return gap < 0.0 ? Stability::stable_dfe : Stability::unstable_dfe;
}

Mat3 critical_jacobian(const ScpwParams& p)
{
    return dfe_linearization(with_delta(p, p.delta_c)).jacobian;
}

std::array<Mat3, 2> critical_hessians(const ScpwParams& p)
{
    const double c = p.alpha * p.delta_c / p.k1;
    const Mat3 h2 = {{{0.0, -c, 0.0}, {-c, -2.0 - 2.0 * p.beta * p.delta_c, c}, {0.0, c, 0.0}}};
    const Mat3 h3 = {{{0.0, 0.0, 0.0}, {0.0, 4.0, 0.0}, {0.0, 0.0, 0.0}}};
    return {h2, h3};
}

BifurcationCoefficients bifurcation_coefficients(const DegreeMoments& m)
{
    const double delta_c = epidemic_threshold(m);
    BifurcationCoefficients bc;
    bc.left_vec = {0.0, 2.0, 1.0};
    bc.right_vec = {m.k1, 1.0 / delta_c, 1.0};

    bc.a = -4.0 * (m.k3 / m.k1 - 1.0);
    bc.b = 2.0 / (delta_c * delta_c);

    // dJ/ddelta at the DFE is independent of delta; kbar - 1 = 1/delta_c - 1.
    const double kbar = (m.k2 - m.k1) / m.k1;
    const Mat3 dj = {{{0.0, m.k1, 0.0}, {0.0, kbar - 1.0, 0.0}, {0.0, 2.0, 0.0}}};
    bc.b_contraction = quad_form(bc.left_vec, dj, bc.right_vec);

    if (m.variance() > kVarianceFloor * m.k1 * m.k1) {
        const auto p = derive_params(m, delta_c);
        const auto [h2, h3] = critical_hessians(p);
        bc.a_contraction = bc.left_vec[1] * quad_form(bc.right_vec, h2, bc.right_vec) +
                           bc.left_vec[2] * quad_form(bc.right_vec, h3, bc.right_vec);
        bc.routes_agree = std::abs(bc.a - *bc.a_contraction) <= 1e-10 * std::abs(bc.a);
        if (!bc.routes_agree)
            spdlog::debug("closed-form a = {} disagrees with Hessian contraction a = {}", bc.a, *bc.a_contraction);
    }
    return bc;
}

} // namespace scpw
