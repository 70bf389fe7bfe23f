#include "scpw/equilibrium.hpp"

#include "scpw/dynamics.hpp"
#include "scpw/error.hpp"
#include "scpw/threshold.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace scpw {

namespace {

constexpr double kRootSlack = 1e-12;

struct Jacobian2 {
    double px, py, qx, qy;
};

Jacobian2 residual_jacobian(double x, double y, const ScpwParams& p)
{
    const double e = p.eps();
    const double e2 = e * e;
    const double s = x + y;
    const double r = 1.0 - y - 2.0 * x;
    const double ls = p.lambda * p.sigma;
    Jacobian2 j;
    j.px = e2 * (2.0 * r * s - 2.0 * s * s) -
           e * (p.delta_c * s * (3.0 * x + y) + 2.0 * p.lambda * x + p.mu * x * (3.0 * x + 2.0 * y)) +
           3.0 * ls * x * x;
    j.py = e2 * (2.0 * r * s - s * s) - e * (2.0 * p.delta_c * x * s + p.mu * x * x);
    j.qx = 2.0 * e2 * s - e * p.mu * y + ls * y;
    j.qy = 2.0 * e2 * s - e * (p.lambda + p.mu * (s + y)) + ls * x;
    return j;
}

bool feasible_root(double x, double y)
{
    return x > kRootSlack && y >= -kRootSlack && 2.0 * x + y <= 1.0 + kRootSlack;
}

void require_endemic_regime(const ScpwParams& p)
{
    if (!(p.delta > p.delta_c))
        throw InvalidInput("asymptotic approximations need delta > delta_c (delta = " + std::to_string(p.delta) +
                           ", delta_c = " + std::to_string(p.delta_c) + ")");
}

EquilibriumSolution base_solution(const ScpwParams& p)
{
    EquilibriumSolution sol;
    sol.eps = p.delta > 0.0 ? p.eps() : INFINITY;
    sol.eta = 1.0 - sol.eps;
    return sol;
}

void finish(EquilibriumSolution& sol, const ScpwParams& p)
{
    const auto r = residuals(sol.x_star, sol.y_star, p);
    sol.residual_P = r.P;
    sol.residual_Q = r.Q;
}

} // namespace

std::string to_string(EquilibriumMethod m)
{
    switch (m) {
    case EquilibriumMethod::newton:
        return "newton";
    case EquilibriumMethod::ode_limit:
        return "ode_limit";
    case EquilibriumMethod::near_asymptotic:
        return "near_asymptotic";
    case EquilibriumMethod::far_asymptotic:
        return "far_asymptotic";
    }
    return "unknown";
}

std::string to_string(EquilibriumStatus s)
{
    switch (s) {
    case EquilibriumStatus::endemic:
        return "endemic";
    case EquilibriumStatus::no_endemic:
        return "no_endemic";
    case EquilibriumStatus::critical:
        return "critical";
    }
    return "unknown";
}

Residuals residuals(double x, double y, const ScpwParams& p)
{
    const double e = p.eps();
    const double s = x + y;
    const double ls = p.lambda * p.sigma;
    Residuals r;
    r.P = e * e * (1.0 - y - 2.0 * x) * s * s -
          e * (p.delta_c * x * s * s + p.lambda * x * x + p.mu * x * x * s) + ls * x * x * x;
    r.Q = e * e * s * s - e * (p.lambda * y + p.mu * y * s) + ls * x * y;
    return r;
}

bool newton_polish(const ScpwParams& p, double& x, double& y, const NewtonOptions& opts, int* iterations)
{
    auto r = residuals(x, y, p);
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        if (std::max(std::abs(r.P), std::abs(r.Q)) <= 1e-16)
            break;
        const auto j = residual_jacobian(x, y, p);
        const double det = j.px * j.qy - j.py * j.qx;
        if (det == 0.0 || !std::isfinite(det))
            return false;
        const double dx = -(r.P * j.qy - j.py * r.Q) / det;
        const double dy = -(j.px * r.Q - r.P * j.qx) / det;

        // Halve until both residuals decrease.
        double step = 1.0;
        bool accepted = false;
        for (int h = 0; h <= opts.max_halvings; ++h, step *= 0.5) {
            const auto rn = residuals(x + step * dx, y + step * dy, p);
            if (std::abs(rn.P) < std::abs(r.P) && std::abs(rn.Q) < std::abs(r.Q)) {
                x += step * dx;
                y += step * dy;
                r = rn;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            break;
    }
    if (iterations)
        *iterations = it;
    return std::abs(r.P) < opts.tol && std::abs(r.Q) < opts.tol && feasible_root(x, y);
}

EquilibriumSolution solve_endemic(const ScpwParams& p, const NewtonOptions& opts)
{
    auto sol = base_solution(p);
    const auto regime = stability(p);
    if (regime != Stability::unstable_dfe) {
        sol.status = regime == Stability::critical ? EquilibriumStatus::critical : EquilibriumStatus::no_endemic;
        sol.x_star = 0.0;
        sol.y_star = 1.0;
        sol.w_star = 0.0;
        finish(sol, p);
        return sol;
    }

    // The expansion for the current regime first; in the mid-regime the other one is often closer.
    const bool near_first = sol.eta < 0.5;
    const EquilibriumSolution guesses[] = {near_first ? near_threshold_approx(p) : far_threshold_approx(p),
                                           near_first ? far_threshold_approx(p) : near_threshold_approx(p)};
    double x = 0.0;
    double y = 0.0;
    int iterations = 0;
    bool converged = false;
    for (const auto& guess : guesses) {
        x = guess.x_star;
        y = std::max(guess.y_star, 0.0);
        if ((converged = newton_polish(p, x, y, opts, &iterations)))
            break;
    }
    if (converged) {
        sol.method = EquilibriumMethod::newton;
    } else {
        spdlog::info("Newton from both asymptotic guesses failed at delta = {}; using the ODE limit", p.delta);
        const auto ss = steady_state(p, seeded_state(1e-2), 1e-10, 1e5, {1e-10, 1e-12, false});
        if (!ss.converged)
            throw NumericalError("endemic equilibrium not found: Newton and ODE relaxation both failed");
        x = ss.state.x();
        y = ss.state.y();
        double xp = x;
        double yp = y;
        if (newton_polish(p, xp, yp, opts, &iterations)) {
            x = xp;
            y = yp;
        }
        sol.method = EquilibriumMethod::ode_limit;
    }
    sol.iterations = iterations;
    sol.x_star = x;
    sol.y_star = y;
    sol.w_star = p.sigma * x / sol.eps;
    finish(sol, p);
    return sol;
}

double near_threshold_slope(const ScpwParams& p)
{
    const double den = p.lambda * p.sigma + p.mu * p.delta_c + p.mu - p.delta_c;
    if (den == 0.0 || !std::isfinite(den))
        throw InvalidInput("near-threshold expansion undefined: lambda sigma + mu delta_c + mu - delta_c = 0");
    return p.sigma / den;
}

EquilibriumSolution near_threshold_approx(const ScpwParams& p)
{
    require_endemic_regime(p);
    auto sol = base_solution(p);
    sol.method = EquilibriumMethod::near_asymptotic;
    const double slope = near_threshold_slope(p);
    sol.w_star = slope * sol.eta;
    sol.x_star = slope / p.sigma * sol.eta;
    sol.y_star = 1.0 - (2.0 + p.delta_c / (1.0 - sol.eta)) * sol.x_star;
    finish(sol, p);
    return sol;
}

double far_threshold_coefficient(const ScpwParams& p)
{
    const double den = p.lambda * p.sigma;
    if (den == 0.0 || !std::isfinite(den))
        throw InvalidInput("far-threshold expansion undefined: lambda sigma = 0");
    return (p.delta_c + p.mu - p.sigma) / den;
}

EquilibriumSolution far_threshold_approx(const ScpwParams& p)
{
    require_endemic_regime(p);
    auto sol = base_solution(p);
    sol.method = EquilibriumMethod::far_asymptotic;
    const double c = far_threshold_coefficient(p);
    const double e = sol.eps;
    sol.w_star = 1.0 + c * e;
    sol.x_star = e / p.sigma + c / p.sigma * e * e;
    try {
        const auto lin = far_linearization(e, p);
        sol.y_star = lin.psi * (sol.x_star - lin.phi);
    } catch (const InvalidInput&) {
        sol.y_star = 0.0;
    }
    finish(sol, p);
    return sol;
}

FarLinearization far_linearization(double eps, const ScpwParams& p)
{
    if (!(eps > 0.0 && eps < 1.0))
        throw InvalidInput("far linearization needs eps in (0, 1)");
    const double e = eps;
    const double ls = p.lambda * p.sigma;
    const double phi_den = 2.0 * e * e + (p.delta_c + p.mu) * e - ls;
    if (phi_den == 0.0)
        throw InvalidInput("far linearization singular: 2 eps^2 + (delta_c + mu) eps - lambda sigma = 0 at eps = " +
                           std::to_string(e));
    const double psi_den = e * (e * e - (p.mu + 5.0 * p.lambda) * e - p.lambda * (2.0 * p.delta_c + p.mu - 2.0 * p.sigma));
    if (psi_den == 0.0)
        throw InvalidInput("far linearization slope singular at eps = " + std::to_string(e));
    FarLinearization lin;
    lin.phi = (e * e - p.lambda * e) / phi_den;
    lin.psi = -(e - p.lambda) * phi_den / psi_den;
    return lin;
}

} // namespace scpw
