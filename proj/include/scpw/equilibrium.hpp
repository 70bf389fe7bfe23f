#pragma once

#include "scpw/model.hpp"

#include <string>
#include <utility>

namespace scpw {

enum class EquilibriumMethod { newton, ode_limit, near_asymptotic, far_asymptotic };

enum class EquilibriumStatus {
    endemic,
    /// delta < delta_c: only the disease-free state exists.
    no_endemic,
    /// delta within the critical band of delta_c: the DFE is returned.
    critical,
};

std::string to_string(EquilibriumMethod m);
std::string to_string(EquilibriumStatus s);

struct EquilibriumSolution {
    EquilibriumStatus status = EquilibriumStatus::endemic;
    EquilibriumMethod method = EquilibriumMethod::newton;
    double x_star = 0.0;
    double y_star = 1.0;
    /// Endemic prevalence.
    double w_star = 0.0;
    double residual_P = 0.0;
    double residual_Q = 0.0;
    double eta = 0.0; ///< 1 - delta_c / delta
    double eps = 0.0; ///< delta_c / delta
    int iterations = 0;

    bool endemic() const { return status == EquilibriumStatus::endemic; }
};

struct Residuals {
    double P = 0.0;
    double Q = 0.0;
};

/// Equilibrium polynomials in (x, y) with eps = delta_c / delta:
///   P = eps^2 (1 - y - 2x)(x + y)^2 - eps (delta_c x (x + y)^2 + lambda x^2 + mu x^2 (x + y)) + lambda sigma x^3
///   Q = eps^2 (x + y)^2 - eps (lambda y + mu y (x + y)) + lambda sigma x y
Residuals residuals(double x, double y, const ScpwParams& p);

struct NewtonOptions {
    int max_iterations = 50;
    int max_halvings = 30;
    double tol = 1e-10;
};

/// Damped Newton on (P, Q) seeded by the near expansion when eta < 0.5 and the far
/// expansion otherwise, then by the other expansion; falls back to the ODE steady
/// state when both fail.
EquilibriumSolution solve_endemic(const ScpwParams& p, const NewtonOptions& opts = {});

/// Newton from an explicit starting point. Returns false when the iteration
/// stalls or lands outside the feasible triangle x, y >= 0, 2x + y <= 1.
bool newton_polish(const ScpwParams& p, double& x, double& y, const NewtonOptions& opts, int* iterations = nullptr);

/// sigma / (lambda sigma + mu delta_c + mu - delta_c): the near-threshold slope dw*/deta.
double near_threshold_slope(const ScpwParams& p);

/// First-order expansion in eta = 1 - delta_c / delta.
EquilibriumSolution near_threshold_approx(const ScpwParams& p);

/// (delta_c + mu - sigma) / (lambda sigma): first-order coefficient in eps.
double far_threshold_coefficient(const ScpwParams& p);

/// First-order expansion in eps = delta_c / delta.
EquilibriumSolution far_threshold_approx(const ScpwParams& p);

struct FarLinearization {
    /// Root of P(phi, 0) = 0.
    double phi = 0.0;
    /// Slope -P_x / P_y at (phi, 0).
    double psi = 0.0;
};

FarLinearization far_linearization(double eps, const ScpwParams& p);

} // namespace scpw
