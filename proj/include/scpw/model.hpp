#pragma once

#include "scpw/moments.hpp"

#include <array>

namespace scpw {

/// Nondimensional parameter bundle of the super compact pairwise closure.
///
/// alpha and beta are the closure constants built from the three degree
/// moments; delta_c is the epidemic threshold and sigma, lambda, mu are the
/// threshold-scaled constants used by the equilibrium polynomials.
struct ScpwParams {
    double delta = 0.0; ///< tau / gamma
    double k1 = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double delta_c = 0.0;
    double sigma = 0.0;  ///< k1 * delta_c
    double lambda = 0.0; ///< alpha * delta_c / k1
    double mu = 0.0;     ///< beta * delta_c
    double kbar = 0.0;   ///< (k2 - k1) / k1

    /// delta_c / delta
    double eps() const { return delta_c / delta; }
    /// 1 - delta_c / delta
    double eta() const { return 1.0 - delta_c / delta; }
};

/// Variance floor relative to k1^2 below which alpha and beta are undefined.
inline constexpr double kVarianceFloor = 1e-9;
/// Minimum x + y at which the closure denominators may be evaluated.
inline constexpr double kClosureFloor = 1e-12;

/// Throws InvalidInput for infeasible moments, near-regular distributions
/// (variance <= 1e-9 k1^2), k2 <= k1 or negative delta.
ScpwParams derive_params(const DegreeMoments& m, double delta);

/// Same moments-derived constants at a different delta.
ScpwParams with_delta(ScpwParams p, double delta);

/// Node fractions (v, w) and edge fractions (x, y, z) normalised by N and k1 N.
class NState {
public:
    /// Clamps components in [-1e-12, 0) to zero and rescales both conservation
    /// sums once; components below -1e-12 or sums off by more than 1e-9 throw.
    static NState make(double v, double w, double x, double y, double z);
    /// Disease-free equilibrium (1, 0, 0, 1, 0).
    static NState dfe();

    double v() const { return c_[0]; }
    double w() const { return c_[1]; }
    double x() const { return c_[2]; }
    double y() const { return c_[3]; }
    double z() const { return c_[4]; }
    const std::array<double, 5>& values() const { return c_; }

    friend bool operator==(const NState&, const NState&) = default;

private:
    explicit NState(const std::array<double, 5>& c) : c_(c) {}
    std::array<double, 5> c_{};
};

/// Expected node and edge counts of a population of size n with mean degree k1.
struct DimState {
    double S = 0.0;
    double I = 0.0;
    double SI = 0.0;
    double SS = 0.0;
    double II = 0.0;
    double n = 0.0;
    double k1 = 0.0;
};

using Rhs = std::array<double, 5>;

/// (dv, dw, dx, dy, dz)/dT. Throws NumericalError when x + y < kClosureFloor.
Rhs rhs_nondim(const NState& s, const ScpwParams& p);
/// Same right-hand side on raw components, no state validation.
Rhs rhs_nondim(const std::array<double, 5>& s, const ScpwParams& p);

/// Closure Q = alpha S / (SI + SS)^2 + beta / (SI + SS).
double closure_q(const DimState& s, double alpha, double beta);

/// d/dt of (S, I, SI, SS, II) for rates tau, gamma.
Rhs rhs_dim(const DimState& s, double tau, double gamma, const DegreeMoments& m);

NState nondimensionalize(const DimState& s);
DimState dimensionalize(const NState& s, double n, double k1);

} // namespace scpw
