#pragma once

#include "scpw/model.hpp"

#include <array>
#include <optional>
#include <string>

namespace scpw {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

/// Jacobian of the reduced (w, x, z) system at the disease-free equilibrium.
struct DfeLinearization {
    Mat3 jacobian{};
    /// Sorted descending; one entry is exactly -1.
    Vec3 eigenvalues{};
    double trace_B = 0.0;
    double det_B = 0.0;
    double discriminant_B = 0.0;

    double max_eigenvalue() const { return eigenvalues[0]; }
};

/// Transcritical coefficients at delta = delta_c.
struct BifurcationCoefficients {
    /// Closed form -4(<k^3>/<k> - 1).
    double a = 0.0;
    /// Direct contraction w^T (2 H2 + H3) w of the Hessians of the reduced system.
    /// Absent for (near-)regular networks, where the closure constants are undefined.
    std::optional<double> a_contraction;
    /// 2 / delta_c^2.
    double b = 0.0;
    /// v (dJ/ddelta) w.
    double b_contraction = 0.0;
    /// Left null vector (0, 2, 1).
    Vec3 left_vec{};
    /// Right null vector (<k>, 1/delta_c, 1).
    Vec3 right_vec{};
    /// |a - a_contraction| <= 1e-10 |a|; false when the contraction is absent.
    bool routes_agree = false;

    /// Forward transcritical bifurcation: a < 0 and b > 0.
    bool forward() const { return a < 0.0 && b > 0.0; }
};

enum class Stability { stable_dfe, critical, unstable_dfe };

std::string to_string(Stability s);

inline constexpr double kCriticalBand = 1e-12;

/// <k> / (<k^2> - <k>). Valid for regular networks; throws InvalidInput when <k^2> <= <k>.
double epidemic_threshold(const DegreeMoments& m);

DfeLinearization dfe_linearization(const ScpwParams& p);
/// The DFE Jacobian needs only <k>, kbar and delta, so it also exists for regular networks.
DfeLinearization dfe_linearization(double k1, double kbar, double delta);

Stability stability(const ScpwParams& p);

/// Jacobian of the reduced system at the DFE with delta = delta_c.
Mat3 critical_jacobian(const ScpwParams& p);

/// Hessians of the x and z equations of the reduced system at the DFE, delta = delta_c.
std::array<Mat3, 2> critical_hessians(const ScpwParams& p);

/// a and b from the moments; the Hessian route is added when the closure constants exist.
BifurcationCoefficients bifurcation_coefficients(const DegreeMoments& m);

} // namespace scpw
