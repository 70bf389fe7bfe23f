#pragma once

#include "scpw/model.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace scpw {

enum class TerminalReason { t_end, steady, rhs_failure };

std::string to_string(TerminalReason r);

struct Trajectory {
    std::vector<double> times;
    std::vector<NState> states;
    TerminalReason terminal_reason = TerminalReason::t_end;
    /// Set when terminal_reason == rhs_failure.
    std::string failure;

    const NState& back() const { return states.back(); }
};

struct IntegratorOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    /// Record every accepted step; when false only the endpoints are kept.
    bool record = true;
};

/// Adaptive Dormand-Prince integration of the nondimensional system.
/// Each accepted step is projected back onto v + w = 1 and 2x + y + z = 1, and
/// components undershooting zero by at most abs_tol are clamped to zero.
/// A closure failure ends the trajectory with TerminalReason::rhs_failure;
/// step-size underflow throws NumericalError.
Trajectory integrate(const ScpwParams& p, const NState& init, double t_end, const IntegratorOptions& opts = {});

inline constexpr double kDefaultSteadyTMax = 1000.0;

struct SteadyState {
    NState state;
    bool converged = false;
    double time = 0.0;
};

/// Integrates until the max-norm of the right-hand side falls below rhs_norm_tol.
/// Returns converged = false with the last state if t_max is reached first.
SteadyState steady_state(const ScpwParams& p, const NState& init, double rhs_norm_tol,
                         double t_max = kDefaultSteadyTMax, const IntegratorOptions& opts = {});

/// Small infection seeded into the DFE at prevalence `infected`, with infected
/// nodes placed at random so that x = w(1-w), y = (1-w)^2, z = w^2.
NState seeded_state(double infected);

/// CSV with header `T,v,w,x,y,z`.
void write_trajectory_csv(std::ostream& os, const Trajectory& t);

} // namespace scpw
