#pragma once

#include "scpw/dynamics.hpp"
#include "scpw/moments.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace scpw {

enum class Spacing { linear, log };

struct SweepSpec {
    double min = 0.0;
    double max = 0.0;
    int steps = 2;
    Spacing spacing = Spacing::linear;
};

/// Sorted grid of `steps` delta values including both ends.
std::vector<double> delta_grid(const SweepSpec& spec);

/// One row of a bifurcation diagram. Below threshold both exact columns are 0
/// and the approximations are absent.
struct BifurcationRow {
    double delta = 0.0;
    double eta = 0.0;
    double eps = 0.0;
    double w_ode = 0.0;
    double w_poly = 0.0;
    std::optional<double> w_near;
    std::optional<double> w_far;
};

struct BifurcationOptions {
    /// RHS max-norm at which the ODE relaxation is considered steady.
    double rhs_norm_tol = 1e-9;
    double t_max = 1e5;
    IntegratorOptions integrator{1e-10, 1e-12, false};
    /// Seed prevalence of the ODE runs.
    double seed_prevalence = 1e-2;
    unsigned threads = 0;
};

std::vector<BifurcationRow> bifurcation_sweep(const DegreeMoments& m, const std::vector<double>& deltas,
                                              const BifurcationOptions& opts = {});

/// Header `delta,eta,eps,w_ode,w_poly,w_near,w_far`.
void write_bifurcation_csv(std::ostream& os, const std::vector<BifurcationRow>& rows);

} // namespace scpw
