#pragma once

#include "scpw/moments.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace scpw {

enum class Regime { near, far };

std::string to_string(Regime r);
Regime parse_regime(const std::string& s);

/// dw*/d<k>, dw*/d<k^2>, dw*/d<k^3>.
struct Partials {
    double d_k1 = 0.0;
    double d_k2 = 0.0;
    double d_k3 = 0.0;
};

/// Sensitivities of the near-threshold prevalence evaluated at delta = delta_c.
/// Throws InvalidInput when <k> - 2<k^2> + <k^3> = 0.
Partials near_partials(const DegreeMoments& m);

/// Sensitivities of the far-threshold prevalence; each carries a 1/delta factor.
/// Throws InvalidInput on the Cauchy-Schwarz boundary <k^2>^2 = <k^3><k>.
Partials far_partials(const DegreeMoments& m, double delta);

/// Slices of <k^3> shown by default.
inline const std::vector<double> kDefaultK3Slices{20.0, 100.0, 400.0};
inline constexpr double kDefaultFarDelta = 1.5;

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct SensitivityCell {
    double k1 = 0.0;
    double k2 = 0.0;
    bool feasible = false;
    /// Strictly inside the wedge (both margins above 1e-9 relative).
    bool interior = false;
    std::optional<Partials> partials;
};

struct SensitivityGrid {
    Regime regime = Regime::near;
    double k3_slice = 0.0;
    double delta = 0.0;
    int resolution = 0;
    /// Row-major: k2 varies fastest.
    std::vector<SensitivityCell> cells;
};

/// Ranges that cover the feasible wedge of a <k^3> slice with k1 >= 1.
Range default_k1_range(double k3);
Range default_k2_range(double k3);

SensitivityGrid sensitivity_grid(Regime regime, double k3_slice, Range k1_range, Range k2_range, int resolution,
                                 double delta = kDefaultFarDelta);

/// One cell for an arbitrary moment triple; infeasible triples get no partials.
SensitivityCell sensitivity_at(Regime regime, const DegreeMoments& m, double delta = kDefaultFarDelta);

/// Header `k1,k2,k3,regime,delta,feasible,d_k1,d_k2,d_k3`; infeasible cells leave the partials empty.
void write_sensitivity_csv_header(std::ostream& os);
void write_sensitivity_row(std::ostream& os, Regime regime, double k3, double delta, const SensitivityCell& cell);
void write_sensitivity_csv(std::ostream& os, const SensitivityGrid& grid);

} // namespace scpw
