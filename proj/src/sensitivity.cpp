#include "scpw/sensitivity.hpp"

#include "scpw/error.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace scpw {

namespace {

constexpr double kInteriorTol = 1e-9;

} // namespace

std::string to_string(Regime r)
{
    return r == Regime::near ? "near" : "far";
}

Regime parse_regime(const std::string& s)
{
    if (s == "near")
        return Regime::near;
    if (s == "far")
        return Regime::far;
    throw InvalidInput("unknown regime '" + s + "' (expected near or far)");
}

Partials near_partials(const DegreeMoments& m)
{
    const double d = m.k1 - 2.0 * m.k2 + m.k3;
    if (d == 0.0)
        throw InvalidInput("near-threshold sensitivities undefined: <k> - 2<k^2> + <k^3> = 0");
    return {-m.k2 / d, m.k1 / d, 0.0};
}

Partials far_partials(const DegreeMoments& m, double delta)
{
    if (!(delta > 0.0))
        throw InvalidInput("far-threshold sensitivities need delta > 0");
    const double cs = m.k2 * m.k2 - m.k3 * m.k1;
    const double den = cs * cs;
    if (den == 0.0)
        throw InvalidInput("far-threshold sensitivities undefined on the boundary <k^2>^2 = <k^3><k>");
    const double k1 = m.k1;
    const double k2 = m.k2;
    const double k3 = m.k3;
    const double jensen = k1 * k1 - k2;
    Partials out;
    out.d_k1 = (k3 * k3 + 3.0 * k1 * k1 * k2 * k2 - 2.0 * (k1 * k1 * k1 * k3 + k2 * k2 * k2)) / den / delta;
    out.d_k2 = -2.0 * jensen * (k1 * k2 - k3) / den / delta;
    out.d_k3 = jensen * jensen / den / delta;
    return out;
}

Range default_k1_range(double k3)
{
    // Jensen and Cauchy-Schwarz together force k1 <= k3^(1/3).
    return {1.0, 1.05 * std::cbrt(k3)};
}

Range default_k2_range(double k3)
{
    return {1.0, 1.05 * std::sqrt(k3 * 1.05 * std::cbrt(k3))};
}

SensitivityCell sensitivity_at(Regime regime, const DegreeMoments& m, double delta)
{
    SensitivityCell cell;
    cell.k1 = m.k1;
    cell.k2 = m.k2;
    const auto report = check_feasibility(m);
    cell.feasible = report.ok();
    if (!cell.feasible)
        return cell;
    cell.interior = report.jensen_margin > kInteriorTol * m.k2 &&
                    report.cauchy_schwarz_margin > kInteriorTol * m.k2 * m.k2;
    try {
        cell.partials = regime == Regime::near ? near_partials(m) : far_partials(m, delta);
    } catch (const InvalidInput&) {
        // Boundary cells with a vanishing denominator stay feasible but carry no values.
    }
    return cell;
}

SensitivityGrid sensitivity_grid(Regime regime, double k3_slice, Range k1_range, Range k2_range, int resolution,
                                 double delta)
{
    if (!(k3_slice > 0.0))
        throw InvalidInput("<k^3> slice must be positive");
    if (!(k1_range.lo > 0.0 && k1_range.hi > k1_range.lo && k2_range.lo > 0.0 && k2_range.hi > k2_range.lo))
        throw InvalidInput("sensitivity ranges must be positive and increasing");
    if (resolution < 2)
        throw InvalidInput("sensitivity grid resolution must be at least 2");
    if (regime == Regime::far && !(delta > 0.0))
        throw InvalidInput("far-regime grid needs delta > 0");

    SensitivityGrid grid;
    grid.regime = regime;
    grid.k3_slice = k3_slice;
    grid.delta = delta;
    grid.resolution = resolution;
    grid.cells.reserve(static_cast<std::size_t>(resolution) * resolution);
    const double h1 = (k1_range.hi - k1_range.lo) / (resolution - 1);
    const double h2 = (k2_range.hi - k2_range.lo) / (resolution - 1);
    for (int i = 0; i < resolution; ++i) {
        const double k1 = k1_range.lo + i * h1;
        for (int j = 0; j < resolution; ++j) {
            const double k2 = k2_range.lo + j * h2;
            grid.cells.push_back(sensitivity_at(regime, {k1, k2, k3_slice}, delta));
        }
    }
    return grid;
}

void write_sensitivity_csv_header(std::ostream& os)
{
    os << "k1,k2,k3,regime,delta,feasible,d_k1,d_k2,d_k3\n";
}

void write_sensitivity_row(std::ostream& os, Regime regime, double k3, double delta, const SensitivityCell& cell)
{
    os.precision(std::numeric_limits<double>::max_digits10);
    os << cell.k1 << ',' << cell.k2 << ',' << k3 << ',' << to_string(regime) << ',';
    // Near-regime partials are taken at delta = delta_c of each cell.
    if (regime == Regime::far)
        os << delta;
    os << ',' << (cell.feasible ? "true" : "false") << ',';
    if (cell.partials)
        os << cell.partials->d_k1 << ',' << cell.partials->d_k2 << ',' << cell.partials->d_k3;
    else
        os << ",,";
    os << '\n';
}

void write_sensitivity_csv(std::ostream& os, const SensitivityGrid& grid)
{
    write_sensitivity_csv_header(os);
    for (const auto& cell : grid.cells)
        write_sensitivity_row(os, grid.regime, grid.k3_slice, grid.delta, cell);
}

} // namespace scpw
