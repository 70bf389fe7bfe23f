#include "scpw/pipeline.hpp"

#include "scpw/dynamics.hpp"
#include "scpw/equilibrium.hpp"
#include "scpw/error.hpp"
#include "scpw/model.hpp"
#include "scpw/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>
#include <thread>

namespace scpw {

std::vector<double> delta_grid(const SweepSpec& spec)
{
    if (!(spec.min > 0.0))
        throw InvalidInput("sweep minimum must be positive");
    if (!(spec.max > spec.min))
        throw InvalidInput("sweep maximum must exceed the minimum");
    if (spec.steps < 2)
        throw InvalidInput("a sweep needs at least 2 steps");
    std::vector<double> out(static_cast<std::size_t>(spec.steps));
    const double n = spec.steps - 1;
    for (int i = 0; i < spec.steps; ++i) {
        const double f = i / n;
        out[i] = spec.spacing == Spacing::linear ? spec.min + f * (spec.max - spec.min)
                                                 : spec.min * std::pow(spec.max / spec.min, f);
    }
    out.back() = spec.max;
    return out;
}

namespace {

BifurcationRow sweep_point(const ScpwParams& base, double delta, const BifurcationOptions& opts)
{
    const auto p = with_delta(base, delta);
    BifurcationRow row;
    row.delta = delta;
    row.eps = p.eps();
    row.eta = p.eta();
    if (stability(p) != Stability::unstable_dfe)
        return row;

    const auto poly = solve_endemic(p);
    row.w_poly = poly.w_star;
    const auto ode = steady_state(p, seeded_state(opts.seed_prevalence), opts.rhs_norm_tol, opts.t_max,
                                 opts.integrator);
    if (!ode.converged)
        throw NumericalError("ODE relaxation did not reach steady state at delta = " + std::to_string(delta));
    row.w_ode = ode.state.w();
    row.w_near = near_threshold_approx(p).w_star;
    row.w_far = far_threshold_approx(p).w_star;
    return row;
}

} // namespace

std::vector<BifurcationRow> bifurcation_sweep(const DegreeMoments& m, const std::vector<double>& deltas,
                                              const BifurcationOptions& opts)
{
    const auto base = derive_params(m, 0.0);
    std::vector<double> sorted = deltas;
    std::sort(sorted.begin(), sorted.end());
    std::vector<BifurcationRow> rows(sorted.size());

    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(sorted.size())));
    std::vector<std::future<void>> tasks;
    for (unsigned w = 0; w < threads; ++w)
        tasks.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < sorted.size(); i += threads)
                rows[i] = sweep_point(base, sorted[i], opts);
        }));
    for (auto& t : tasks)
        t.get();
    return rows;
}

void write_bifurcation_csv(std::ostream& os, const std::vector<BifurcationRow>& rows)
{
    os << "delta,eta,eps,w_ode,w_poly,w_near,w_far\n";
    os.precision(std::numeric_limits<double>::max_digits10);
    for (const auto& r : rows) {
        os << r.delta << ',' << r.eta << ',' << r.eps << ',' << r.w_ode << ',' << r.w_poly << ',';
        if (r.w_near)
            os << *r.w_near;
        os << ',';
        if (r.w_far)
            os << *r.w_far;
        os << '\n';
    }
}

} // namespace scpw
