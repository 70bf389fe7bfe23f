#include "scpw/dynamics.hpp"

#include "scpw/error.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace scpw {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 5>;

constexpr double kMinStep = 1e-14;

struct ClosureFailure {
    std::string what;
};

// Orthogonal projection onto the two affine conservation constraints.
void project(State& s)
{
    const double node_excess = s[0] + s[1] - 1.0;
    s[0] -= 0.5 * node_excess;
    s[1] -= 0.5 * node_excess;
    const double edge_excess = 2.0 * s[2] + s[3] + s[4] - 1.0;
    s[2] -= 2.0 * edge_excess / 6.0;
    s[3] -= edge_excess / 6.0;
    s[4] -= edge_excess / 6.0;
}

double max_norm(const Rhs& r)
{
    double m = 0.0;
    for (const auto ri : r)
        m = std::max(m, std::abs(ri));
    return m;
}

void check_options(double t_end, const IntegratorOptions& opts)
{
    if (!(t_end > 0.0))
        throw InvalidInput("integration end time must be positive");
    for (const double tol : {opts.rel_tol, opts.abs_tol})
        if (!(tol > 0.0 && tol <= 1e-2))
            throw InvalidInput("integrator tolerances must lie in (0, 1e-2]");
}

// Drives a controlled Dormand-Prince stepper one accepted step at a time.
// `on_step` returns true to stop early.
template <typename OnStep>
Trajectory run(const ScpwParams& p, const NState& init, double t_end, const IntegratorOptions& opts, OnStep on_step)
{
    check_options(t_end, opts);
    auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(opts.abs_tol, opts.rel_tol);
    auto system = [&p](const State& s, State& ds, double) {
        try {
            ds = rhs_nondim(s, p);
        } catch (const NumericalError& e) {
            throw ClosureFailure{e.what()};
        }
    };

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(init);

    State s = init.values();
    double t = 0.0;
    double dt = std::min(1e-3, t_end);
    if (on_step(t, init)) {
        traj.terminal_reason = TerminalReason::steady;
        return traj;
    }

    while (t < t_end) {
        dt = std::min(dt, t_end - t);
        odeint::controlled_step_result res;
        try {
            res = stepper.try_step(system, s, t, dt);
        } catch (const ClosureFailure& f) {
            traj.terminal_reason = TerminalReason::rhs_failure;
            traj.failure = f.what;
            return traj;
        }
        if (res == odeint::fail) {
            if (dt < kMinStep)
                throw NumericalError("step size underflow at T = " + std::to_string(t));
            continue;
        }
        project(s);
        // The exact flow keeps every component nonnegative; undershoot within the
        // absolute tolerance is truncation error.
        for (auto& c : s)
            if (c < 0.0 && c >= -opts.abs_tol)
                c = 0.0;
        NState accepted = NState::dfe();
        try {
            accepted = NState::make(s[0], s[1], s[2], s[3], s[4]);
        } catch (const InvalidInput& e) {
            traj.terminal_reason = TerminalReason::rhs_failure;
            traj.failure = e.what();
            return traj;
        }
        s = accepted.values();
        if (opts.record || t >= t_end) {
            traj.times.push_back(t);
            traj.states.push_back(accepted);
        }
        if (on_step(t, accepted)) {
            traj.terminal_reason = TerminalReason::steady;
            break;
        }
    }
    if (!opts.record && traj.times.back() != t) {
        traj.times.push_back(t);
        traj.states.push_back(NState::make(s[0], s[1], s[2], s[3], s[4]));
    }
    return traj;
}

} // namespace

std::string to_string(TerminalReason r)
{
    switch (r) {
    case TerminalReason::t_end:
        return "t_end";
    case TerminalReason::steady:
        return "steady";
    case TerminalReason::rhs_failure:
        return "rhs_failure";
    }
    return "unknown";
}

Trajectory integrate(const ScpwParams& p, const NState& init, double t_end, const IntegratorOptions& opts)
{
    return run(p, init, t_end, opts, [](double, const NState&) { return false; });
}

SteadyState steady_state(const ScpwParams& p, const NState& init, double rhs_norm_tol, double t_max,
                         const IntegratorOptions& opts)
{
    if (!(rhs_norm_tol > 0.0))
        throw InvalidInput("steady-state tolerance must be positive");
    IntegratorOptions quiet = opts;
    quiet.record = false;
    auto traj = run(p, init, t_max, quiet,
                    [&](double, const NState& s) { return max_norm(rhs_nondim(s, p)) < rhs_norm_tol; });
    if (traj.terminal_reason == TerminalReason::rhs_failure)
        throw NumericalError("steady-state integration failed: " + traj.failure);
    return {traj.states.back(), traj.terminal_reason == TerminalReason::steady, traj.times.back()};
}

NState seeded_state(double infected)
{
    if (!(infected >= 0.0 && infected < 1.0))
        throw InvalidInput("seed prevalence must lie in [0, 1)");
    const double w = infected;
    return NState::make(1.0 - w, w, w * (1.0 - w), (1.0 - w) * (1.0 - w), w * w);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t)
{
    os << "T,v,w,x,y,z\n";
    os.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < t.times.size(); ++i) {
        const auto& s = t.states[i];
        os << t.times[i] << ',' << s.v() << ',' << s.w() << ',' << s.x() << ',' << s.y() << ',' << s.z() << '\n';
    }
}

} // namespace scpw
