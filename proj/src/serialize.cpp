#include "scpw/serialize.hpp"

#include "scpw/error.hpp"

#include <cmath>

namespace scpw {

namespace {

// JSON has no NaN/inf; those become null.
nlohmann::json number(double x)
{
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

} // namespace

void to_json(nlohmann::json& j, const DegreeMoments& m)
{
    j = {{"k1", m.k1}, {"k2", m.k2}, {"k3", m.k3}};
}

void from_json(const nlohmann::json& j, DegreeMoments& m)
{
    try {
        m.k1 = j.at("k1").get<double>();
        m.k2 = j.at("k2").get<double>();
        m.k3 = j.at("k3").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed moments JSON: ") + e.what());
    }
}

void to_json(nlohmann::json& j, const FeasibilityReport& r)
{
    j = {{"ok", r.ok()},
         {"jensen_margin", number(r.jensen_margin)},
         {"cauchy_schwarz_margin", number(r.cauchy_schwarz_margin)},
         {"jensen_ok", r.jensen_ok},
         {"cauchy_schwarz_ok", r.cauchy_schwarz_ok}};
    if (!r.ok())
        j["violation"] = r.describe();
}

void to_json(nlohmann::json& j, const ScpwParams& p)
{
    j = {{"delta", p.delta}, {"k1", p.k1},         {"alpha", p.alpha},   {"beta", p.beta}, {"delta_c", p.delta_c},
         {"sigma", p.sigma}, {"lambda", p.lambda}, {"mu", p.mu},         {"kbar", p.kbar}};
}

void to_json(nlohmann::json& j, const NState& s)
{
    j = {{"v", s.v()}, {"w", s.w()}, {"x", s.x()}, {"y", s.y()}, {"z", s.z()}};
}

void to_json(nlohmann::json& j, const DfeLinearization& lin)
{
    j = {{"jacobian", lin.jacobian},
         {"eigenvalues", lin.eigenvalues},
         {"trace_B", lin.trace_B},
         {"det_B", lin.det_B},
         {"discriminant_B", lin.discriminant_B}};
}

void to_json(nlohmann::json& j, const BifurcationCoefficients& bc)
{
    j = {{"a", bc.a},
         {"a_contraction", bc.a_contraction ? number(*bc.a_contraction) : nlohmann::json(nullptr)},
         {"b", bc.b},
         {"b_contraction", bc.b_contraction},
         {"left_vec", bc.left_vec},
         {"right_vec", bc.right_vec},
         {"routes_agree", bc.a_contraction ? nlohmann::json(bc.routes_agree) : nlohmann::json(nullptr)},
         {"forward_transcritical", bc.forward()}};
}

void to_json(nlohmann::json& j, const EquilibriumSolution& sol)
{
    j = {{"status", to_string(sol.status)},
         {"method", to_string(sol.method)},
         {"x_star", number(sol.x_star)},
         {"y_star", number(sol.y_star)},
         {"w_star", number(sol.w_star)},
         {"residual_P", number(sol.residual_P)},
         {"residual_Q", number(sol.residual_Q)},
         {"eta", number(sol.eta)},
         {"eps", number(sol.eps)},
         {"iterations", sol.iterations}};
}

void to_json(nlohmann::json& j, const EnsembleSummary& s)
{
    j = {{"delta", number(s.delta)},
         {"runs", s.runs},
         {"mean", s.mean},
         {"sd", s.sd},
         {"extinct_count", s.extinct_count},
         {"excluded_count", s.excluded_count}};
}

} // namespace scpw
