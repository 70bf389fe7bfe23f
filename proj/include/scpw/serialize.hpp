#pragma once

#include "scpw/equilibrium.hpp"
#include "scpw/model.hpp"
#include "scpw/moments.hpp"
#include "scpw/netsim.hpp"
#include "scpw/threshold.hpp"

#include <json.hpp>

namespace scpw {

/// {"k1":…, "k2":…, "k3":…}
void to_json(nlohmann::json& j, const DegreeMoments& m);
void from_json(const nlohmann::json& j, DegreeMoments& m);

void to_json(nlohmann::json& j, const FeasibilityReport& r);
void to_json(nlohmann::json& j, const ScpwParams& p);
void to_json(nlohmann::json& j, const NState& s);
void to_json(nlohmann::json& j, const DfeLinearization& lin);
void to_json(nlohmann::json& j, const BifurcationCoefficients& bc);
void to_json(nlohmann::json& j, const EquilibriumSolution& sol);

/// {delta, runs, mean, sd, extinct_count} plus excluded_count.
void to_json(nlohmann::json& j, const EnsembleSummary& s);

} // namespace scpw
