#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace scpw {

/// First three raw moments of a degree distribution: <k>, <k^2>, <k^3>.
struct DegreeMoments {
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;

    double variance() const { return k2 - k1 * k1; }

    friend bool operator==(const DegreeMoments&, const DegreeMoments&) = default;
};

/// Relative tolerance used by the Jensen and Cauchy-Schwarz checks.
inline constexpr double kFeasibilityTol = 1e-12;

struct FeasibilityReport {
    /// k2 - k1^2; negative beyond tolerance means Jensen is violated.
    double jensen_margin = 0.0;
    /// k3*k1 - k2^2; negative beyond tolerance means Cauchy-Schwarz is violated.
    double cauchy_schwarz_margin = 0.0;
    bool jensen_ok = false;
    bool cauchy_schwarz_ok = false;
    bool positive = false;

    bool ok() const { return jensen_ok && cauchy_schwarz_ok && positive; }
    /// Human readable description of the first violated condition, empty when ok().
    std::string describe() const;
};

FeasibilityReport check_feasibility(const DegreeMoments& m);

/// Throws InvalidInput naming the violated inequality.
void require_feasible(const DegreeMoments& m);

DegreeMoments moments_from_sequence(std::span<const std::int64_t> degrees);
DegreeMoments moments_from_bimodal(std::int64_t k_a, std::int64_t n_a, std::int64_t k_b, std::int64_t n_b);
DegreeMoments moments_from_poisson(double mean);

/// Plain text, one nonnegative integer per line; blank lines are skipped.
std::vector<std::int64_t> read_degree_file(const std::filesystem::path& path);
std::vector<std::int64_t> parse_degree_text(const std::string& text);

} // namespace scpw
