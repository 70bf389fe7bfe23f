#include "scpw/moments.hpp"

#include "scpw/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace scpw {

namespace {

using u128 = unsigned __int128;

struct PowerSums {
    u128 count = 0;
    u128 s1 = 0;
    u128 s2 = 0;
    u128 s3 = 0;

    void add(std::int64_t degree, std::int64_t multiplicity)
    {
        const auto d = static_cast<u128>(degree);
        const auto n = static_cast<u128>(multiplicity);
        count += n;
        s1 += n * d;
        s2 += n * d * d;
        s3 += n * d * d * d;
    }

    // Exact integer sums, one rounding in the division.
    DegreeMoments finish() const
    {
        const auto n = static_cast<long double>(count);
        return {static_cast<double>(static_cast<long double>(s1) / n),
                static_cast<double>(static_cast<long double>(s2) / n),
                static_cast<double>(static_cast<long double>(s3) / n)};
    }
};

// Keeps n * d^3 inside 128 bits for any realistic network.
constexpr std::int64_t kMaxDegree = std::int64_t{1} << 28;

void check_degree(std::int64_t d)
{
    if (d < 0)
        throw InvalidInput("degree must be nonnegative, got " + std::to_string(d));
    if (d > kMaxDegree)
        throw InvalidInput("degree " + std::to_string(d) + " exceeds supported maximum");
}

} // namespace

std::string FeasibilityReport::describe() const
{
    std::ostringstream os;
    if (!positive)
        os << "moments must be positive";
    else if (!jensen_ok)
        os << "Jensen inequality <k^2> >= <k>^2 violated by " << -jensen_margin;
    else if (!cauchy_schwarz_ok)
        os << "Cauchy-Schwarz inequality <k^2>^2 <= <k^3><k> violated by " << -cauchy_schwarz_margin;
    return os.str();
}

FeasibilityReport check_feasibility(const DegreeMoments& m)
{
    FeasibilityReport r;
    r.positive = m.k1 > 0.0 && m.k2 > 0.0 && m.k3 > 0.0 && std::isfinite(m.k1) && std::isfinite(m.k2) &&
                 std::isfinite(m.k3);
    r.jensen_margin = m.k2 - m.k1 * m.k1;
    r.cauchy_schwarz_margin = m.k3 * m.k1 - m.k2 * m.k2;
    r.jensen_ok = r.jensen_margin >= -kFeasibilityTol * m.k2;
    r.cauchy_schwarz_ok = r.cauchy_schwarz_margin >= -kFeasibilityTol * m.k2 * m.k2;
    return r;
}

void require_feasible(const DegreeMoments& m)
{
    const auto report = check_feasibility(m);
    if (!report.ok())
        throw InvalidInput("infeasible moments (" + std::to_string(m.k1) + ", " + std::to_string(m.k2) + ", " +
                           std::to_string(m.k3) + "): " + report.describe());
}

DegreeMoments moments_from_sequence(std::span<const std::int64_t> degrees)
{
    if (degrees.empty())
        throw InvalidInput("degree sequence is empty");
    PowerSums sums;
    for (const auto d : degrees) {
        check_degree(d);
        sums.add(d, 1);
    }
    if (sums.s1 == 0)
        throw InvalidInput("degree sequence has no nonzero degree");
    return sums.finish();
}

DegreeMoments moments_from_bimodal(std::int64_t k_a, std::int64_t n_a, std::int64_t k_b, std::int64_t n_b)
{
    if (n_a < 0 || n_b < 0)
        throw InvalidInput("bimodal counts must be nonnegative");
    if (n_a + n_b == 0)
        throw InvalidInput("bimodal distribution has zero total count");
    check_degree(k_a);
    check_degree(k_b);
    PowerSums sums;
    sums.add(k_a, n_a);
    sums.add(k_b, n_b);
    if (sums.s1 == 0)
        throw InvalidInput("bimodal distribution has no nonzero degree");
    return sums.finish();
}

DegreeMoments moments_from_poisson(double mean)
{
    if (!(mean > 0.0) || !std::isfinite(mean))
        throw InvalidInput("Poisson mean must be positive and finite");
    const double m = mean;
    return {m, m * m + m, m * m * m + 3.0 * m * m + m};
}

std::vector<std::int64_t> parse_degree_text(const std::string& text)
{
    std::vector<std::int64_t> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        const auto last = line.find_last_not_of(" \t\r");
        const auto token = line.substr(first, last - first + 1);
        std::size_t used = 0;
        long long value = 0;
        try {
            value = std::stoll(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size())
            throw InvalidInput("degree file line " + std::to_string(lineno) + ": not an integer: '" + token + "'");
        check_degree(value);
        out.push_back(value);
    }
    return out;
}

std::vector<std::int64_t> read_degree_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open degree file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_degree_text(buf.str());
}

} // namespace scpw
