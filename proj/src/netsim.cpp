#include "scpw/netsim.hpp"

#include "scpw/error.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

namespace scpw {

namespace {

using Rng = std::mt19937_64;

Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

// Fenwick tree over integer weights with prefix search.
class WeightTree {
public:
    explicit WeightTree(std::size_t n) : tree_(n + 1, 0), n_(n)
    {
        top_ = 1;
        while (top_ * 2 <= n_)
            top_ *= 2;
    }

    void add(std::size_t i, std::int64_t delta)
    {
        total_ += delta;
        for (++i; i <= n_; i += i & (~i + 1))
            tree_[i] += delta;
    }

    std::int64_t total() const { return total_; }

    // Smallest index whose inclusive prefix sum exceeds target, target in [0, total).
    std::size_t find(std::int64_t target) const
    {
        std::size_t pos = 0;
        for (std::size_t step = top_; step > 0; step /= 2) {
            if (pos + step <= n_ && tree_[pos + step] <= target) {
                pos += step;
                target -= tree_[pos];
            }
        }
        return pos;
    }

private:
    std::vector<std::int64_t> tree_;
    std::size_t n_;
    std::size_t top_ = 1;
    std::int64_t total_ = 0;
};

DegreeMoments moments_or_zero(const std::vector<std::int64_t>& degrees)
{
    try {
        return moments_from_sequence(degrees);
    } catch (const InvalidInput&) {
        return {};
    }
}

} // namespace

std::int64_t Network::edge_count() const
{
    return std::accumulate(degree_sequence.begin(), degree_sequence.end(), std::int64_t{0}) / 2;
}

DegreeMoments Network::realized_moments() const
{
    return moments_or_zero(degree_sequence);
}

DegreeMoments Network::target_moments() const
{
    return moments_or_zero(target_degrees);
}

Network sample_configuration_model(std::span<const std::int64_t> degrees, std::uint64_t seed)
{
    const auto n = static_cast<std::int64_t>(degrees.size());
    if (n == 0)
        throw InvalidInput("degree sequence is empty");
    if (n > std::numeric_limits<NodeId>::max())
        throw InvalidInput("network too large");
    std::int64_t stubs = 0;
    for (const auto d : degrees) {
        if (d < 0)
            throw InvalidInput("negative degree");
        if (d >= n)
            throw InvalidInput("degree " + std::to_string(d) + " >= number of nodes " + std::to_string(n));
        stubs += d;
    }
    if (stubs % 2 != 0)
        throw InvalidInput("odd stub sum " + std::to_string(stubs));

    std::vector<NodeId> pool;
    pool.reserve(static_cast<std::size_t>(stubs));
    for (std::int64_t i = 0; i < n; ++i)
        pool.insert(pool.end(), static_cast<std::size_t>(degrees[i]), static_cast<NodeId>(i));
    auto rng = make_rng(seed);
    std::shuffle(pool.begin(), pool.end(), rng);

    Network net;
    net.adjacency.resize(static_cast<std::size_t>(n));
    net.target_degrees.assign(degrees.begin(), degrees.end());
    for (std::size_t i = 0; i + 1 < pool.size(); i += 2) {
        const NodeId a = pool[i];
        const NodeId b = pool[i + 1];
        if (a == b) {
            ++net.erased_self_loops;
            continue;
        }
        net.adjacency[a].push_back(b);
        net.adjacency[b].push_back(a);
    }
    std::int64_t removed_half_edges = 0;
    for (auto& nbrs : net.adjacency) {
        std::sort(nbrs.begin(), nbrs.end());
        const auto before = nbrs.size();
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        removed_half_edges += static_cast<std::int64_t>(before - nbrs.size());
    }
    net.erased_multi_edges = removed_half_edges / 2;
    net.degree_sequence.reserve(net.adjacency.size());
    for (const auto& nbrs : net.adjacency)
        net.degree_sequence.push_back(static_cast<std::int64_t>(nbrs.size()));
    return net;
}

Network network_from_edges(std::int64_t n, std::span<const std::pair<NodeId, NodeId>> edges)
{
    if (n <= 0 || n > std::numeric_limits<NodeId>::max())
        throw InvalidInput("invalid node count");
    Network net;
    net.adjacency.resize(static_cast<std::size_t>(n));
    for (const auto& [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n)
            throw InvalidInput("edge endpoint out of range");
        if (a == b)
            throw InvalidInput("self-loop in edge list");
        net.adjacency[a].push_back(b);
        net.adjacency[b].push_back(a);
    }
    for (auto& nbrs : net.adjacency) {
        std::sort(nbrs.begin(), nbrs.end());
        if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end())
            throw InvalidInput("repeated edge in edge list");
        net.degree_sequence.push_back(static_cast<std::int64_t>(nbrs.size()));
    }
    net.target_degrees = net.degree_sequence;
    return net;
}

std::vector<std::int64_t> sample_poisson_degrees(std::int64_t n, double mean, std::uint64_t seed)
{
    if (n < 2)
        throw InvalidInput("Poisson network needs at least two nodes");
    if (!(mean > 0.0))
        throw InvalidInput("Poisson mean must be positive");
    auto rng = make_rng(seed, 0x706f6973u);
    std::poisson_distribution<std::int64_t> dist(mean);
    auto draw = [&] { return std::min<std::int64_t>(dist(rng), n - 1); };
    std::vector<std::int64_t> degrees(static_cast<std::size_t>(n));
    std::int64_t sum = 0;
    for (auto& d : degrees) {
        d = draw();
        sum += d;
    }
    if (sum % 2 != 0) {
        std::uniform_int_distribution<std::size_t> pick(0, degrees.size() - 1);
        auto& d = degrees[pick(rng)];
        const auto old = d;
        do {
            d = draw();
        } while ((d - old) % 2 == 0);
    }
    return degrees;
}

std::vector<std::int64_t> bimodal_degrees(std::int64_t k_a, std::int64_t n_a, std::int64_t k_b, std::int64_t n_b)
{
    if (n_a < 0 || n_b < 0 || n_a + n_b == 0)
        throw InvalidInput("bimodal counts must be nonnegative with a positive total");
    std::vector<std::int64_t> degrees(static_cast<std::size_t>(n_a), k_a);
    degrees.insert(degrees.end(), static_cast<std::size_t>(n_b), k_b);
    return degrees;
}

void write_edge_list(std::ostream& os, const Network& net)
{
    for (std::size_t u = 0; u < net.adjacency.size(); ++u)
        for (const auto v : net.adjacency[u])
            if (static_cast<std::size_t>(v) > u)
                os << u << ' ' << v << '\n';
}

Network read_edge_list(std::istream& is)
{
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::string line;
    std::int64_t max_id = -1;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::istringstream ls(line);
        std::int64_t a = 0;
        std::int64_t b = 0;
        std::string rest;
        if (!(ls >> a >> b) || (ls >> rest))
            throw InvalidInput("edge list line " + std::to_string(lineno) + ": expected two integers");
        if (a < 0 || b < 0 || a > std::numeric_limits<NodeId>::max() || b > std::numeric_limits<NodeId>::max())
            throw InvalidInput("edge list line " + std::to_string(lineno) + ": node id out of range");
        edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
        max_id = std::max({max_id, a, b});
    }
    if (edges.empty())
        throw InvalidInput("edge list is empty");
    return network_from_edges(max_id + 1, edges);
}

QuasiSteady quasi_steady_prevalence(const SimOutcome& out, double burn_in_fraction)
{
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0))
        throw InvalidInput("burn-in fraction must lie in [0, 1)");
    QuasiSteady qs;
    const double t_burn = burn_in_fraction * out.t_max;
    if (out.extinct && out.extinction_time <= t_burn) {
        qs.excluded = true;
        return qs;
    }
    // Piecewise-constant prevalence; after extinction it stays at zero until t_max.
    double weight = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < out.times.size(); ++i) {
        const double start = std::max(out.times[i], t_burn);
        const double end = i + 1 < out.times.size() ? out.times[i + 1] : out.t_max;
        if (end <= start)
            continue;
        const double dt = end - start;
        weight += dt;
        s1 += dt * out.prevalence[i];
        s2 += dt * out.prevalence[i] * out.prevalence[i];
    }
    if (weight <= 0.0) {
        qs.mean = out.prevalence.empty() ? 0.0 : out.prevalence.back();
        return qs;
    }
    qs.mean = s1 / weight;
    qs.sd = std::sqrt(std::max(0.0, s2 / weight - qs.mean * qs.mean));
    return qs;
}

SimOutcome gillespie_sis(const Network& net, SisRates rates, std::span<const NodeId> initial_infected, double t_max,
                         std::uint64_t seed, double burn_in_fraction)
{
    if (!(rates.tau >= 0.0) || !(rates.gamma >= 0.0))
        throw InvalidInput("rates must be nonnegative");
    if (!(t_max > 0.0))
        throw InvalidInput("t_max must be positive");
    const auto n = static_cast<std::size_t>(net.size());
    if (n == 0)
        throw InvalidInput("empty network");

    auto rng = make_rng(seed, 0x676c6c73u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<char> infected(n, 0);
    // Infected nodes with their positions, for O(1) uniform picks.
    std::vector<NodeId> infected_list;
    std::vector<std::int64_t> position(n, -1);
    std::vector<std::int64_t> pressure(n, 0); // infected neighbours
    WeightTree susceptible_pressure(n);       // pressure of susceptible nodes only

    auto infect = [&](NodeId u) {
        infected[u] = 1;
        position[u] = static_cast<std::int64_t>(infected_list.size());
        infected_list.push_back(u);
        susceptible_pressure.add(u, -pressure[u]);
        for (const auto v : net.adjacency[u]) {
            ++pressure[v];
            if (!infected[v])
                susceptible_pressure.add(v, 1);
        }
    };
    auto recover = [&](NodeId u) {
        infected[u] = 0;
        const auto pos = position[u];
        infected_list[pos] = infected_list.back();
        position[infected_list[pos]] = pos;
        infected_list.pop_back();
        position[u] = -1;
        susceptible_pressure.add(u, pressure[u]);
        for (const auto v : net.adjacency[u]) {
            --pressure[v];
            if (!infected[v])
                susceptible_pressure.add(v, -1);
        }
    };

    for (const auto u : initial_infected) {
        if (u < 0 || static_cast<std::size_t>(u) >= n)
            throw InvalidInput("initial infected node out of range");
        if (!infected[u])
            infect(u);
    }

    SimOutcome out;
    out.seed = seed;
    out.t_max = t_max;
    const double inv_n = 1.0 / static_cast<double>(n);
    double t = 0.0;
    out.times.push_back(t);
    out.prevalence.push_back(static_cast<double>(infected_list.size()) * inv_n);

    while (true) {
        if (infected_list.empty()) {
            out.extinct = true;
            out.extinction_time = t;
            break;
        }
        const double recovery_rate = rates.gamma * static_cast<double>(infected_list.size());
        const double infection_rate = rates.tau * static_cast<double>(susceptible_pressure.total());
        const double total = recovery_rate + infection_rate;
        if (total <= 0.0)
            break;
        t += -std::log1p(-unit(rng)) / total;
        if (t >= t_max)
            break;
        if (unit(rng) * total < recovery_rate) {
            std::uniform_int_distribution<std::size_t> pick(0, infected_list.size() - 1);
            recover(infected_list[pick(rng)]);
        } else {
            std::uniform_int_distribution<std::int64_t> pick(0, susceptible_pressure.total() - 1);
            infect(static_cast<NodeId>(susceptible_pressure.find(pick(rng))));
        }
        ++out.events;
        out.times.push_back(t);
        out.prevalence.push_back(static_cast<double>(infected_list.size()) * inv_n);
    }

    const auto qs = quasi_steady_prevalence(out, burn_in_fraction);
    out.quasi_steady_mean = qs.mean;
    out.quasi_steady_sd = qs.sd;
    out.excluded = qs.excluded;
    return out;
}

SimOutcome gillespie_sis(const Network& net, SisRates rates, std::int64_t count, double t_max, std::uint64_t seed,
                         double burn_in_fraction)
{
    if (count < 0 || count > net.size())
        throw InvalidInput("initial infected count out of range");
    std::vector<NodeId> nodes(static_cast<std::size_t>(net.size()));
    std::iota(nodes.begin(), nodes.end(), NodeId{0});
    auto rng = make_rng(seed, 0x73656564u);
    std::vector<NodeId> chosen;
    chosen.reserve(static_cast<std::size_t>(count));
    std::sample(nodes.begin(), nodes.end(), std::back_inserter(chosen), count, rng);
    return gillespie_sis(net, rates, chosen, t_max, seed, burn_in_fraction);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

EnsembleSummary run_ensemble(const Network& net, const EnsembleConfig& cfg)
{
    if (cfg.runs <= 0)
        throw InvalidInput("ensemble needs at least one run");
    if (!(cfg.initial_fraction > 0.0 && cfg.initial_fraction <= 1.0))
        throw InvalidInput("initial infected fraction must lie in (0, 1]");
    const auto count = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::llround(cfg.initial_fraction * static_cast<double>(net.size()))));

    std::vector<SimOutcome> outcomes(static_cast<std::size_t>(cfg.runs));
    auto work = [&](int i) {
        auto out = gillespie_sis(net, cfg.rates, count, cfg.t_max, derive_seed(cfg.master_seed, i),
                                 cfg.burn_in_fraction);
        // Only the summary is kept.
        out.times.clear();
        out.times.shrink_to_fit();
        out.prevalence.clear();
        out.prevalence.shrink_to_fit();
        outcomes[i] = std::move(out);
    };
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(cfg.runs));
    std::vector<std::future<void>> tasks;
    for (unsigned w = 0; w < threads; ++w)
        tasks.push_back(std::async(std::launch::async, [&, w] {
            for (int i = static_cast<int>(w); i < cfg.runs; i += static_cast<int>(threads))
                work(i);
        }));
    for (auto& t : tasks)
        t.get();

    EnsembleSummary s;
    s.delta = cfg.rates.gamma > 0.0 ? cfg.rates.tau / cfg.rates.gamma : INFINITY;
    s.runs = cfg.runs;
    for (const auto& o : outcomes) {
        s.extinct_count += o.extinct ? 1 : 0;
        if (o.excluded) {
            ++s.excluded_count;
            continue;
        }
        s.run_means.push_back(o.quasi_steady_mean);
    }
    if (!s.run_means.empty()) {
        const double k = static_cast<double>(s.run_means.size());
        s.mean = std::accumulate(s.run_means.begin(), s.run_means.end(), 0.0) / k;
        double ss = 0.0;
        for (const auto m : s.run_means)
            ss += (m - s.mean) * (m - s.mean);
        s.sd = s.run_means.size() > 1 ? std::sqrt(ss / (k - 1.0)) : 0.0;
    }
    return s;
}

void write_outcome_csv(std::ostream& os, const SimOutcome& out)
{
    os << "t,prevalence\n";
    os.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < out.times.size(); ++i)
        os << out.times[i] << ',' << out.prevalence[i] << '\n';
}

} // namespace scpw
