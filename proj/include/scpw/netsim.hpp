#pragma once

#include "scpw/moments.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace scpw {

using NodeId = std::int32_t;

/// Simple undirected graph stored as sorted neighbour lists.
struct Network {
    std::vector<std::vector<NodeId>> adjacency;
    /// Degrees after erasure of self-loops and multi-edges.
    std::vector<std::int64_t> degree_sequence;
    /// Degrees that were requested.
    std::vector<std::int64_t> target_degrees;
    std::int64_t erased_self_loops = 0;
    std::int64_t erased_multi_edges = 0;

    std::int64_t size() const { return static_cast<std::int64_t>(adjacency.size()); }
    std::int64_t edge_count() const;
    DegreeMoments realized_moments() const;
    DegreeMoments target_moments() const;
};

/// Erased configuration model: uniform stub matching, then self-loops and
/// repeated edges are dropped. Throws InvalidInput for an odd stub sum or a
/// degree >= n.
Network sample_configuration_model(std::span<const std::int64_t> degrees, std::uint64_t seed);

/// Network from an explicit edge list over nodes 0..n-1; throws on self-loops,
/// duplicates or out-of-range ids.
Network network_from_edges(std::int64_t n, std::span<const std::pair<NodeId, NodeId>> edges);

/// n i.i.d. Poisson(mean) degrees capped at n-1; one node is redrawn until the stub sum is even.
std::vector<std::int64_t> sample_poisson_degrees(std::int64_t n, double mean, std::uint64_t seed);
std::vector<std::int64_t> bimodal_degrees(std::int64_t k_a, std::int64_t n_a, std::int64_t k_b, std::int64_t n_b);

/// Edge list, two integers per line, each edge once with u < v.
void write_edge_list(std::ostream& os, const Network& net);
Network read_edge_list(std::istream& is);

inline constexpr double kDefaultSimTMax = 200.0;
inline constexpr double kDefaultBurnIn = 0.5;

struct SimOutcome {
    /// Event times in units of 1/gamma; starts at 0 and ends at t_max or extinction.
    std::vector<double> times;
    /// Infected fraction after each event.
    std::vector<double> prevalence;
    double t_max = 0.0;
    double quasi_steady_mean = 0.0;
    double quasi_steady_sd = 0.0;
    /// Quasi-steady statistics are undefined (extinct before burn-in).
    bool excluded = false;
    std::uint64_t seed = 0;
    bool extinct = false;
    double extinction_time = 0.0;
    std::int64_t events = 0;
};

struct SisRates {
    double tau = 0.0;
    double gamma = 1.0;
};

/// Exact continuous-time SIS dynamics (Gillespie direct method). Each S-I edge
/// transmits at rate tau and each infected node recovers at rate gamma.
SimOutcome gillespie_sis(const Network& net, SisRates rates, std::span<const NodeId> initial_infected, double t_max,
                         std::uint64_t seed, double burn_in_fraction = kDefaultBurnIn);

/// Same, with `count` initially infected nodes drawn uniformly from the seed.
SimOutcome gillespie_sis(const Network& net, SisRates rates, std::int64_t count, double t_max, std::uint64_t seed,
                         double burn_in_fraction = kDefaultBurnIn);

struct QuasiSteady {
    double mean = 0.0;
    double sd = 0.0;
    /// Extinct before the burn-in ended; excluded from ensemble means.
    bool excluded = false;
};

/// Time-weighted mean and standard deviation of prevalence over [burn_in * t_max, t_max].
QuasiSteady quasi_steady_prevalence(const SimOutcome& out, double burn_in_fraction);

struct EnsembleConfig {
    SisRates rates;
    double initial_fraction = 0.01;
    double t_max = kDefaultSimTMax;
    double burn_in_fraction = kDefaultBurnIn;
    int runs = 20;
    std::uint64_t master_seed = 1;
    unsigned threads = 0; ///< 0: hardware concurrency
};

struct EnsembleSummary {
    double delta = 0.0;
    int runs = 0;
    /// Mean of per-run quasi-steady means over non-excluded runs (0 when all are excluded).
    double mean = 0.0;
    /// Standard deviation of the per-run means.
    double sd = 0.0;
    int extinct_count = 0;
    int excluded_count = 0;
    std::vector<double> run_means;
};

/// Seed of run `index` derived from the master seed.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

/// Independent runs on one network; run i uses derive_seed(master_seed, i).
EnsembleSummary run_ensemble(const Network& net, const EnsembleConfig& cfg);

/// CSV with header `t,prevalence`.
void write_outcome_csv(std::ostream& os, const SimOutcome& out);

} // namespace scpw
