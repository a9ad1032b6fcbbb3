#pragma once

#include <bnsl/heuristic.hpp>
#include <bnsl/network.hpp>
#include <bnsl/pops.hpp>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace bnsl {

inline constexpr std::size_t kDefaultCensusLimit = 20;

struct LayerStats {
    std::uint64_t node_count = 0;
    double mean_f = 0.0;
    /// Mean |parents| chosen for the minimizing last-added variable; 0 on layer 0.
    double mean_parent_set_size = 0.0;
};

struct FCensus {
    std::size_t n = 0;
    std::uint64_t total_nodes = 0;
    double optimal_score = 0.0;
    double pct_below_optimal = 0.0;
    std::vector<LayerStats> per_layer;  ///< layers 0..n
    /// Indexed by VarSet bits.
    std::vector<double> g;
    std::vector<double> f;
};

/// Exact g for every order-graph node by forward subset DP, then f = g + h.
/// Throws TooManyVariables when n exceeds census_limit.
FCensus fcost_census(const PopsStore& store, const Heuristic& h, double optimal_score,
                     std::size_t census_limit = kDefaultCensusLimit);
/// As above with the optimum taken from the census's own g at the goal.
FCensus fcost_census(const PopsStore& store, const Heuristic& h, std::size_t census_limit = kDefaultCensusLimit);

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    std::uint64_t count = 0;
};

/// Equal-width bins over f / normalizer (the record count). The last bin is
/// closed on the right.
std::vector<HistogramBin> f_histogram(const FCensus& census, double normalizer, std::size_t bins = 50);

/// Arc present in exactly one network: 1. Arc present in both, reversed: 1.
/// Throws DimensionMismatch.
std::size_t shd(const Network& a, const Network& b);

double avg_parents(const Network& net);

/// `layer,node_count,mean_f,mean_parent_set_size` rows followed by a
/// `# n=.. total_nodes=.. optimal_score=.. pct_below_optimal=..` line.
void write_census_csv(std::ostream& out, const FCensus& census);
/// `bin_lo,bin_hi,count`.
void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins);

}  // namespace bnsl
