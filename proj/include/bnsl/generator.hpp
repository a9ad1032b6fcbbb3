#pragma once

#include <bnsl/dataset.hpp>
#include <bnsl/network.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace bnsl {

/// All generation draws from one seeded 64-bit Mersenne Twister stream, so a
/// seed fixes every output bit for a given build.
using Rng = std::mt19937_64;

struct GenConfig {
    std::size_t num_variables = 0;
    std::size_t max_parents = 1;
    std::optional<std::size_t> mcmc_steps;  ///< defaults to 10 * n^2
    double dirichlet_alpha = 1.0;
    std::uint64_t seed = 0;

    std::size_t steps() const noexcept { return mcmc_steps.value_or(10 * num_variables * num_variables); }
};

/// Throws InvalidConfig unless n >= 1, 1 <= max_parents < n and alpha > 0.
void validate(const GenConfig& config);

/// Random connected DAG with in-degree at most max_parents, by a Markov
/// chain over arc additions and removals started from the chain
/// 0 -> 1 -> ... -> n-1. A proposal that would disconnect the skeleton,
/// create a cycle, or exceed the parent bound is rejected and the chain
/// stays put.
Network random_dag(const GenConfig& config, Rng& rng);

/// True when the undirected skeleton is connected.
bool is_connected(const Network& net);

struct GeneratingNetwork {
    Network structure;
    std::vector<std::uint32_t> arities;
    /// cpts[v][row][state]; rows in row-major order of the parents' values
    /// (ascending parent index, last parent varying fastest).
    std::vector<std::vector<std::vector<double>>> cpts;

    std::size_t num_variables() const noexcept { return structure.num_variables(); }
};

/// Row of v's CPT selected by the parent values found in `states`.
std::size_t cpt_row(const GeneratingNetwork& net, VariableId v, const std::vector<State>& states);

/// Binary variables with every CPT row drawn from a symmetric Dirichlet.
/// Throws CyclicStructure.
GeneratingNetwork sample_cpts(const Network& structure, double alpha, Rng& rng);

/// Forward (ancestral) sampling of complete records.
Dataset logic_sample(const GeneratingNetwork& net, std::size_t num_records, Rng& rng);

/// Convenience: random_dag then sample_cpts from one stream seeded by
/// config.seed.
GeneratingNetwork generate_network(const GenConfig& config);

void write_generating_network(std::ostream& out, const GeneratingNetwork& net);
GeneratingNetwork read_generating_network(std::istream& in);
GeneratingNetwork read_generating_network_file(const std::string& path);

}  // namespace bnsl
