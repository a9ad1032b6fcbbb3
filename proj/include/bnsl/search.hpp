#pragma once

#include <bnsl/dataset.hpp>
#include <bnsl/heuristic.hpp>
#include <bnsl/network.hpp>
#include <bnsl/pops.hpp>
#include <bnsl/var_set.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

namespace bnsl {

enum class Algorithm { astar, wastar, aweia, ara, awina };

std::string_view to_string(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;

struct HeuristicSpec {
    enum class Kind { simple, pattern_database, zero };
    Kind kind = Kind::pattern_database;
    /// Pattern database groups; empty selects default_partition.
    Partition groups;
};

struct SearchConfig {
    Algorithm algorithm = Algorithm::astar;
    double epsilon = 1.25;       ///< heuristic weight for wastar, aweia and ara
    double epsilon_step = 0.05;  ///< ara weight decrement per iteration
    std::size_t window_init = 0;
    std::size_t window_step = 1;
    std::optional<std::int64_t> time_limit_ms;
    /// Budget on expanded + open + frozen + repair node counts.
    std::optional<std::size_t> node_limit;
    HeuristicSpec heuristic;
};

/// Throws InvalidConfig.
void validate(const SearchConfig& config);

/// Resource limits shared by every engine. The stop token is polled before
/// each expansion.
struct SearchLimits {
    std::optional<std::int64_t> time_limit_ms;
    std::optional<std::size_t> node_limit;
    std::stop_token stop;
};

enum class TraceEvent { incumbent_improved, bound_improved, iteration_end, terminated };
std::string_view to_string(TraceEvent e) noexcept;

struct TraceRecord {
    std::int64_t elapsed_ms = 0;
    TraceEvent event = TraceEvent::terminated;
    std::optional<double> incumbent_score;
    double lower_bound = 0.0;
    double error_bound = 0.0;  ///< +inf while there is no incumbent
    std::uint64_t expanded = 0;
};

struct Incumbent {
    Network network;
    double score = 0.0;
    std::int64_t found_at_ms = 0;
};

/// `time_limit` also covers cancellation through the stop token.
enum class Termination { optimal, time_limit, node_limit, exhausted };
std::string_view to_string(Termination t) noexcept;

struct SearchStats {
    std::uint64_t expanded = 0;
    std::uint64_t generated = 0;
    std::uint64_t reexpanded = 0;
};

struct SolveResult {
    std::optional<Incumbent> incumbent;
    double lower_bound = 0.0;
    double error_bound = 0.0;
    bool proved_optimal = false;
    Termination termination = Termination::exhausted;
    std::vector<TraceRecord> trace;
    SearchStats stats;
};

/// Order-graph node as seen by callers of expand().
struct SearchNode {
    VarSet vars;
    double g = 0.0;
    std::optional<VariableId> last_var;
    std::size_t layer() const noexcept { return vars.size(); }
};

struct Successor {
    VarSet vars;
    VariableId added = 0;
    double cost = 0.0;  ///< BestScore(added, node.vars)
    VarSet parents;     ///< the minimizing parent set
};

/// One successor per variable outside node.vars, ascending by variable.
std::vector<Successor> expand(const PopsStore& store, const SearchNode& node);

struct ReconstructedNetwork {
    Network network;
    double score = 0.0;
    std::vector<VariableId> order;  ///< variables in the order they were added
};

/// Walks (vars, last variable) links back from `goal` to the empty set and
/// gives each variable its best parents among those added before it.
/// Throws BrokenPath when a link is missing or inconsistent.
ReconstructedNetwork reconstruct(const PopsStore& store, VarSet goal,
                                 const std::function<std::optional<VariableId>(VarSet)>& last_var_of);

SolveResult astar(const PopsStore& store, const Heuristic& h, const SearchLimits& limits = {});
SolveResult weighted_astar(const PopsStore& store, const Heuristic& h, double epsilon, const SearchLimits& limits = {});
SolveResult anytime_weighted_astar(const PopsStore& store, const Heuristic& h, double epsilon,
                                   const SearchLimits& limits = {});
SolveResult ara_star(const PopsStore& store, const Heuristic& h, double initial_epsilon, double epsilon_step,
                     const SearchLimits& limits = {});
SolveResult anytime_window_astar(const PopsStore& store, const Heuristic& h, std::size_t initial_window,
                                 std::size_t window_step, const SearchLimits& limits = {});

/// Builds the configured heuristic, then dispatches on config.algorithm.
SolveResult solve(const PopsStore& store, const SearchConfig& config, std::stop_token stop = {});
SolveResult solve(const PopsStore& store, const SearchConfig& config, const Heuristic& h, std::stop_token stop = {});
SolveResult solve(const Dataset& data, std::size_t max_parents, const SearchConfig& config, std::stop_token stop = {});

std::unique_ptr<Heuristic> make_heuristic(const PopsStore& store, const HeuristicSpec& spec);

/// CSV with header `elapsed_ms,event,incumbent_score,lower_bound,error_bound,expanded`.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);

}  // namespace bnsl
