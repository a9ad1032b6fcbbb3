#pragma once

#include <bnsl/pops.hpp>
#include <bnsl/var_set.hpp>

#include <array>
#include <cstdint>
#include <vector>

namespace bnsl {

/// Lower bound on the cost of adding every variable outside `added`.
class Heuristic {
public:
    virtual ~Heuristic() = default;
    virtual double estimate(VarSet added) const = 0;
};

/// h = 0 everywhere. Turns A* into uniform-cost search; used in tests.
class ZeroHeuristic final : public Heuristic {
public:
    double estimate(VarSet) const override { return 0.0; }
};

/// Every remaining variable takes its best parents from all other
/// variables, ignoring acyclicity.
class SimpleHeuristic final : public Heuristic {
public:
    explicit SimpleHeuristic(const PopsStore& store);
    double estimate(VarSet added) const override;

private:
    std::vector<double> unconstrained_best_;
};

/// Uncached evaluation of the simple heuristic.
double simple_h(const PopsStore& store, VarSet added);

/// Disjoint variable groups covering all variables.
using Partition = std::vector<VarSet>;

/// Two groups split at ceil(n/2) by index; a single group when n <= 1.
Partition default_partition(std::size_t num_variables);

/// Throws InvalidPartition on overlap, empty groups, or missing variables.
void validate_partition(const Partition& groups, std::size_t num_variables);

/// Static pattern database. For each group G the table holds, for every
/// remaining subset R of G, the cheapest way to add R when acyclicity is
/// enforced only inside R and everything outside R may serve as a parent.
class PatternDatabase final : public Heuristic {
public:
    PatternDatabase(const PopsStore& store, Partition groups);

    double estimate(VarSet added) const override;

    const Partition& groups() const noexcept { return groups_; }
    /// Table entry for `remaining`, which must be a subset of group `g`.
    double table_value(std::size_t g, VarSet remaining) const;

private:
    struct GroupTable {
        VarSet members;
        std::vector<double> cost;  ///< indexed by the compressed remaining subset
        /// compressed index contribution of each byte of a VarSet
        std::array<std::array<std::uint32_t, 256>, 8> byte_index{};

        std::uint32_t compress(VarSet s) const noexcept;
    };

    Partition groups_;
    std::vector<GroupTable> tables_;
};

PatternDatabase build_pd(const PopsStore& store, Partition groups);

double pd_h(const PatternDatabase& pd, VarSet added);

}  // namespace bnsl
