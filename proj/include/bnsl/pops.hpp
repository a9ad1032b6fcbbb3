#pragma once

#include <bnsl/dataset.hpp>
#include <bnsl/scoring.hpp>
#include <bnsl/var_set.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace bnsl {

struct ParentSetScore {
    VarSet parents;
    double score = 0.0;

    friend bool operator==(const ParentSetScore&, const ParentSetScore&) = default;
};

/// Store ordering: ascending score, then smaller cardinality, then smaller
/// bit pattern.
bool store_order(const ParentSetScore& a, const ParentSetScore& b) noexcept;

/// Largest parent-set size worth scoring under MDL for N records:
/// min(max_parents, ceil(log2(2N / log2 N))), clamped to [1, n - 1]
/// (0 when n = 1). Any larger set is beaten by the empty set.
std::size_t effective_parent_cap(std::size_t num_variables, std::size_t num_records, std::size_t max_parents);

/// MDL scores of every parent set of `child` up to the effective cap, in a
/// deterministic depth-first order.
std::vector<ParentSetScore> enumerate_scores(const Dataset& data, VariableId child, std::size_t max_parents);

/// Same for an arbitrary score; no MDL-specific cap is applied.
std::vector<ParentSetScore> enumerate_scores(const LocalScoreFunction& score, VariableId child, std::size_t max_parents);

/// Keeps (P, s) iff no proper subset of P in `raw` scores <= s. Output is in
/// store order. Throws MissingEmptySet if the empty set is absent.
std::vector<ParentSetScore> prune_to_pops(std::vector<ParentSetScore> raw);

/// Snaps a score onto a grid of 2^-30 bits. Sums of snapped scores are exact
/// in double precision up to totals of 2^23 bits, so path costs computed in
/// different association orders compare equal.
double quantize_score(double score) noexcept;

/// Possibly optimal parent sets for every variable; answers BestScore(X, U)
/// by scanning the ascending list for the first subset of U.
class PopsStore {
public:
    /// Quantizes and prunes each list. `names` may be empty (defaults to
    /// X0, X1, ...).
    PopsStore(std::vector<std::vector<ParentSetScore>> lists, std::vector<std::string> names = {},
              std::optional<std::size_t> num_records = std::nullopt);

    static PopsStore from_data(const Dataset& data, std::size_t max_parents);

    std::size_t num_variables() const noexcept { return lists_.size(); }
    VarSet all_variables() const noexcept { return VarSet::full(lists_.size()); }

    const std::vector<ParentSetScore>& parent_sets(VariableId child) const { return lists_[child]; }
    std::size_t pops_count(VariableId child) const { return lists_[child].size(); }
    std::size_t total_pops() const noexcept;

    const std::vector<std::string>& names() const noexcept { return names_; }
    std::optional<std::size_t> num_records() const noexcept { return num_records_; }

    /// Throws ChildInCandidates when child is in `candidates`.
    const ParentSetScore& best_score(VariableId child, VarSet candidates) const;

    /// Unchecked variant for the search hot path.
    const ParentSetScore& best_score_unchecked(VariableId child, VarSet candidates) const noexcept
    {
        const auto& list = lists_[child];
        for (const auto& entry : list) {
            if (entry.parents.is_subset_of(candidates)) return entry;
        }
        return list.back();  // unreachable: the empty set is always present
    }

    friend bool operator==(const PopsStore&, const PopsStore&) = default;

private:
    std::vector<std::vector<ParentSetScore>> lists_;
    std::vector<std::string> names_;
    std::optional<std::size_t> num_records_;
};

}  // namespace bnsl
