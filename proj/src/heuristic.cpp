#include <bnsl/errors.hpp>
#include <bnsl/heuristic.hpp>

#include <limits>

namespace bnsl {

SimpleHeuristic::SimpleHeuristic(const PopsStore& store)
{
    const auto all = store.all_variables();
    unconstrained_best_.reserve(store.num_variables());
    for (VariableId v = 0; v < store.num_variables(); ++v) {
        unconstrained_best_.push_back(store.best_score(v, all.without(v)).score);
    }
}

double SimpleHeuristic::estimate(VarSet added) const
{
    double h = 0.0;
    const auto remaining = VarSet::full(unconstrained_best_.size()) - added;
    for (auto v : remaining) h += unconstrained_best_[v];
    return h;
}

double simple_h(const PopsStore& store, VarSet added)
{
    const auto all = store.all_variables();
    double h = 0.0;
    for (auto v : all - added) h += store.best_score(v, all.without(v)).score;
    return h;
}

Partition default_partition(std::size_t num_variables)
{
    if (num_variables == 0) return {};
    if (num_variables == 1) return {VarSet::full(1)};
    const auto split = (num_variables + 1) / 2;
    const auto low = VarSet::full(split);
    return {low, VarSet::full(num_variables) - low};
}

void validate_partition(const Partition& groups, std::size_t num_variables)
{
    VarSet seen;
    for (auto g : groups) {
        if (g.empty()) throw InvalidPartition("partition contains an empty group");
        if (!(g & seen).empty()) throw InvalidPartition("partition groups overlap");
        seen = seen | g;
    }
    if (seen != VarSet::full(num_variables)) throw InvalidPartition("partition does not cover every variable exactly");
}

std::uint32_t PatternDatabase::GroupTable::compress(VarSet s) const noexcept
{
    const auto bits = s.bits();
    std::uint32_t idx = 0;
    for (std::size_t b = 0; b < 8; ++b) idx |= byte_index[b][(bits >> (8 * b)) & 0xFF];
    return idx;
}

PatternDatabase::PatternDatabase(const PopsStore& store, Partition groups) : groups_(std::move(groups))
{
    const auto n = store.num_variables();
    validate_partition(groups_, n);
    const auto all = store.all_variables();
    for (auto members : groups_) {
        if (members.size() > 30) throw InvalidPartition("pattern database group larger than 30 variables");
        GroupTable t;
        t.members = members;
        std::vector<VariableId> order(members.begin(), members.end());
        for (std::size_t b = 0; b < 8; ++b) {
            for (std::uint32_t value = 0; value < 256; ++value) {
                std::uint32_t idx = 0;
                for (std::size_t k = 0; k < order.size(); ++k) {
                    const auto v = order[k];
                    if (v / 8 == b && ((value >> (v % 8)) & 1u)) idx |= std::uint32_t{1} << k;
                }
                t.byte_index[b][value] = idx;
            }
        }
        // cost[R] = min over X in R of BestScore(X, V \ R) + cost[R \ {X}];
        // increasing compressed index visits every subset after its subsets.
        const std::size_t size = std::size_t{1} << order.size();
        t.cost.assign(size, 0.0);
        for (std::size_t r = 1; r < size; ++r) {
            VarSet remaining;
            for (std::size_t k = 0; k < order.size(); ++k) {
                if ((r >> k) & 1u) remaining = remaining.with(order[k]);
            }
            const auto pool = all - remaining;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < order.size(); ++k) {
                if (!((r >> k) & 1u)) continue;
                const double c = store.best_score_unchecked(order[k], pool).score + t.cost[r & ~(std::size_t{1} << k)];
                if (c < best) best = c;
            }
            t.cost[r] = best;
        }
        tables_.push_back(std::move(t));
    }
}

double PatternDatabase::estimate(VarSet added) const
{
    double h = 0.0;
    for (const auto& t : tables_) h += t.cost[t.compress(t.members - added)];
    return h;
}

double PatternDatabase::table_value(std::size_t g, VarSet remaining) const
{
    const auto& t = tables_.at(g);
    if (!remaining.is_subset_of(t.members)) throw InvalidPartition("subset is not inside the requested group");
    return t.cost[t.compress(remaining)];
}

PatternDatabase build_pd(const PopsStore& store, Partition groups) { return PatternDatabase(store, std::move(groups)); }

double pd_h(const PatternDatabase& pd, VarSet added) { return pd.estimate(added); }

}  // namespace bnsl
