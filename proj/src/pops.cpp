#include <bnsl/errors.hpp>
#include <bnsl/pops.hpp>

#include <algorithm>
#include <cmath>

namespace bnsl {

bool store_order(const ParentSetScore& a, const ParentSetScore& b) noexcept
{
    if (a.score != b.score) return a.score < b.score;
    if (a.parents.size() != b.parents.size()) return a.parents.size() < b.parents.size();
    return a.parents < b.parents;
}

std::size_t effective_parent_cap(std::size_t num_variables, std::size_t num_records, std::size_t max_parents)
{
    if (num_variables <= 1) return 0;
    std::size_t cap = std::clamp<std::size_t>(max_parents, 1, num_variables - 1);
    if (num_records >= 2) {
        const double n = static_cast<double>(num_records);
        const double bound = std::ceil(std::log2(2.0 * n / std::log2(n)));
        if (bound < static_cast<double>(cap)) cap = static_cast<std::size_t>(std::max(1.0, bound));
    }
    return cap;
}

namespace {

void enumerate_mdl(const Dataset& data, VariableId child, const std::vector<VariableId>& candidates, std::size_t start,
                   VarSet current, const detail::ConfigKeys& keys, double num_params, std::size_t cap,
                   const double half_log_n, std::vector<std::uint64_t>& scratch, std::vector<ParentSetScore>& out)
{
    const double h = detail::conditional_entropy(keys, data, child, scratch);
    out.push_back({current, h + half_log_n * num_params});
    if (current.size() == cap) return;
    for (std::size_t i = start; i < candidates.size(); ++i) {
        const auto p = candidates[i];
        auto extended = detail::extend_config_keys(keys, data, p);
        enumerate_mdl(data, child, candidates, i + 1, current.with(p), extended,
                      num_params * static_cast<double>(data.arity(p)), cap, half_log_n, scratch, out);
    }
}

void enumerate_generic(const LocalScoreFunction& score, VariableId child, const std::vector<VariableId>& candidates,
                       std::size_t start, VarSet current, std::size_t cap, std::vector<ParentSetScore>& out)
{
    out.push_back({current, score.score(child, current)});
    if (current.size() == cap) return;
    for (std::size_t i = start; i < candidates.size(); ++i) {
        enumerate_generic(score, child, candidates, i + 1, current.with(candidates[i]), cap, out);
    }
}

std::vector<VariableId> others(std::size_t n, VariableId child)
{
    std::vector<VariableId> c;
    for (VariableId v = 0; v < n; ++v) {
        if (v != child) c.push_back(v);
    }
    return c;
}

}  // namespace

std::vector<ParentSetScore> enumerate_scores(const Dataset& data, VariableId child, std::size_t max_parents)
{
    const auto n = data.num_variables();
    const auto cap = effective_parent_cap(n, data.num_records(), max_parents);
    const double half_log_n = std::log2(static_cast<double>(data.num_records())) / 2.0;
    std::vector<ParentSetScore> out;
    std::vector<std::uint64_t> scratch;
    enumerate_mdl(data, child, others(n, child), 0, VarSet{}, detail::empty_config_keys(data.num_records()),
                  static_cast<double>(data.arity(child) - 1), cap, half_log_n, scratch, out);
    return out;
}

std::vector<ParentSetScore> enumerate_scores(const LocalScoreFunction& score, VariableId child, std::size_t max_parents)
{
    const auto n = score.num_variables();
    const auto cap = n <= 1 ? 0 : std::clamp<std::size_t>(max_parents, 1, n - 1);
    std::vector<ParentSetScore> out;
    enumerate_generic(score, child, others(n, child), 0, VarSet{}, cap, out);
    return out;
}

std::vector<ParentSetScore> prune_to_pops(std::vector<ParentSetScore> raw)
{
    if (std::none_of(raw.begin(), raw.end(), [](const auto& e) { return e.parents.empty(); })) {
        throw MissingEmptySet("score list lacks the empty parent set");
    }
    std::sort(raw.begin(), raw.end(), store_order);
    // A dominating subset always sorts earlier, and if it was itself pruned
    // then its own dominator (also a subset) was kept; checking kept entries
    // suffices.
    std::vector<ParentSetScore> kept;
    for (const auto& entry : raw) {
        const bool dominated = std::any_of(kept.begin(), kept.end(), [&](const auto& k) {
            return k.parents.is_subset_of(entry.parents);
        });
        if (!dominated) kept.push_back(entry);
    }
    return kept;
}

double quantize_score(double score) noexcept { return std::ldexp(std::nearbyint(std::ldexp(score, 30)), -30); }

PopsStore::PopsStore(std::vector<std::vector<ParentSetScore>> lists, std::vector<std::string> names,
                     std::optional<std::size_t> num_records)
    : names_(std::move(names)), num_records_(num_records)
{
    const auto n = lists.size();
    if (n > kMaxVariables) throw TooManyVariables("score store exceeds " + std::to_string(kMaxVariables) + " variables");
    if (names_.empty()) {
        for (std::size_t i = 0; i < n; ++i) names_.push_back("X" + std::to_string(i));
    }
    if (names_.size() != n) throw DimensionMismatch("name count differs from variable count");
    lists_.reserve(n);
    for (VariableId v = 0; v < n; ++v) {
        auto& list = lists[v];
        for (auto& e : list) {
            if (e.parents.contains(v)) throw ChildInParents("variable " + std::to_string(v) + " listed as own parent");
            if (!e.parents.is_subset_of(VarSet::full(n))) throw ParseError("parent index out of range");
            e.score = quantize_score(e.score);
        }
        lists_.push_back(prune_to_pops(std::move(list)));
    }
}

PopsStore PopsStore::from_data(const Dataset& data, std::size_t max_parents)
{
    std::vector<std::vector<ParentSetScore>> lists;
    lists.reserve(data.num_variables());
    for (VariableId v = 0; v < data.num_variables(); ++v) lists.push_back(enumerate_scores(data, v, max_parents));
    return PopsStore(std::move(lists), data.names(), data.num_records());
}

std::size_t PopsStore::total_pops() const noexcept
{
    std::size_t total = 0;
    for (const auto& l : lists_) total += l.size();
    return total;
}

const ParentSetScore& PopsStore::best_score(VariableId child, VarSet candidates) const
{
    if (child >= lists_.size()) throw DimensionMismatch("variable index out of range");
    if (candidates.contains(child)) {
        throw ChildInCandidates("variable " + std::to_string(child) + " is in its own candidate set");
    }
    return best_score_unchecked(child, candidates);
}

}  // namespace bnsl
