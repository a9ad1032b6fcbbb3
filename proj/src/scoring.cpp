#include <bnsl/errors.hpp>
#include <bnsl/scoring.hpp>

#include <algorithm>
#include <cmath>
#include <map>

namespace bnsl {

namespace detail {

namespace {

// Dense count arrays stay below this many cells; beyond it keys are re-ranked.
constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 20;

void rerank(ConfigKeys& ck)
{
    std::vector<std::uint64_t> distinct = ck.keys;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (auto& k : ck.keys) k = static_cast<std::uint64_t>(std::lower_bound(distinct.begin(), distinct.end(), k) - distinct.begin());
    ck.space = std::max<std::uint64_t>(1, distinct.size());
}

}  // namespace

ConfigKeys empty_config_keys(std::size_t num_records)
{
    return ConfigKeys{std::vector<std::uint64_t>(num_records, 0), 1};
}

ConfigKeys extend_config_keys(const ConfigKeys& base, const Dataset& data, VariableId parent)
{
    ConfigKeys out = base;
    if (out.space > kDenseLimit / data.arity(parent)) rerank(out);
    const std::uint64_t r = data.arity(parent);
    const auto& col = data.column(parent);
    for (std::size_t j = 0; j < out.keys.size(); ++j) out.keys[j] = out.keys[j] * r + col[j];
    out.space *= r;
    return out;
}

double conditional_entropy(const ConfigKeys& keys, const Dataset& data, VariableId child, std::vector<std::uint64_t>& scratch)
{
    // A sparse key space would make the cell scan dominate; compact it first.
    ConfigKeys compact;
    const bool sparse = keys.space > 2 * static_cast<std::uint64_t>(keys.keys.size()) + 16;
    if (sparse) {
        compact = keys;
        rerank(compact);
    }
    const ConfigKeys& ck = sparse ? compact : keys;
    const std::uint64_t r = data.arity(child);
    const std::uint64_t cells = ck.space * r;
    // layout: [0, cells) joint counts, [cells, cells + space) marginals
    scratch.assign(cells + ck.space, 0);
    const auto& col = data.column(child);
    for (std::size_t j = 0; j < ck.keys.size(); ++j) {
        ++scratch[ck.keys[j] * r + col[j]];
        ++scratch[cells + ck.keys[j]];
    }
    double h = 0.0;
    for (std::uint64_t c = 0; c < cells; ++c) {
        const auto n = scratch[c];
        if (n == 0) continue;
        const auto marginal = scratch[cells + c / r];
        h -= static_cast<double>(n) * std::log2(static_cast<double>(n) / static_cast<double>(marginal));
    }
    return h;
}

}  // namespace detail

CountTable contingency(const Dataset& data, VariableId child, VarSet parents)
{
    if (parents.contains(child)) throw ChildInParents("child " + std::to_string(child) + " is among its parents");
    std::map<std::vector<State>, std::vector<std::uint64_t>> tally;
    std::vector<State> config;
    for (std::size_t j = 0; j < data.num_records(); ++j) {
        config.clear();
        for (auto p : parents) config.push_back(data.at(j, p));
        auto& counts = tally[config];
        if (counts.empty()) counts.assign(data.arity(child), 0);
        ++counts[data.at(j, child)];
    }
    CountTable table{child, parents, {}};
    table.rows.reserve(tally.size());
    for (auto& [states, counts] : tally) {
        std::uint64_t marginal = 0;
        for (auto c : counts) marginal += c;
        table.rows.push_back({states, std::move(counts), marginal});
    }
    return table;
}

LocalScore mdl_local(const Dataset& data, VariableId child, VarSet parents)
{
    if (parents.contains(child)) throw ChildInParents("child " + std::to_string(child) + " is among its parents");
    auto keys = detail::empty_config_keys(data.num_records());
    double k = static_cast<double>(data.arity(child) - 1);
    for (auto p : parents) {
        keys = detail::extend_config_keys(keys, data, p);
        k *= static_cast<double>(data.arity(p));
    }
    std::vector<std::uint64_t> scratch;
    const double h = detail::conditional_entropy(keys, data, child, scratch);
    const double penalty = std::log2(static_cast<double>(data.num_records())) / 2.0 * k;
    return LocalScore{child, parents, h + penalty, h, k};
}

double mdl_network(const Dataset& data, const Network& net)
{
    if (net.num_variables() != data.num_variables()) throw DimensionMismatch("network and dataset sizes differ");
    topological_order(net);
    double total = 0.0;
    for (VariableId v = 0; v < net.num_variables(); ++v) total += mdl_local(data, v, net.parents(v)).score;
    return total;
}

}  // namespace bnsl
