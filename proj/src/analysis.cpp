#include <bnsl/analysis.hpp>
#include <bnsl/errors.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

namespace bnsl {

namespace {

FCensus census_impl(const PopsStore& store, const Heuristic& h, std::optional<double> optimal, std::size_t census_limit)
{
    const auto n = store.num_variables();
    if (n > census_limit || n > 30) {
        throw TooManyVariables(fmt::format("census needs n <= {}, got {}", std::min<std::size_t>(census_limit, 30), n));
    }
    const std::size_t total = std::size_t{1} << n;
    FCensus census;
    census.n = n;
    census.total_nodes = total;
    census.g.assign(total, 0.0);
    census.f.assign(total, 0.0);
    census.per_layer.assign(n + 1, LayerStats{});

    std::vector<double> parent_sum(n + 1, 0.0);
    std::vector<double> f_sum(n + 1, 0.0);
    // every proper subset of U has a smaller index, so increasing order is a
    // valid DP order
    for (std::size_t bits = 0; bits < total; ++bits) {
        const VarSet u(bits);
        std::size_t chosen_parents = 0;
        if (bits != 0) {
            double best = std::numeric_limits<double>::infinity();
            for (auto x : u) {
                const auto prev = u.without(x);
                const auto entry = store.best_score_unchecked(x, prev);
                const double c = census.g[prev.bits()] + entry.score;
                if (c < best) {
                    best = c;
                    chosen_parents = entry.parents.size();
                }
            }
            census.g[bits] = best;
        }
        const double f = census.g[bits] + h.estimate(u);
        census.f[bits] = f;
        const auto layer = u.size();
        auto& stats = census.per_layer[layer];
        ++stats.node_count;
        f_sum[layer] += f;
        parent_sum[layer] += static_cast<double>(chosen_parents);
    }
    for (std::size_t l = 0; l <= n; ++l) {
        auto& stats = census.per_layer[l];
        const auto count = static_cast<double>(stats.node_count);
        stats.mean_f = f_sum[l] / count;
        stats.mean_parent_set_size = parent_sum[l] / count;
    }
    census.optimal_score = optimal.value_or(census.g[total - 1]);
    const auto below = std::count_if(census.f.begin(), census.f.end(),
                                     [&](double f) { return f < census.optimal_score; });
    census.pct_below_optimal = 100.0 * static_cast<double>(below) / static_cast<double>(total);
    return census;
}

}  // namespace

FCensus fcost_census(const PopsStore& store, const Heuristic& h, double optimal_score, std::size_t census_limit)
{
    return census_impl(store, h, optimal_score, census_limit);
}

FCensus fcost_census(const PopsStore& store, const Heuristic& h, std::size_t census_limit)
{
    return census_impl(store, h, std::nullopt, census_limit);
}

std::vector<HistogramBin> f_histogram(const FCensus& census, double normalizer, std::size_t bins)
{
    if (bins == 0) throw InvalidConfig("histogram needs at least one bin");
    if (!(normalizer > 0.0)) throw InvalidConfig("histogram normalizer must be positive");
    if (census.f.empty()) return {};
    const auto [lo_it, hi_it] = std::minmax_element(census.f.begin(), census.f.end());
    const double lo = *lo_it / normalizer;
    double hi = *hi_it / normalizer;
    if (hi <= lo) hi = lo + 1.0;
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<HistogramBin> out(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].lo = lo + width * static_cast<double>(b);
        out[b].hi = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
    }
    for (double f : census.f) {
        auto b = static_cast<std::size_t>((f / normalizer - lo) / width);
        ++out[std::min(b, bins - 1)].count;
    }
    return out;
}

std::size_t shd(const Network& a, const Network& b)
{
    if (a.num_variables() != b.num_variables()) throw DimensionMismatch("networks have different variable counts");
    const auto n = static_cast<VariableId>(a.num_variables());
    std::size_t distance = 0;
    for (VariableId i = 0; i < n; ++i) {
        for (VariableId j = i + 1; j < n; ++j) {
            const bool a_ij = a.has_arc(i, j);
            const bool a_ji = a.has_arc(j, i);
            const bool b_ij = b.has_arc(i, j);
            const bool b_ji = b.has_arc(j, i);
            const bool in_a = a_ij || a_ji;
            const bool in_b = b_ij || b_ji;
            if (in_a != in_b) {
                ++distance;
            } else if (in_a && (a_ij != b_ij || a_ji != b_ji)) {
                ++distance;
            }
        }
    }
    return distance;
}

double avg_parents(const Network& net)
{
    if (net.num_variables() == 0) return 0.0;
    return static_cast<double>(net.num_arcs()) / static_cast<double>(net.num_variables());
}

void write_census_csv(std::ostream& out, const FCensus& census)
{
    fmt::memory_buffer buf;
    auto it = std::back_inserter(buf);
    fmt::format_to(it, "layer,node_count,mean_f,mean_parent_set_size\n");
    for (std::size_t l = 0; l < census.per_layer.size(); ++l) {
        const auto& s = census.per_layer[l];
        fmt::format_to(it, "{},{},{:.6f},{:.6f}\n", l, s.node_count, s.mean_f, s.mean_parent_set_size);
    }
    fmt::format_to(it, "# n={} total_nodes={} optimal_score={:.6f} pct_below_optimal={:.6f}\n", census.n,
                   census.total_nodes, census.optimal_score, census.pct_below_optimal);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins)
{
    fmt::memory_buffer buf;
    auto it = std::back_inserter(buf);
    fmt::format_to(it, "bin_lo,bin_hi,count\n");
    for (const auto& b : bins) fmt::format_to(it, "{:.6f},{:.6f},{}\n", b.lo, b.hi, b.count);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace bnsl
