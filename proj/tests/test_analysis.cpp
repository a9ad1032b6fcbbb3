#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include <bnsl/analysis.hpp>
#include <bnsl/errors.hpp>
#include <bnsl/search.hpp>

#include <random>
#include <sstream>

using namespace bnsl;

namespace {

std::uint64_t binomial(std::size_t n, std::size_t k)
{
    std::uint64_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

Network random_network(std::mt19937_64& rng, std::size_t n)
{
    std::vector<VariableId> perm(n);
    for (VariableId i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    Network net(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (rng() % 3 == 0) net.add_arc(perm[i], perm[j]);
        }
    }
    return net;
}

}  // namespace

TEST_CASE("census matches the subset DP and has binomial layers")
{
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const std::size_t n = 6 + seed;
        const auto d = oracle::network_dataset(seed, n, 2, 500);
        const auto store = PopsStore::from_data(d, 3);
        const auto t = oracle::best_tables(n, 3, [&](VariableId x, VarSet u) {
            return quantize_score(oracle::naive_mdl(d, x, u));
        });
        const auto g = oracle::forward_g(t);
        const double opt = g.back();
        const PatternDatabase pd(store, default_partition(n));
        const auto census = fcost_census(store, pd, opt);
        CHECK(census.total_nodes == (1u << n));
        std::uint64_t total = 0;
        for (std::size_t l = 0; l <= n; ++l) {
            CHECK(census.per_layer[l].node_count == binomial(n, l));
            total += census.per_layer[l].node_count;
        }
        CHECK(total == census.total_nodes);
        for (std::size_t u = 0; u < g.size(); ++u) CHECK(census.g[u] == doctest::Approx(g[u]).epsilon(1e-9));
        CHECK(census.per_layer[0].mean_f == pd.estimate(VarSet{}));
        CHECK(census.per_layer[n].mean_f == doctest::Approx(opt).epsilon(1e-9));
        CHECK(census.per_layer[0].mean_parent_set_size == 0.0);
        CHECK(census.pct_below_optimal >= 0.0);
        CHECK(census.pct_below_optimal < 100.0);

        const auto self = fcost_census(store, pd);
        CHECK(self.optimal_score == census.g.back());
    }
}

TEST_CASE("perfect heuristic leaves no node below the optimum")
{
    const auto d = oracle::network_dataset(3, 9, 2, 1000);
    const auto store = PopsStore::from_data(d, 3);
    const PatternDatabase perfect(store, {store.all_variables()});
    const auto census = fcost_census(store, perfect);
    CHECK(census.pct_below_optimal == 0.0);
}

TEST_CASE("census size gate")
{
    std::vector<std::vector<ParentSetScore>> lists(12, std::vector<ParentSetScore>{{VarSet{}, 1.0}});
    const PopsStore store(lists);
    const ZeroHeuristic zero;
    CHECK_THROWS_AS(fcost_census(store, zero, 12.0, 10), TooManyVariables);
    CHECK_NOTHROW(fcost_census(store, zero, 12.0, 12));
}

TEST_CASE("histogram accounts for every node")
{
    const auto d = oracle::network_dataset(8, 7, 2, 400);
    const auto store = PopsStore::from_data(d, 3);
    const SimpleHeuristic h(store);
    const auto census = fcost_census(store, h);
    const auto bins = f_histogram(census, 400.0, 20);
    REQUIRE(bins.size() == 20);
    std::uint64_t total = 0;
    for (const auto& b : bins) {
        CHECK(b.lo < b.hi);
        total += b.count;
    }
    CHECK(total == census.total_nodes);
    const double max_f = *std::max_element(census.f.begin(), census.f.end());
    CHECK(bins.back().hi == doctest::Approx(max_f / 400.0));
}

TEST_CASE("shd conventions")
{
    Network a(4);
    a.add_arc(0, 1);
    a.add_arc(1, 2);
    a.add_arc(2, 3);
    CHECK(shd(a, a) == 0);
    Network removed = a;
    removed.remove_arc(1, 2);
    CHECK(shd(a, removed) == 1);
    Network reversed = a;
    reversed.remove_arc(1, 2);
    reversed.add_arc(2, 1);
    CHECK(shd(a, reversed) == 1);
    CHECK_THROWS_AS(shd(a, Network(3)), DimensionMismatch);
}

TEST_CASE("shd is a metric on random triples")
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 500; ++trial) {
        const auto a = random_network(rng, 7);
        const auto b = random_network(rng, 7);
        const auto c = random_network(rng, 7);
        CHECK(shd(a, b) == shd(b, a));
        CHECK(shd(a, c) <= shd(a, b) + shd(b, c));
        CHECK((shd(a, b) == 0) == (a == b));
    }
}

TEST_CASE("average parents")
{
    CHECK(avg_parents(Network(5)) == 0.0);
    Network chain(5);
    for (VariableId v = 1; v < 5; ++v) chain.add_arc(v - 1, v);
    CHECK(avg_parents(chain) == doctest::Approx(4.0 / 5.0));
    Network full(4);
    for (VariableId i = 0; i < 4; ++i) {
        for (VariableId j = i + 1; j < 4; ++j) full.add_arc(i, j);
    }
    CHECK(avg_parents(full) == 1.5);
}

TEST_CASE("census and histogram CSV layout")
{
    FCensus c;
    c.n = 1;
    c.total_nodes = 2;
    c.optimal_score = 3.0;
    c.pct_below_optimal = 50.0;
    c.per_layer = {{1, 2.5, 0.0}, {1, 3.0, 0.0}};
    std::ostringstream out;
    write_census_csv(out, c);
    CHECK(out.str() ==
          "layer,node_count,mean_f,mean_parent_set_size\n"
          "0,1,2.500000,0.000000\n"
          "1,1,3.000000,0.000000\n"
          "# n=1 total_nodes=2 optimal_score=3.000000 pct_below_optimal=50.000000\n");
    std::ostringstream hist;
    write_histogram_csv(hist, {{0.0, 0.5, 4}});
    CHECK(hist.str() == "bin_lo,bin_hi,count\n0.000000,0.500000,4\n");
}
