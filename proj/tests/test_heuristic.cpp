#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include <bnsl/errors.hpp>
#include <bnsl/heuristic.hpp>
#include <bnsl/pops.hpp>

using namespace bnsl;

namespace {

oracle::BestTables tables_for(const PopsStore& store)
{
    return oracle::best_tables(store.num_variables(), store.num_variables(), [&](VariableId x, VarSet u) {
        // the store's own entries are the only scores available; unlisted sets
        // are dominated so the minimum over listed subsets is exact
        double best = std::numeric_limits<double>::infinity();
        for (const auto& e : store.parent_sets(x)) {
            if (e.parents == u) best = e.score;
        }
        return best;
    });
}

}  // namespace

TEST_CASE("simple heuristic base cases")
{
    const auto d = oracle::network_dataset(1, 6, 2, 300);
    const auto store = PopsStore::from_data(d, 3);
    const SimpleHeuristic h(store);
    CHECK(h.estimate(store.all_variables()) == 0.0);
    double expected = 0.0;
    for (VariableId x = 0; x < 6; ++x) expected += store.best_score(x, store.all_variables().without(x)).score;
    CHECK(h.estimate(VarSet{}) == expected);
    CHECK(simple_h(store, VarSet{}) == expected);
}

TEST_CASE("pattern database base cases")
{
    const auto d = oracle::network_dataset(2, 6, 2, 300);
    const auto store = PopsStore::from_data(d, 3);
    Partition singletons;
    for (VariableId v = 0; v < 6; ++v) singletons.push_back(VarSet::single(v));
    const PatternDatabase pd(store, singletons);
    for (VariableId v = 0; v < 6; ++v) {
        CHECK(pd.table_value(v, VarSet{}) == 0.0);
        CHECK(pd.table_value(v, VarSet::single(v)) == store.best_score(v, store.all_variables().without(v)).score);
    }
    CHECK(pd.estimate(store.all_variables()) == 0.0);
}

TEST_CASE("partition validation")
{
    CHECK_NOTHROW(validate_partition(default_partition(7), 7));
    CHECK(default_partition(7).size() == 2);
    CHECK(default_partition(7)[0].size() == 4);
    CHECK_THROWS_AS(validate_partition({VarSet(0b011), VarSet(0b110)}, 3), InvalidPartition);
    CHECK_THROWS_AS(validate_partition({VarSet(0b011)}, 3), InvalidPartition);
    CHECK_THROWS_AS(validate_partition({VarSet(0b011), VarSet{}, VarSet(0b100)}, 3), InvalidPartition);
}

TEST_CASE("admissibility, consistency, and dominance on every node")
{
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const std::size_t n = 6 + seed % 4;
        const auto d = oracle::network_dataset(100 + seed, n, 2 + seed % 2, seed % 2 ? 1000 : 200);
        const auto store = PopsStore::from_data(d, 3);
        const auto t = tables_for(store);
        const auto c = oracle::cost_to_go(t);
        const SimpleHeuristic simple(store);
        const PatternDatabase pd(store, default_partition(n));
        const PatternDatabase perfect(store, {store.all_variables()});
        for (std::uint64_t bits = 0; bits < (1u << n); ++bits) {
            const VarSet u(bits);
            const double hs = simple.estimate(u);
            const double hp = pd.estimate(u);
            CHECK(hs <= c[bits] + 1e-9);
            CHECK(hp <= c[bits] + 1e-9);
            CHECK(hp >= hs - 1e-9);
            CHECK(perfect.estimate(u) == doctest::Approx(c[bits]).epsilon(1e-12));
            CHECK(perfect.table_value(0, store.all_variables() - u) == perfect.estimate(u));
            for (auto x : store.all_variables() - u) {
                const double edge = store.best_score(x, u).score;
                CHECK(hs <= edge + simple.estimate(u.with(x)) + 1e-9);
                CHECK(hp <= edge + pd.estimate(u.with(x)) + 1e-9);
            }
        }
    }
}

TEST_CASE("group larger than the table limit is rejected")
{
    std::vector<std::vector<ParentSetScore>> lists(31, std::vector<ParentSetScore>{{VarSet{}, 1.0}});
    const PopsStore store(lists);
    CHECK_THROWS_AS(PatternDatabase(store, {store.all_variables()}), InvalidPartition);
}
