#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include <bnsl/dataset.hpp>
#include <bnsl/errors.hpp>
#include <bnsl/network.hpp>
#include <bnsl/var_set.hpp>

#include <algorithm>
#include <random>
#include <sstream>

using namespace bnsl;

TEST_CASE("VarSet set algebra")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        const VarSet a(rng() & 0xFFFF);
        const VarSet b(rng() & 0xFFFF);
        const auto x = static_cast<VariableId>(rng() % 16);
        if (a.is_subset_of(b) && b.is_subset_of(a)) CHECK(a == b);
        if (!a.contains(x)) CHECK(a.with(x).size() == a.size() + 1);
        CHECK((a | b).size() + (a & b).size() == a.size() + b.size());
        CHECK((a - b).is_subset_of(a));
        CHECK(((a - b) & b).empty());
        CHECK(a.with(x).without(x) == a.without(x));
        std::size_t listed = 0;
        for (auto v : a) {
            CHECK(a.contains(v));
            ++listed;
        }
        CHECK(listed == a.size());
    }
}

TEST_CASE("VarSet full and single")
{
    CHECK(VarSet::full(0).empty());
    CHECK(VarSet::full(64).size() == 64);
    CHECK(VarSet::full(5).bits() == 0x1F);
    CHECK(VarSet::single(63).contains(63));
    CHECK(VarSet::single(3).first() == 3);
}

TEST_CASE("topological order")
{
    Network empty(3);
    auto order = topological_order(empty);
    std::sort(order.begin(), order.end());
    CHECK(order == std::vector<VariableId>{0, 1, 2});

    Network chain(3);
    chain.add_arc(0, 1);
    chain.add_arc(1, 2);
    CHECK(topological_order(chain) == std::vector<VariableId>{0, 1, 2});

    Network cyclic(2);
    cyclic.add_arc(0, 1);
    cyclic.add_arc(1, 0);
    CHECK_THROWS_AS(topological_order(cyclic), CyclicStructure);
}

TEST_CASE("topological order respects every arc on random DAGs")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng() % 10;
        std::vector<VariableId> perm(n);
        for (VariableId i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        Network net(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (rng() % 3 == 0) net.add_arc(perm[i], perm[j]);
            }
        }
        const auto order = topological_order(net);
        REQUIRE(order.size() == n);
        std::vector<std::size_t> pos(n);
        for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
        for (VariableId v = 0; v < n; ++v) {
            for (auto p : net.parents(v)) CHECK(pos[p] < pos[v]);
        }
    }
}

TEST_CASE("is_acyclic agrees with a DFS cycle check on all 4-node digraphs")
{
    std::vector<std::pair<VariableId, VariableId>> arcs;
    for (VariableId i = 0; i < 4; ++i) {
        for (VariableId j = 0; j < 4; ++j) {
            if (i != j) arcs.emplace_back(i, j);
        }
    }
    std::uint64_t dags = 0;
    for (std::uint64_t mask = 0; mask < (1u << arcs.size()); ++mask) {
        Network net(4);
        for (std::size_t a = 0; a < arcs.size(); ++a) {
            if ((mask >> a) & 1u) net.add_arc(arcs[a].first, arcs[a].second);
        }
        const bool acyclic = is_acyclic(net);
        CHECK(acyclic == !oracle::has_cycle_dfs(net));
        dags += acyclic;
    }
    CHECK(dags == 543);
    CHECK(oracle::count_dags_bruteforce(3) == 25);
}

TEST_CASE("network rejects malformed arcs")
{
    Network net(3);
    CHECK_THROWS_AS(net.add_arc(1, 1), InvalidStructure);
    CHECK_THROWS_AS(net.add_arc(0, 3), InvalidStructure);
    CHECK_THROWS_AS(net.set_parents(0, VarSet::single(0)), InvalidStructure);
}

TEST_CASE("structure file round trip")
{
    Network net(4);
    net.add_arc(0, 2);
    net.add_arc(1, 2);
    net.add_arc(2, 3);
    std::stringstream s;
    write_structure(s, net);
    CHECK(s.str() == "4\n0 |\n1 |\n2 | 0 1\n3 | 2\n");
    CHECK(read_structure(s) == net);
}

TEST_CASE("load_dataset basics")
{
    std::istringstream in("A,B\n0,1\n1,0\n");
    const auto d = load_dataset(in);
    CHECK(d.num_variables() == 2);
    CHECK(d.num_records() == 2);
    CHECK(d.arities() == std::vector<std::uint32_t>{2, 2});
    CHECK(d.name(1) == "B");
    CHECK(d.at(0, 1) == 1);

    std::istringstream three("A\n0\n2\n1\n");
    CHECK(load_dataset(three).arity(0) == 3);

    std::istringstream bad("A,B\n0,1,1\n");
    CHECK_THROWS_AS(load_dataset(bad), ParseError);

    std::istringstream text("A,B\n0,x\n");
    CHECK_THROWS_AS(load_dataset(text), ParseError);

    std::istringstream header_only("A,B\n");
    CHECK_THROWS_AS(load_dataset(header_only), EmptyDataset);

    std::istringstream crlf("A,B\r\n0,1\r\n\r\n1,1\r\n");
    CHECK(load_dataset(crlf).num_records() == 2);
}

TEST_CASE("constant column still has arity 2")
{
    std::istringstream in("A\n0\n0\n");
    CHECK(load_dataset(in).arity(0) == 2);
}

TEST_CASE("categorical loader maps labels by first appearance")
{
    std::istringstream in("Weather,Play\nsun,yes\nrain,no\nsun,no\nfog,yes\n");
    const auto d = load_categorical_dataset(in);
    CHECK(d.arity(0) == 3);
    CHECK(d.column(0) == std::vector<State>{0, 1, 0, 2});
    CHECK(d.column(1) == std::vector<State>{0, 1, 1, 0});
}

TEST_CASE("dataset write and reload is identity")
{
    std::mt19937_64 rng(3);
    const auto d = oracle::random_dataset(rng, 5, 40, 4);
    std::stringstream s;
    write_dataset(s, d);
    const auto back = load_dataset(s);
    for (VariableId v = 0; v < 5; ++v) CHECK(back.column(v) == d.column(v));
    CHECK(back.names() == d.names());
}

TEST_CASE("dataset constructor checks shapes")
{
    CHECK_THROWS_AS(Dataset({"A", "B"}, {{0, 1}, {0}}), DimensionMismatch);
    CHECK_THROWS_AS(Dataset({"A"}, {{0, 1}, {0, 1}}), DimensionMismatch);
    CHECK_THROWS_AS(Dataset({"A"}, {{}}), EmptyDataset);
    CHECK_THROWS_AS(Dataset({"A"}, {{0, 3}}, {3}), ParseError);
    std::vector<std::string> names(65, "x");
    std::vector<std::vector<State>> cols(65, std::vector<State>{0});
    CHECK_THROWS_AS(Dataset(names, cols), TooManyVariables);
}
