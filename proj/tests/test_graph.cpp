#include <doctest.h>

#include <algorithm>
#include <set>

#include "causalkit/casebook.hpp"
#include "causalkit/graph.hpp"
#include "causalkit/rng.hpp"

using namespace causalkit;

namespace {

// Brute-force ordering oracle: filter all permutations by edges and
// constraints.
std::vector<std::vector<int>> orderings_by_enumeration(
    const Dag& dag, const std::vector<std::pair<int, int>>& constraints) {
    std::vector<int> perm;
    for (int v = 0; v < dag.vertex_count(); ++v) perm.push_back(v);
    std::vector<std::vector<int>> out;
    do {
        std::vector<int> position(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) {
            position[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
        }
        bool ok = true;
        for (const auto& [parent, child] : dag.edges()) {
            if (position[static_cast<std::size_t>(parent)] >
                position[static_cast<std::size_t>(child)]) {
                ok = false;
            }
        }
        for (const auto& [before, after] : constraints) {
            if (position[static_cast<std::size_t>(before)] >
                position[static_cast<std::size_t>(after)]) {
                ok = false;
            }
        }
        if (ok) out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("family relations in the five-variable reference graph") {
    const Dag dag = reference_dag_stwxy();  // S=0 T=1 W=2 X=3 Y=4
    const auto rel = dag.relatives(dag.index_of("Y"));
    CHECK(rel.parents == (single(1) | single(2)));
    CHECK(rel.descendants == 0);
    CHECK(rel.nondescendants == (single(0) | single(1) | single(2) | single(3)));
}

TEST_CASE("relatives of an isolated vertex are empty") {
    const Dag dag({"A"});
    const auto rel = dag.relatives(0);
    CHECK(rel.parents == 0);
    CHECK(rel.descendants == 0);
    CHECK(rel.nondescendants == 0);
}

TEST_CASE("descendants follow chains transitively") {
    const Dag dag({"A", "B", "C"}, {{0, 1}, {1, 2}});
    CHECK(dag.descendant_set(0) == (single(1) | single(2)));
    CHECK(dag.nondescendant_set(2) == (single(0) | single(1)));
}

TEST_CASE("unknown vertices are rejected") {
    const Dag dag({"A", "B"});
    CHECK_THROWS_AS(dag.relatives(5), std::invalid_argument);
    CHECK_THROWS_AS((void)dag.index_of("Q"), std::invalid_argument);
}

TEST_CASE("constructor rejects self-loops, cycles and duplicate names") {
    CHECK_THROWS_AS(Dag({"A", "B"}, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Dag({"A", "B", "C"}, {{0, 1}, {1, 2}, {2, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Dag({"A", "A"}), std::invalid_argument);
}

TEST_CASE("randomized cycle insertion is always rejected") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(mix_seed(seed, 0xc7c1e));
        const int n = 3 + static_cast<int>(rng.below(4));
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back("V" + std::to_string(i));
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rng.below(2) == 0) edges.emplace_back(i, j);
            }
        }
        CHECK_NOTHROW(Dag(names, edges));
        // Close a directed cycle through a random forward path.
        const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
        const int b = a + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - a - 1)));
        auto with_cycle = edges;
        with_cycle.emplace_back(a, b);
        with_cycle.emplace_back(b, a);
        CHECK_THROWS_AS(Dag(names, with_cycle), std::invalid_argument);
    }
}

TEST_CASE("three isolated vertices admit all six orderings") {
    const Dag dag({"S", "T", "C"});
    const auto orderings = dag.topological_orderings();
    CHECK(orderings.size() == 6);
    CHECK(orderings == orderings_by_enumeration(dag, {}));
}

TEST_CASE("wing constraints cut twenty-four orderings down to six") {
    const Dag dag({"S", "T", "A", "B"});
    const std::vector<std::pair<int, int>> constraints = {{0, 2}, {1, 3}};
    const auto orderings = dag.topological_orderings(constraints);
    CHECK(orderings.size() == 6);
    CHECK(orderings == orderings_by_enumeration(dag, constraints));
}

TEST_CASE("an edge forces the order") {
    const Dag dag({"A", "B"}, {{0, 1}});
    const auto orderings = dag.topological_orderings();
    REQUIRE(orderings.size() == 1);
    CHECK(orderings.front() == std::vector<int>{0, 1});
}

TEST_CASE("contradictory constraints are an error") {
    const Dag dag({"A", "B"});
    CHECK_THROWS_AS(dag.topological_orderings({{0, 1}, {1, 0}}), std::invalid_argument);
    const Dag chain({"A", "B"}, {{0, 1}});
    CHECK_THROWS_AS(chain.topological_orderings({{1, 0}}), std::invalid_argument);
}

TEST_CASE("the reference graph d-separates Y from S given T") {
    const Dag dag = reference_dag_stwxy();
    CHECK(dag.d_separated(single(4), single(0), single(1)));
    // The colliders at X block the marginal paths too, so (Y indep S) holds
    // outright, while Y and X stay connected through their shared parents.
    CHECK(dag.d_separated(single(4), single(0), 0));
    CHECK_FALSE(dag.d_separated(single(4), single(3), 0));
    CHECK_FALSE(dag.d_separated(single(4), single(0), single(3)));
}

TEST_CASE("conditioning on a collider connects its parents") {
    const Dag dag({"A", "B", "C"}, {{0, 2}, {1, 2}});
    CHECK(dag.d_separated(single(0), single(1), 0));
    CHECK_FALSE(dag.d_separated(single(0), single(1), single(2)));
}

TEST_CASE("conditioning on a collider descendant also connects") {
    const Dag dag({"A", "B", "C", "D"}, {{0, 2}, {1, 2}, {2, 3}});
    CHECK(dag.d_separated(single(0), single(1), 0));
    CHECK_FALSE(dag.d_separated(single(0), single(1), single(3)));
}

TEST_CASE("a fork vertex in the conditioning set blocks") {
    const Dag dag({"A", "B", "C"}, {{2, 0}, {2, 1}});
    CHECK(dag.d_separated(single(0), single(1), single(2)));
    CHECK_FALSE(dag.d_separated(single(0), single(1), 0));
}

TEST_CASE("d-separation rejects overlapping or empty arguments") {
    const Dag dag({"A", "B", "C"});
    CHECK_THROWS_AS(dag.d_separated(single(0), single(0), 0), std::invalid_argument);
    CHECK_THROWS_AS(dag.d_separated(single(0), single(1), single(1)), std::invalid_argument);
    CHECK_THROWS_AS(dag.d_separated(0, single(1), 0), std::invalid_argument);
}

TEST_CASE("set d-separation is symmetric and reduces to singleton pairs") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Dag dag = random_dag({"A", "B", "C", "D", "E"}, mix_seed(seed, 0xd5e9));
        Rng rng(mix_seed(seed, 0x5e75));
        const VarSet all = dag.all_vertices();
        // Random disjoint X, Y, Z.
        VarSet x = 0, y = 0, z = 0;
        for (int v = 0; v < 5; ++v) {
            switch (rng.below(4)) {
                case 0: x |= single(v); break;
                case 1: y |= single(v); break;
                case 2: z |= single(v); break;
                default: break;
            }
        }
        if (x == 0 || y == 0) continue;
        (void)all;
        const bool sets = dag.d_separated(x, y, z);
        CHECK(sets == dag.d_separated(y, x, z));
        bool every_pair = true;
        for (int a : set_indices(x)) {
            for (int b : set_indices(y)) {
                every_pair &= dag.d_separated(single(a), single(b), z);
            }
        }
        CHECK(sets == every_pair);
    }
}

namespace {

// Independent d-separation oracle: restrict to the ancestral set of the
// query, marry parents of common children, and test undirected reachability
// from X to Y avoiding Z in the moralized subgraph.
bool d_separated_by_moralization(const Dag& dag, VarSet x, VarSet y, VarSet z) {
    const int n = dag.vertex_count();
    VarSet ancestral = x | y | z;
    bool grew = true;
    while (grew) {
        grew = false;
        for (int v = 0; v < n; ++v) {
            if (!contains(ancestral, v)) continue;
            const VarSet parents = dag.parent_set(v) & ~ancestral;
            if (parents != 0) {
                ancestral |= parents;
                grew = true;
            }
        }
    }
    std::vector<VarSet> neighbors(static_cast<std::size_t>(n), 0);
    for (int v : set_indices(ancestral)) {
        const VarSet parents = dag.parent_set(v) & ancestral;
        for (int p : set_indices(parents)) {
            neighbors[static_cast<std::size_t>(p)] |= single(v);
            neighbors[static_cast<std::size_t>(v)] |= single(p);
            for (int q : set_indices(parents)) {
                if (p != q) neighbors[static_cast<std::size_t>(p)] |= single(q);
            }
        }
    }
    VarSet reached = x;
    bool expanding = true;
    while (expanding) {
        expanding = false;
        for (int v : set_indices(reached)) {
            const VarSet next = neighbors[static_cast<std::size_t>(v)] & ~reached & ~z;
            if (next != 0) {
                reached |= next;
                expanding = true;
            }
        }
    }
    return (reached & y) == 0;
}

}  // namespace

TEST_CASE("path blocking agrees with the moralization oracle") {
    int queries = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const Dag dag = random_dag({"A", "B", "C", "D", "E", "F"}, mix_seed(seed, 0x304a1));
        const int n = dag.vertex_count();
        // Every (x, y, Z) query over singletons plus a sample of set queries.
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                const VarSet rest = dag.all_vertices() & ~single(a) & ~single(b);
                for (VarSet zset = rest;; zset = (zset - 1) & rest) {
                    CHECK(dag.d_separated(single(a), single(b), zset) ==
                          d_separated_by_moralization(dag, single(a), single(b), zset));
                    ++queries;
                    if (zset == 0) break;
                }
            }
        }
        Rng rng(mix_seed(seed, 0x304a2));
        for (int draw = 0; draw < 10; ++draw) {
            VarSet x = 0, y = 0, zset = 0;
            for (int v = 0; v < n; ++v) {
                switch (rng.below(4)) {
                    case 0: x |= single(v); break;
                    case 1: y |= single(v); break;
                    case 2: zset |= single(v); break;
                    default: break;
                }
            }
            if (x == 0 || y == 0) continue;
            CHECK(dag.d_separated(x, y, zset) == d_separated_by_moralization(dag, x, y, zset));
            ++queries;
        }
    }
    CHECK(queries > 10000);
}

TEST_CASE("v-structures require non-adjacent parents") {
    const Dag collider({"A", "B", "C"}, {{0, 2}, {1, 2}});
    CHECK(collider.v_structures() == std::vector<std::array<int, 3>>{{0, 2, 1}});
    const Dag shielded({"A", "B", "C"}, {{0, 2}, {1, 2}, {0, 1}});
    CHECK(shielded.v_structures().empty());
    const Dag chain({"A", "B", "C"}, {{0, 1}, {1, 2}});
    CHECK(chain.v_structures().empty());
}

TEST_CASE("d-separation CI set of the local-causality structure") {
    const Dag dag({"S", "T", "A", "B", "L"}, {{0, 2}, {1, 3}, {4, 2}, {4, 3}});
    const CISet set = dsep_ci_set(dag, VarSet{0b1111});
    CHECK(set.contains(single(0), single(1), 0));          // (S indep T)
    CHECK(set.contains(single(2), single(1), single(0)));  // (A indep T | S)
    CHECK(set.contains(single(3), single(0), single(1)));  // (B indep S | T)
}

TEST_CASE("d-separation CI set of an edgeless pair") {
    const Dag dag({"A", "B"});
    const CISet set = dsep_ci_set(dag, VarSet{0b11});
    CHECK(set.size() == 1);
    CHECK(set.contains(single(0), single(1), 0));
}

TEST_CASE("a triple common cause leaves no observed independences") {
    const Dag dag({"X", "Y", "Z", "L"}, {{3, 0}, {3, 1}, {3, 2}});
    const CISet set = dsep_ci_set(dag, VarSet{0b111});
    CHECK(set.empty());
}

TEST_CASE("DOT output is deterministic and quotes names") {
    const Dag dag({"A", "B"}, {{0, 1}});
    CHECK(dag.to_dot("g") == "digraph g {\n  \"A\";\n  \"B\";\n  \"A\" -> \"B\";\n}\n");
}
