#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "outerspine/graph.hpp"

using namespace outerspine;

namespace {

// two vertices joined by three arcs
Graph theta() {
    return Graph({{0, 1}, {2, 3}, {4, 5}},
                 {{0, 0}, {1, 1}, {2, 0}, {3, 1}, {4, 0}, {5, 1}});
}

// two loops joined by an arc
Graph barbell() {
    return Graph({{0, 1}, {2, 3}, {4, 5}},
                 {{0, 0}, {1, 0}, {2, 0}, {3, 1}, {4, 1}, {5, 1}});
}

Graph cycle(int k) {
    std::vector<std::pair<int, int>> pairs;
    std::map<int, int> vof;
    for (int i = 0; i < k; ++i) {
        pairs.emplace_back(2 * i, 2 * i + 1);
        vof[2 * i] = i;
        vof[2 * i + 1] = (i + 1) % k;
    }
    return Graph(std::move(pairs), std::move(vof));
}

Graph random_connected_graph(int max_vertices, int max_edges, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nv(1, max_vertices);
    int v = nv(rng);
    std::uniform_int_distribution<int> ne(v, max_edges);  // at least spanning-ish
    int e = std::max(v - 1, ne(rng) - 1) + 1;
    std::vector<std::pair<int, int>> pairs;
    std::map<int, int> vof;
    std::uniform_int_distribution<int> pick(0, v - 1);
    for (int i = 0; i < e; ++i) {
        pairs.emplace_back(2 * i, 2 * i + 1);
        // first v-1 edges form a random spanning tree
        if (i < v - 1) {
            std::uniform_int_distribution<int> lower(0, i);
            vof[2 * i] = lower(rng);
            vof[2 * i + 1] = i + 1;
        } else {
            vof[2 * i] = pick(rng);
            vof[2 * i + 1] = pick(rng);
        }
    }
    return Graph(std::move(pairs), std::move(vof));
}

bool removal_disconnects(const Graph& g, const Edge& e) {
    std::vector<std::pair<int, int>> pairs;
    std::map<int, int> vof;
    for (const Edge& e2 : g.edges()) {
        if (e2.id() == e.id()) continue;
        pairs.emplace_back(e2.a, e2.b);
        vof[e2.a] = g.vertex_of(e2.a);
        vof[e2.b] = g.vertex_of(e2.b);
    }
    // keep the endpoints alive even if isolated: removal disconnects iff the
    // endpoints of e end up in different components
    std::set<int> reach;
    int start = g.vertex_of(e.a);
    std::vector<int> stack{start};
    reach.insert(start);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [h, p] : pairs) {
            int va = vof[h], vb = vof[p];
            if (va == v && !reach.count(vb)) {
                reach.insert(vb);
                stack.push_back(vb);
            }
            if (vb == v && !reach.count(va)) {
                reach.insert(va);
                stack.push_back(va);
            }
        }
    }
    return !reach.count(g.vertex_of(e.b));
}

}  // namespace

TEST_CASE("graph validation") {
    CHECK_THROWS_AS(Graph({{0, 0}}, {{0, 0}}), InputError);           // fixed point
    CHECK_THROWS_AS(Graph({{0, 1}, {1, 2}}, {{0, 0}, {1, 0}, {2, 0}}), InputError);
}

TEST_CASE("rank counts") {
    CHECK(rank(Graph::rose(3)) == 3);
    CHECK(rank(theta()) == 2);
    // a loop at one vertex plus three arcs to another: rank 3
    Graph fig1({{0, 1}, {2, 3}, {4, 5}, {6, 7}},
               {{0, 0}, {1, 0}, {2, 0}, {3, 1}, {4, 0}, {5, 1}, {6, 0}, {7, 1}});
    CHECK(rank(fig1) == 3);
    Graph two_rose_pieces({{0, 1}, {2, 3}}, {{0, 0}, {1, 0}, {2, 1}, {3, 1}});
    CHECK_THROWS_AS(rank(two_rose_pieces), Disconnected);
}

TEST_CASE("core graphs") {
    CHECK(is_core(Graph::rose(2)));
    CHECK(is_core(theta()));
    CHECK(is_core(barbell()));
    CHECK_FALSE(is_core(cycle(3)));  // bivalent vertices
}

TEST_CASE("separating edges are exactly the bridges") {
    CHECK(separating_edges(theta()).empty());
    auto bars = separating_edges(barbell());
    REQUIRE(bars.size() == 1);
    CHECK(bars[0].id() == 2);

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 120; ++trial) {
        Graph g = random_connected_graph(5, 8, rng);
        if (!g.connected()) continue;
        auto bridges = separating_edges(g);
        std::set<int> got;
        for (const Edge& e : bridges) got.insert(e.id());
        std::set<int> expected;
        for (const Edge& e : g.edges()) {
            if (removal_disconnects(g, e)) expected.insert(e.id());
        }
        CHECK(got == expected);
        if (bridges.empty()) {
            // every edge lies on a cycle
            for (const Edge& e : g.edges()) CHECK_FALSE(removal_disconnects(g, e));
        }
    }
}

TEST_CASE("forest collapse") {
    Graph t = theta();
    SUBCASE("empty forest is the identity") {
        CollapseResult c = collapse_forest(t, {});
        CHECK(c.quotient == t);
        for (const Edge& e : t.edges()) CHECK(c.edge_image.at(e.id()) == e.id());
    }
    SUBCASE("collapsing one theta edge gives a two-petal rose") {
        CollapseResult c = collapse_forest(t, {0});
        CHECK(c.quotient.num_vertices() == 1);
        CHECK(c.quotient.num_edges() == 2);
        CHECK(rank(c.quotient) == rank(t));
        CHECK(graph_isomorphic(c.quotient, Graph::rose(2)));
    }
    SUBCASE("cycles are rejected") {
        CHECK_THROWS_AS(collapse_forest(t, {0, 2}), NotAForest);
    }
    SUBCASE("rank and connectivity preserved") {
        std::mt19937_64 rng(37);
        for (int trial = 0; trial < 60; ++trial) {
            Graph g = random_connected_graph(5, 7, rng);
            for (const auto& f : maximal_trees(g)) {
                CollapseResult c = collapse_forest(g, f);
                CHECK(c.quotient.connected());
                CHECK(rank(c.quotient) == rank(g));
                CHECK(c.quotient.num_vertices() == 1);
            }
        }
    }
}

TEST_CASE("blowup then collapse round-trips at the graph level") {
    // the local picture of a fold: pulling two germs off a vertex and
    // collapsing the new edge returns the original graph
    Graph g({{0, 1}, {2, 3}, {4, 5}, {6, 7}},
            {{0, 0}, {1, 1}, {2, 0}, {3, 2}, {4, 1}, {5, 3}, {6, 2}, {7, 4}});
    // blow vertex 0 apart: germs {0, 2} move to a new vertex 9 joined by edge {8, 9}
    Graph blown({{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}},
                {{0, 9}, {1, 1}, {2, 9}, {3, 2}, {4, 1}, {5, 3}, {6, 2}, {7, 4},
                 {8, 0}, {9, 9}});
    CollapseResult c = collapse_forest(blown, {8});
    CHECK(graph_isomorphic(c.quotient, g));
}

TEST_CASE("maximal trees") {
    CHECK(maximal_trees(Graph::rose(3)) == std::vector<std::vector<int>>{{}});
    CHECK(maximal_trees(theta()).size() == 3);
    for (int k : {3, 4, 5}) {
        CHECK(maximal_trees(cycle(k)).size() == static_cast<std::size_t>(k));
    }
}

namespace {

long long int_det(std::vector<std::vector<int>> m) {
    int n = static_cast<int>(m.size());
    std::vector<std::vector<long long>> a(n, std::vector<long long>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = m[i][j];
    }
    long long prev = 1, sign = 1;
    for (int k = 0; k < n; ++k) {
        int pivot = -1;
        for (int r = k; r < n; ++r) {
            if (a[r][k] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) return 0;
        if (pivot != k) {
            std::swap(a[pivot], a[k]);
            sign = -sign;
        }
        for (int r = k + 1; r < n; ++r) {
            for (int c = k + 1; c < n; ++c) {
                a[r][c] = (a[r][c] * a[k][k] - a[r][k] * a[k][c]) / prev;
            }
            a[r][k] = 0;
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

bool connects_components(const Graph& g, const std::vector<int>& phi, int alpha, int e) {
    std::set<int> comp;
    Edge ea = *g.find_edge(alpha);
    comp.insert(g.vertex_of(ea.a));
    bool grew = true;
    while (grew) {
        grew = false;
        for (int id : phi) {
            if (id == alpha) continue;
            Edge e2 = *g.find_edge(id);
            int va = g.vertex_of(e2.a), vb = g.vertex_of(e2.b);
            if (comp.count(va) != comp.count(vb)) {
                comp.insert(va);
                comp.insert(vb);
                grew = true;
            }
        }
    }
    Edge ee = *g.find_edge(e);
    return comp.count(g.vertex_of(ee.a)) != comp.count(g.vertex_of(ee.b));
}

}  // namespace

TEST_CASE("tree replacement permutation") {
    SUBCASE("theta with singleton trees") {
        Graph t = theta();
        auto sigma = tree_replacement_permutation(t, {0}, {2});
        REQUIRE(sigma.size() == 1);
        CHECK(sigma[0] == 0);
        CHECK(connects_components(t, {0}, 0, 2));
    }
    SUBCASE("identical trees give the identity") {
        Graph t = theta();
        auto sigma = tree_replacement_permutation(t, {0}, {0});
        CHECK(sigma == std::vector<int>{0});
    }
    SUBCASE("a forced matching on the complete graph on four vertices") {
        // vertices 0..3; edges 01, 12, 23, 02, 03
        Graph k({{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}},
                {{0, 0}, {1, 1}, {2, 1}, {3, 2}, {4, 2}, {5, 3},
                 {6, 0}, {7, 2}, {8, 0}, {9, 3}});
        std::vector<int> phi{0, 2, 4};  // path 0-1-2-3
        std::vector<int> f{0, 6, 8};    // star at 0
        auto sigma = tree_replacement_permutation(k, phi, f);
        for (std::size_t i = 0; i < phi.size(); ++i) {
            CHECK(connects_components(k, phi, phi[i], f[sigma[i]]));
        }
        // common edge 0 is fixed
        CHECK(sigma[0] == 0);
    }
    SUBCASE("replacement matrix is nonsingular over the rationals") {
        std::mt19937_64 rng(41);
        int tested = 0;
        for (int trial = 0; trial < 40 && tested < 25; ++trial) {
            Graph g = random_connected_graph(4, 6, rng);
            auto trees = maximal_trees(g);
            if (trees.size() < 2) continue;
            for (std::size_t a = 0; a < trees.size() && tested < 25; ++a) {
                for (std::size_t b = 0; b < trees.size() && tested < 25; ++b) {
                    auto m = tree_replacement_matrix(g, trees[a], trees[b]);
                    long long d = int_det(m);
                    CHECK((d == 1 || d == -1));
                    ++tested;
                }
            }
        }
        CHECK(tested > 0);
    }
    SUBCASE("exhaustive verification on small core graphs") {
        std::vector<Graph> graphs{theta(), barbell(), Graph::rose(2)};
        for (const Graph& g : graphs) {
            auto trees = maximal_trees(g);
            for (const auto& phi : trees) {
                for (const auto& f : trees) {
                    auto sigma = tree_replacement_permutation(g, phi, f);
                    std::set<int> hit(sigma.begin(), sigma.end());
                    CHECK(hit.size() == sigma.size());  // bijection
                    for (std::size_t i = 0; i < phi.size(); ++i) {
                        CHECK(connects_components(g, phi, phi[i], f[sigma[i]]));
                        if (std::find(f.begin(), f.end(), phi[i]) != f.end()) {
                            CHECK(f[sigma[i]] == phi[i]);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("graph isomorphism backtracking") {
    CHECK(graph_isomorphic(theta(), theta()));
    CHECK_FALSE(graph_isomorphic(theta(), barbell()));
    CHECK(graph_isomorphic(Graph::rose(3), Graph::rose(3)));
    CHECK_FALSE(graph_isomorphic(Graph::rose(3), Graph::rose(2)));
    // relabeled theta
    Graph t2({{10, 21}, {32, 43}, {54, 65}},
             {{10, 7}, {21, 9}, {32, 7}, {43, 9}, {54, 7}, {65, 9}});
    CHECK(graph_isomorphic(theta(), t2));
}
