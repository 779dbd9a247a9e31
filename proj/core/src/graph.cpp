#include "outerspine/graph.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>

namespace outerspine {

Graph::Graph(std::vector<std::pair<int, int>> pairs, std::map<int, int> vertex_of)
    : vertex_of_(std::move(vertex_of)) {
    for (auto [a, b] : pairs) {
        if (a == b) throw InputError("half-edge involution has a fixed point");
        if (partner_.count(a) || partner_.count(b)) {
            throw InputError("half-edge appears in two involution pairs");
        }
        partner_[a] = b;
        partner_[b] = a;
    }
    for (auto [h, p] : partner_) {
        (void)p;
        if (!vertex_of_.count(h)) throw InputError("half-edge has no vertex");
        halves_.push_back(h);
    }
    if (vertex_of_.size() != partner_.size()) {
        throw InputError("vertex map defined on unknown half-edges");
    }
    std::set<int> vs;
    for (auto [h, v] : vertex_of_) {
        (void)h;
        vs.insert(v);
    }
    vertices_.assign(vs.begin(), vs.end());
}

Graph Graph::rose(int n) {
    std::vector<std::pair<int, int>> pairs;
    std::map<int, int> vof;
    for (int i = 0; i < n; ++i) {
        pairs.emplace_back(2 * i, 2 * i + 1);
        vof[2 * i] = 0;
        vof[2 * i + 1] = 0;
    }
    return Graph(std::move(pairs), std::move(vof));
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    for (int h : halves_) {
        int p = partner(h);
        if (h < p) out.push_back(Edge{h, p});
    }
    return out;
}

std::optional<Edge> Graph::find_edge(int edge_id) const {
    if (!has_half(edge_id)) return std::nullopt;
    Edge e = edge_of(edge_id);
    if (e.id() != edge_id) return std::nullopt;
    return e;
}

std::vector<int> Graph::halves_at(int v) const {
    std::vector<int> out;
    for (int h : halves_) {
        if (vertex_of(h) == v) out.push_back(h);
    }
    return out;
}

int Graph::valence(int v) const { return static_cast<int>(halves_at(v).size()); }

bool Graph::connected() const {
    if (vertices_.empty()) return true;
    std::set<int> seen{vertices_.front()};
    std::vector<int> stack{vertices_.front()};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int h : halves_at(v)) {
            int w = vertex_of(partner(h));
            if (seen.insert(w).second) stack.push_back(w);
        }
    }
    return seen.size() == vertices_.size();
}

int rank(const Graph& g) {
    if (!g.connected()) throw Disconnected();
    return static_cast<int>(g.num_edges()) - static_cast<int>(g.num_vertices()) + 1;
}

bool is_core(const Graph& g) {
    if (!g.connected()) return false;
    for (int v : g.vertices()) {
        if (g.valence(v) < 3) return false;
    }
    return true;
}

std::vector<Edge> separating_edges(const Graph& g) {
    if (!g.connected()) throw Disconnected();
    // DFS lowpoint bridge finding on the multigraph; a traversal enters a
    // vertex via a specific half-edge, so parallel edges are handled.
    std::map<int, int> disc, low;
    int timer = 0;
    std::vector<Edge> bridges;
    std::function<void(int, int)> dfs = [&](int v, int entered_via_half) {
        disc[v] = low[v] = timer++;
        for (int h : g.halves_at(v)) {
            if (h == entered_via_half) continue;  // do not reuse the entering traversal
            int w = g.vertex_of(g.partner(h));
            if (!disc.count(w)) {
                dfs(w, g.partner(h));
                low[v] = std::min(low[v], low[w]);
                if (low[w] > disc[v]) bridges.push_back(g.edge_of(h));
            } else {
                low[v] = std::min(low[v], disc[w]);
            }
        }
    };
    dfs(g.vertices().front(), -1);
    std::sort(bridges.begin(), bridges.end());
    return bridges;
}

namespace {

struct UnionFind {
    std::map<int, int> parent;
    int find(int x) {
        if (!parent.count(x)) parent[x] = x;
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    // returns false if already joined
    bool unite(int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra == rb) return false;
        // keep the smaller id as representative
        if (rb < ra) std::swap(ra, rb);
        parent[rb] = ra;
        return true;
    }
};

}  // namespace

bool is_forest(const Graph& g, const std::vector<int>& edge_ids) {
    UnionFind uf;
    for (int id : edge_ids) {
        auto e = g.find_edge(id);
        if (!e) throw InputError("unknown edge id " + std::to_string(id));
        if (!uf.unite(g.vertex_of(e->a), g.vertex_of(e->b))) return false;
    }
    return true;
}

CollapseResult collapse_forest(const Graph& g, const std::vector<int>& forest_edges) {
    UnionFind uf;
    std::set<int> collapsed(forest_edges.begin(), forest_edges.end());
    for (int id : collapsed) {
        auto e = g.find_edge(id);
        if (!e) throw InputError("unknown edge id " + std::to_string(id));
        if (!uf.unite(g.vertex_of(e->a), g.vertex_of(e->b))) throw NotAForest();
    }
    CollapseResult out;
    for (int v : g.vertices()) out.vertex_image[v] = uf.find(v);

    std::vector<std::pair<int, int>> pairs;
    std::map<int, int> vof;
    for (const Edge& e : g.edges()) {
        if (collapsed.count(e.id())) continue;
        pairs.emplace_back(e.a, e.b);
        vof[e.a] = out.vertex_image.at(g.vertex_of(e.a));
        vof[e.b] = out.vertex_image.at(g.vertex_of(e.b));
        out.edge_image[e.id()] = e.id();
    }
    out.quotient = Graph(std::move(pairs), std::move(vof));
    return out;
}

std::vector<std::vector<int>> maximal_trees(const Graph& g) {
    if (!g.connected()) throw Disconnected();
    std::vector<Edge> es = g.edges();
    int k = static_cast<int>(g.num_vertices()) - 1;
    std::vector<std::vector<int>> out;
    std::vector<int> pick;
    std::function<void(int)> rec = [&](int from) {
        if (static_cast<int>(pick.size()) == k) {
            if (is_forest(g, pick)) out.push_back(pick);
            return;
        }
        for (int i = from; i < static_cast<int>(es.size()); ++i) {
            if (g.is_loop(es[i])) continue;
            pick.push_back(es[i].id());
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return out;
}

namespace {

// Unique path between two vertices in the forest spanned by tree_edges,
// as (edge id, +1 forward / -1 backward) steps.  Forward means from
// vertex_of(e.a) to vertex_of(e.b).
std::vector<std::pair<int, int>> tree_path(const Graph& g, const std::vector<int>& tree_edges,
                                           int from, int to) {
    std::map<int, std::pair<int, int>> came;  // vertex -> (edge, dir) used to reach it
    std::vector<int> stack{from};
    came[from] = {-1, 0};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (v == to) break;
        for (int id : tree_edges) {
            Edge e = *g.find_edge(id);
            int va = g.vertex_of(e.a), vb = g.vertex_of(e.b);
            if (va == v && !came.count(vb)) {
                came[vb] = {id, +1};
                stack.push_back(vb);
            } else if (vb == v && !came.count(va)) {
                came[va] = {id, -1};
                stack.push_back(va);
            }
        }
    }
    std::vector<std::pair<int, int>> path;
    if (!came.count(to)) throw InputError("edge set does not span the graph");
    for (int v = to; v != from;) {
        auto [id, dir] = came.at(v);
        path.emplace_back(id, dir);
        Edge e = *g.find_edge(id);
        v = dir > 0 ? g.vertex_of(e.a) : g.vertex_of(e.b);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

void require_maximal_tree(const Graph& g, const std::vector<int>& edges, const char* name) {
    if (static_cast<int>(edges.size()) != static_cast<int>(g.num_vertices()) - 1 ||
        !is_forest(g, edges)) {
        throw InputError(std::string(name) + " is not a maximal tree");
    }
}

// e (an edge id) connects the two components of tree − alpha
bool connects_split_components(const Graph& g, const std::vector<int>& tree, int alpha, int e) {
    std::vector<int> rest;
    for (int id : tree) {
        if (id != alpha) rest.push_back(id);
    }
    Edge ea = *g.find_edge(alpha);
    // component of tail(alpha) in tree − alpha
    std::set<int> comp{g.vertex_of(ea.a)};
    bool grew = true;
    while (grew) {
        grew = false;
        for (int id : rest) {
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

std::vector<std::vector<int>> tree_replacement_matrix(const Graph& g,
                                                      const std::vector<int>& phi_edges,
                                                      const std::vector<int>& f_edges) {
    std::vector<std::vector<int>> m(f_edges.size(), std::vector<int>(phi_edges.size(), 0));
    for (std::size_t j = 0; j < phi_edges.size(); ++j) {
        Edge alpha = *g.find_edge(phi_edges[j]);
        auto path = tree_path(g, f_edges, g.vertex_of(alpha.a), g.vertex_of(alpha.b));
        for (auto [id, dir] : path) {
            auto it = std::find(f_edges.begin(), f_edges.end(), id);
            assert(it != f_edges.end());
            m[it - f_edges.begin()][j] = dir;
        }
    }
    return m;
}

std::vector<int> tree_replacement_permutation(const Graph& g,
                                              const std::vector<int>& phi_edges,
                                              const std::vector<int>& f_edges) {
    require_maximal_tree(g, phi_edges, "phi");
    require_maximal_tree(g, f_edges, "f");
    const int k = static_cast<int>(phi_edges.size());
    if (k != static_cast<int>(f_edges.size())) throw InputError("tree sizes differ");

    std::vector<int> sigma(k, -1);
    std::vector<bool> f_used(k, false);
    std::vector<int> open;  // phi indices still to match
    for (int i = 0; i < k; ++i) {
        auto it = std::find(f_edges.begin(), f_edges.end(), phi_edges[i]);
        if (it != f_edges.end()) {
            int j = static_cast<int>(it - f_edges.begin());
            sigma[i] = j;
            f_used[j] = true;
        } else {
            open.push_back(i);
        }
    }

    // support: nonzero entries of the replacement matrix that also pass the
    // direct component-connection check
    auto matrix = tree_replacement_matrix(g, phi_edges, f_edges);
    std::vector<std::vector<int>> options(open.size());
    for (std::size_t oi = 0; oi < open.size(); ++oi) {
        int i = open[oi];
        for (int j = 0; j < k; ++j) {
            if (f_used[j] || matrix[j][i] == 0) continue;
            if (connects_split_components(g, phi_edges, phi_edges[i], f_edges[j])) {
                options[oi].push_back(j);
            }
        }
    }

    // perfect matching by augmenting paths
    std::vector<int> match_of_f(k, -1);
    std::function<bool(std::size_t, std::vector<bool>&)> augment =
        [&](std::size_t oi, std::vector<bool>& visited) {
            for (int j : options[oi]) {
                if (visited[j]) continue;
                visited[j] = true;
                if (match_of_f[j] < 0 ||
                    augment(static_cast<std::size_t>(match_of_f[j]), visited)) {
                    match_of_f[j] = static_cast<int>(oi);
                    return true;
                }
            }
            return false;
        };
    for (std::size_t oi = 0; oi < open.size(); ++oi) {
        std::vector<bool> visited(k, false);
        if (!augment(oi, visited)) throw NoMatching();
    }
    for (int j = 0; j < k; ++j) {
        if (match_of_f[j] >= 0) sigma[open[static_cast<std::size_t>(match_of_f[j])]] = j;
    }
    for (int i = 0; i < k; ++i) {
        assert(sigma[i] >= 0);
    }
    return sigma;
}

// ---- isomorphism -----------------------------------------------------------

namespace {

struct IsoState {
    const Graph* a;
    const Graph* b;
    std::map<int, int> half_map;     // a-half -> b-half
    std::map<int, int> vertex_map;   // a-vertex -> b-vertex
    std::set<int> used_halves;       // image halves
    std::set<int> used_vertices;     // image vertices

    bool extend(std::size_t idx, const std::vector<int>& order);
};

bool IsoState::extend(std::size_t idx, const std::vector<int>& order) {
    if (idx == order.size()) return true;
    int h = order[idx];
    if (half_map.count(h)) return extend(idx + 1, order);
    int v = a->vertex_of(h);
    int p = a->partner(h);
    for (int h2 : b->half_edges()) {
        if (used_halves.count(h2)) continue;
        int v2 = b->vertex_of(h2);
        if (vertex_map.count(v)) {
            if (vertex_map.at(v) != v2) continue;
        } else {
            if (used_vertices.count(v2)) continue;
            if (a->valence(v) != b->valence(v2)) continue;
        }
        // tentatively map h -> h2 and partner(h) -> partner(h2)
        int p2 = b->partner(h2);
        if (half_map.count(p) || used_halves.count(p2)) continue;
        int pv = a->vertex_of(p);
        int pv2 = b->vertex_of(p2);
        bool fresh_vertex = !vertex_map.count(v);
        bool fresh_pvertex;
        if (vertex_map.count(pv)) {
            if (vertex_map.at(pv) != pv2) continue;
            fresh_pvertex = false;
        } else {
            if ((pv == v) != (pv2 == v2)) continue;
            if (pv != v && (used_vertices.count(pv2) || (fresh_vertex && pv2 == v2)))
                continue;
            if (pv != v && a->valence(pv) != b->valence(pv2)) continue;
            fresh_pvertex = pv != v;
        }
        half_map[h] = h2;
        half_map[p] = p2;
        used_halves.insert(h2);
        used_halves.insert(p2);
        if (fresh_vertex) {
            vertex_map[v] = v2;
            used_vertices.insert(v2);
        }
        if (fresh_pvertex && !vertex_map.count(pv)) {
            vertex_map[pv] = pv2;
            used_vertices.insert(pv2);
        }
        if (extend(idx + 1, order)) return true;
        half_map.erase(h);
        half_map.erase(p);
        used_halves.erase(h2);
        used_halves.erase(p2);
        if (fresh_vertex) {
            vertex_map.erase(v);
            used_vertices.erase(v2);
        }
        if (fresh_pvertex) {
            vertex_map.erase(pv);
            used_vertices.erase(pv2);
        }
    }
    return false;
}

}  // namespace

bool graph_isomorphic(const Graph& a, const Graph& b) {
    if (a.half_edges().size() != b.half_edges().size()) return false;
    if (a.num_vertices() != b.num_vertices()) return false;
    std::vector<int> av, bv;
    for (int v : a.vertices()) av.push_back(a.valence(v));
    for (int v : b.vertices()) bv.push_back(b.valence(v));
    std::sort(av.begin(), av.end());
    std::sort(bv.begin(), bv.end());
    if (av != bv) return false;
    IsoState st{&a, &b, {}, {}, {}, {}};
    return st.extend(0, a.half_edges());
}

}  // namespace outerspine
