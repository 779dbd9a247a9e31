#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "outerspine/errors.hpp"

namespace outerspine {

/// Undirected edge of a half-edge graph: the involution orbit {a, b} with
/// a < b.  Edges are named by their smaller half-edge id.
struct Edge {
    int a;
    int b;
    int id() const { return a; }
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge& x, const Edge& y) { return x.a <=> y.a; }
};

/// Finite combinatorial graph presented by half-edges: a fixed-point-free
/// involution pairing each half-edge with its reverse, and a vertex map.
/// Half-edge and vertex ids are stable small integers, not necessarily
/// dense; quotients keep the surviving ids.
///
/// A directed edge traversal is represented by its departure half-edge h:
/// it runs from vertex_of(h) to vertex_of(partner(h)).  An edge path is a
/// sequence of such traversals with matching endpoints.
class Graph {
public:
    Graph() = default;
    /// Validates the involution (no fixed points, order two) and that every
    /// vertex has at least one incident half-edge.
    Graph(std::vector<std::pair<int, int>> pairs, std::map<int, int> vertex_of);

    /// Rose with n petals: half-edges 0..2n-1 at a single vertex 0, petal i
    /// paired as {2(i-1), 2(i-1)+1}.  Traversing petal i forward departs on
    /// the even half-edge.
    static Graph rose(int n);

    const std::vector<int>& half_edges() const { return halves_; }
    const std::vector<int>& vertices() const { return vertices_; }
    bool has_half(int h) const { return partner_.count(h) > 0; }
    int partner(int h) const { return partner_.at(h); }
    int vertex_of(int h) const { return vertex_of_.at(h); }

    Edge edge_of(int h) const {
        int p = partner(h);
        return h < p ? Edge{h, p} : Edge{p, h};
    }
    std::vector<Edge> edges() const;
    std::optional<Edge> find_edge(int edge_id) const;

    std::vector<int> halves_at(int v) const;  // ascending
    int valence(int v) const;
    bool is_loop(const Edge& e) const { return vertex_of(e.a) == vertex_of(e.b); }

    std::size_t num_edges() const { return halves_.size() / 2; }
    std::size_t num_vertices() const { return vertices_.size(); }
    bool connected() const;

    bool operator==(const Graph& rhs) const {
        return partner_ == rhs.partner_ && vertex_of_ == rhs.vertex_of_;
    }

private:
    std::vector<int> halves_;    // sorted
    std::vector<int> vertices_;  // sorted
    std::map<int, int> partner_;
    std::map<int, int> vertex_of_;
};

/// First Betti number |E| - |V| + 1.  Throws Disconnected.
int rank(const Graph& g);

/// Connected with every vertex of valence at least 3.
bool is_core(const Graph& g);

/// The bridges of g, i.e. edges whose removal disconnects it.  Empty exactly
/// when every edge lies on a cycle.  Throws Disconnected.
std::vector<Edge> separating_edges(const Graph& g);

bool is_forest(const Graph& g, const std::vector<int>& edge_ids);

struct CollapseResult {
    Graph quotient;
    /// original edge id -> quotient edge id, defined on non-collapsed edges
    std::map<int, int> edge_image;
    /// original vertex -> quotient vertex (the smallest id in its tree)
    std::map<int, int> vertex_image;
};

/// Collapses each tree of the forest to a point.  Surviving half-edges keep
/// their ids.  Throws NotAForest.
CollapseResult collapse_forest(const Graph& g, const std::vector<int>& forest_edges);

/// All spanning trees, each as a sorted list of edge ids.  Throws
/// Disconnected.
std::vector<std::vector<int>> maximal_trees(const Graph& g);

/// Signed tree-replacement matrix: entry (i, j) is ±1 when the unique path
/// in the tree F between the endpoints of the j-th edge of Phi crosses the
/// i-th edge of F (sign by orientation), else 0.  Rows and columns follow
/// the given edge orders.
std::vector<std::vector<int>> tree_replacement_matrix(const Graph& g,
                                                      const std::vector<int>& phi_edges,
                                                      const std::vector<int>& f_edges);

/// For maximal trees Phi = (α_1..α_k) and F = (e_1..e_k), a permutation σ
/// with σ(i) = i whenever α_i = e_i is a common edge, and such that e_{σ(i)}
/// connects the two components of Phi − α_i for every i.  The permutation is
/// located among the nonzero terms of det of the tree-replacement matrix and
/// checked directly.  Throws NoMatching if no verified matching exists
/// (guaranteed not to happen for maximal-tree inputs).
std::vector<int> tree_replacement_permutation(const Graph& g,
                                              const std::vector<int>& phi_edges,
                                              const std::vector<int>& f_edges);

/// Exact graph isomorphism by backtracking on half-edges; intended for the
/// small graphs this library works with.
bool graph_isomorphic(const Graph& a, const Graph& b);

}  // namespace outerspine
