#include "outerspine/whitehead.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <unordered_map>

namespace outerspine {

std::vector<int> mask_elements(HalfMask m) {
    std::vector<int> out;
    for (int h = 0; h < 64; ++h) {
        if (mask_has(m, h)) out.push_back(h);
    }
    return out;
}

HalfMask mask_of(const std::vector<int>& halves) {
    HalfMask m = 0;
    for (int h : halves) m |= HalfMask{1} << h;
    return m;
}

long long StarGraph::cross(HalfMask A, HalfMask B) const {
    if (A & B) throw NotDisjoint();
    long long count = 0;
    for (auto [x, y] : turns) {
        if ((mask_has(A, x) && mask_has(B, y)) || (mask_has(A, y) && mask_has(B, x))) {
            ++count;
        }
    }
    return count;
}

StarGraph star_graph(const Rose& rho, const ConjugacyClass& w) {
    static std::mutex mu;
    static std::unordered_map<std::string, StarGraph> cache;
    std::string key = rho.key() + '|' + w.key();
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    Word loop = cyclic_reduce(apply_endomorphism(rho.phi(), w.rep()));
    if (loop.empty()) throw Defect("marking killed a nontrivial class");
    StarGraph sg;
    sg.n = rho.n();
    sg.valence.assign(2 * rho.n(), 0);
    const Letters& ls = loop.letters();
    for (std::size_t i = 0; i < ls.size(); ++i) {
        const Letter& a = ls[i];
        const Letter& b = ls[(i + 1) % ls.size()];
        int x = arrival_half(a);
        int y = departure_half(b);
        sg.turns.emplace_back(std::min(x, y), std::max(x, y));
        ++sg.valence[x];
        ++sg.valence[y];
    }
    std::sort(sg.turns.begin(), sg.turns.end());
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(std::move(key), sg);
    return sg;
}

// ---- ideal edges ---------------------------------------------------------------

bool is_ideal(int n, HalfMask A) {
    A &= full_mask(n);
    for (int i = 0; i < n; ++i) {
        if (mask_has(A, 2 * i) != mask_has(A, 2 * i + 1)) return true;
    }
    return false;
}

bool is_trivial(int n, HalfMask A) {
    A &= full_mask(n);
    HalfMask B = full_mask(n) & ~A;
    auto popcount = [](HalfMask m) { return __builtin_popcountll(m); };
    return popcount(A) == 1 || popcount(B) == 1;
}

IdealEdge::IdealEdge(int n, HalfMask side) : n_(n) {
    side &= full_mask(n);
    if (side == 0 || side == full_mask(n)) throw DegenerateSubset();
    if (!is_ideal(n, side)) throw InputError("partition is not an ideal edge");
    if (is_trivial(n, side)) throw InputError("ideal edge is trivial");
    side_ = mask_has(side, 0) ? side : (full_mask(n) & ~side);
}

bool compatible(const IdealEdge& a, const IdealEdge& b) {
    if (a.n() != b.n()) throw InputError("rank mismatch");
    HalfMask A = a.side(), B = b.side(), full = full_mask(a.n());
    return (A & B) == 0 || (A & ~B & full) == 0 || (~A & B & full) == 0 ||
           (~A & ~B & full) == 0;
}

std::vector<IdealEdge> all_ideal_edges(int n) {
    std::vector<IdealEdge> out;
    HalfMask full = full_mask(n);
    // the canonical side contains half-edge 0
    for (HalfMask side = 1; side <= full; side += 2) {
        if (side == full) continue;
        if (!is_ideal(n, side) || is_trivial(n, side)) continue;
        out.push_back(IdealEdge(n, side));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_ideal_tree(const IdealTree& t) {
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = i + 1; j < t.size(); ++j) {
            if (t[i] == t[j] || !compatible(t[i], t[j])) return false;
        }
    }
    return true;
}

std::vector<IdealTree> all_ideal_trees(int n) {
    std::vector<IdealEdge> edges = all_ideal_edges(n);
    std::vector<IdealTree> out;
    IdealTree current;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        for (std::size_t i = from; i < edges.size(); ++i) {
            bool ok = true;
            for (const IdealEdge& e : current) {
                if (!compatible(e, edges[i])) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            current.push_back(edges[i]);
            out.push_back(current);
            rec(i + 1);
            current.pop_back();
        }
    };
    rec(0);
    std::sort(out.begin(), out.end(), [](const IdealTree& a, const IdealTree& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

// ---- blowup --------------------------------------------------------------------

MarkedGraph blowup(const Rose& rho, const IdealTree& tree) {
    const int n = rho.n();
    for (const IdealEdge& e : tree) {
        if (e.n() != n) throw InputError("rank mismatch");
    }
    if (!is_ideal_tree(tree)) throw IncompatibleEdges();

    // Work with the sides not containing half-edge 0; compatibility makes
    // this family laminar, and its nesting forest is the blown-up tree with
    // the 0-side region at the root.
    const HalfMask full = full_mask(n);
    std::vector<HalfMask> region(tree.size());
    for (std::size_t i = 0; i < tree.size(); ++i) region[i] = full & ~tree[i].side();

    // The regions form a laminar family (they avoid half-edge 0 and the
    // edges are pairwise compatible), so enclosing regions of a given one
    // are totally ordered and the minimal one is the smallest.
    auto popcount = [](HalfMask m) { return __builtin_popcountll(m); };

    // parent[i]: index of the minimal region strictly containing region[i],
    // or -1 for the root region
    std::vector<int> parent(tree.size(), -1);
    for (std::size_t i = 0; i < tree.size(); ++i) {
        for (std::size_t j = 0; j < tree.size(); ++j) {
            if (i == j || (region[i] & ~region[j]) != 0) continue;  // need ⊆
            if (parent[i] < 0 ||
                popcount(region[j]) < popcount(region[static_cast<std::size_t>(parent[i])])) {
                parent[i] = static_cast<int>(j);
            }
        }
    }

    // vertex of each half-edge: the minimal region containing it (vertex
    // id = region index + 1), or the root vertex 0
    auto vertex_of_half = [&](int h) {
        int best = -1;
        for (std::size_t i = 0; i < tree.size(); ++i) {
            if (!mask_has(region[i], h)) continue;
            if (best < 0 ||
                popcount(region[i]) < popcount(region[static_cast<std::size_t>(best)])) {
                best = static_cast<int>(i);
            }
        }
        return best + 1;
    };

    std::vector<std::pair<int, int>> pairs;
    std::map<int, int> vof;
    for (int i = 0; i < n; ++i) {
        pairs.emplace_back(2 * i, 2 * i + 1);
        vof[2 * i] = vertex_of_half(2 * i);
        vof[2 * i + 1] = vertex_of_half(2 * i + 1);
    }
    // tree edge i joins region i (vertex i+1) to its parent region
    for (std::size_t i = 0; i < tree.size(); ++i) {
        int a = 2 * n + 2 * static_cast<int>(i);
        pairs.emplace_back(a, a + 1);
        vof[a] = static_cast<int>(i) + 1;
        vof[a + 1] = parent[i] + 1;
    }
    Graph g(std::move(pairs), std::move(vof));

    // unique reduced path between two vertices through tree edges
    auto tree_walk = [&](int from, int to) {
        std::vector<int> path;  // traversal halves
        if (from == to) return path;
        // parents form a forest rooted at 0; walk both nodes to the root,
        // then splice
        auto chain_to_root = [&](int v) {
            std::vector<int> halves;  // traversals from v upward
            while (v != 0) {
                int i = v - 1;
                halves.push_back(2 * n + 2 * i);  // region side -> parent side
                v = parent[static_cast<std::size_t>(i)] + 1;
            }
            return halves;
        };
        std::vector<int> up_from = chain_to_root(from);
        std::vector<int> up_to = chain_to_root(to);
        // drop the common tail
        while (!up_from.empty() && !up_to.empty() && up_from.back() == up_to.back()) {
            up_from.pop_back();
            up_to.pop_back();
        }
        path = up_from;
        for (auto it = up_to.rbegin(); it != up_to.rend(); ++it) {
            path.push_back(*it + 1);  // downward traversal
        }
        return path;
    };

    const int base = 0;  // the root region holds half-edge 0
    std::vector<std::vector<int>> petals;
    petals.reserve(rho.phi().size());
    for (const Word& w : rho.phi()) {
        std::vector<int> path;
        int at = base;
        for (const Letter& l : w.letters()) {
            int dep = departure_half(l);
            auto walk = tree_walk(at, g.vertex_of(dep));
            path.insert(path.end(), walk.begin(), walk.end());
            path.push_back(dep);
            at = g.vertex_of(bar(dep));
        }
        auto walk = tree_walk(at, base);
        path.insert(path.end(), walk.begin(), walk.end());
        petals.push_back(std::move(path));
    }
    return MarkedGraph(std::move(g), base, std::move(petals));
}

// ---- dot products ----------------------------------------------------------------

LazyVector dot(const Rose& rho, HalfMask A, HalfMask B) {
    HalfMask full = full_mask(rho.n());
    A &= full;
    B &= full;
    if (A & B) throw NotDisjoint();
    Rose r = rho;
    return LazyVector(rho.n(), [r, A, B](const ConjugacyClass& w) {
        return star_graph(r, w).cross(A, B);
    });
}

LazyVector size_of(const Rose& rho, HalfMask A) {
    HalfMask full = full_mask(rho.n());
    A &= full;
    if (A == 0 || A == full) throw DegenerateSubset();
    return dot(rho, A, full & ~A);
}

bool count_identity_check(const Rose& rho, HalfMask A, HalfMask B, int max_len) {
    HalfMask full = full_mask(rho.n());
    A &= full;
    B &= full;
    HalfMask X = A & ~B, Y = B & ~A, Z = A & B, W = full & ~A & ~B;
    (void)Z;
    (void)W;
    for (const ConjugacyClass& w : classes_up_to(rho.n(), max_len)) {
        StarGraph sg = star_graph(rho, w);
        auto cut = [&](HalfMask S) -> long long {
            if (S == 0 || S == full) return 0;  // |∅| and |H| vanish
            return sg.cut(S);
        };
        long long lhs = cut(A) + cut(B);
        long long rhs = cut(A & B) + cut(A | B) + 2 * (X && Y ? sg.cross(X, Y) : 0);
        if (lhs != rhs) return false;
    }
    return true;
}

// ---- reduction --------------------------------------------------------------------

Rose collapse_along(const Rose& rho, const IdealEdge& alpha, int half) {
    if (!alpha.separates_pair(half)) {
        throw InputError("half-edge is not separated by the ideal edge");
    }
    MarkedGraph two_vertex = blowup(rho, {alpha});
    return rose_from_marked(collapse_marked(two_vertex, {petal_edge_id(half)}));
}

LazyVector margin_vector(const Rose& rho, const IdealEdge& alpha, HalfMask side, int half) {
    if (!mask_has(side, half) || mask_has(side, bar(half))) {
        throw InputError("pair is not separated with the half on the given side");
    }
    Rose collapsed = collapse_along(rho, alpha, half);
    Rose r = rho;
    HalfMask full = full_mask(rho.n());
    HalfMask A = side & full;
    int h = half;
    return LazyVector::norm_difference(
        rho, collapsed, [r, A, h, full](const ConjugacyClass& w) {
            StarGraph sg = star_graph(r, w);
            return sg.valence[h] - sg.cross(A, full & ~A);
        });
}

std::vector<ReductivePair> reductive_pairs(const Rose& rho, const IdealEdge& alpha,
                                           int lmax) {
    std::vector<ReductivePair> out;
    for (HalfMask side : {alpha.side(), alpha.other_side()}) {
        for (int h : mask_elements(side)) {
            if (mask_has(side, bar(h))) continue;
            LazyVector margin = margin_vector(rho, alpha, side, h);
            if (margin.compare_to_zero(lmax) == Ordering::Greater) {
                out.push_back(ReductivePair{alpha, side, h, margin.minus(), margin});
            }
        }
    }
    return out;
}

bool is_reductive_edge(const Rose& rho, const IdealEdge& alpha, int lmax) {
    return !reductive_pairs(rho, alpha, lmax).empty();
}

bool is_reductive_tree(const Rose& rho, const IdealTree& t, int lmax) {
    if (t.empty()) return false;
    MarkedGraph blown = blowup(rho, t);
    for (const auto& f : maximal_trees(blown.graph())) {
        Rose candidate = rose_from_marked(collapse_marked(blown, f));
        if (compare_norm(candidate, rho, lmax) == Ordering::Less) return true;
    }
    return false;
}

bool is_strictly_reductive_tree(const Rose& rho, const IdealTree& t, int lmax) {
    if (t.empty()) return false;
    for (const IdealEdge& e : t) {
        if (!is_reductive_edge(rho, e, lmax)) return false;
    }
    return true;
}

Ordering compare_margins(const ReductivePair& a, const ReductivePair& b, int lmax) {
    // margin_a - margin_b = ||b.collapsed|| - ||a.collapsed||
    switch (compare_norm(a.collapsed, b.collapsed, lmax)) {
        case Ordering::Less:
            return Ordering::Greater;
        case Ordering::Greater:
            return Ordering::Less;
        case Ordering::Equal:
            return Ordering::Equal;
    }
    return Ordering::Equal;
}

namespace {

// deterministic tie-break: smaller (edge side, pair side elements, half)
bool canonically_before(const ReductivePair& a, const ReductivePair& b) {
    if (a.edge != b.edge) return a.edge < b.edge;
    if (a.side != b.side) return a.side < b.side;
    return a.half < b.half;
}

}  // namespace

std::vector<ReductivePair> maximal_reductive_pairs(const Rose& rho, int lmax) {
    std::vector<ReductivePair> all;
    for (const IdealEdge& alpha : all_ideal_edges(rho.n())) {
        for (ReductivePair& p : reductive_pairs(rho, alpha, lmax)) {
            all.push_back(std::move(p));
        }
    }
    if (all.empty()) return {};
    std::vector<ReductivePair> best{all.front()};
    for (std::size_t i = 1; i < all.size(); ++i) {
        switch (compare_margins(all[i], best.front(), lmax)) {
            case Ordering::Greater:
                best.clear();
                best.push_back(all[i]);
                break;
            case Ordering::Equal:
                best.push_back(all[i]);
                break;
            case Ordering::Less:
                break;
        }
    }
    std::sort(best.begin(), best.end(), canonically_before);
    return best;
}

std::optional<ReductivePair> max_reductive_edge(const Rose& rho, int lmax) {
    std::vector<ReductivePair> best = maximal_reductive_pairs(rho, lmax);
    if (best.empty()) return std::nullopt;
    return best.front();
}

IdealEdge key_lemma_gamma(const Rose& rho, const IdealEdge& mu, HalfMask M, int m_half,
                          const IdealEdge& alpha, int lmax) {
    const HalfMask full = full_mask(rho.n());
    M &= full;
    if (M != mu.side() && M != mu.other_side()) {
        throw HypothesesViolated("M is not a side of mu");
    }
    if (!mask_has(M, m_half) || mask_has(M, bar(m_half))) {
        throw HypothesesViolated("(M, m) is not a separated pair of mu");
    }
    LazyVector mu_margin = margin_vector(rho, mu, M, m_half);
    if (mu_margin.compare_to_zero(lmax) != Ordering::Greater) {
        throw HypothesesViolated("(M, m) is not a reductive pair");
    }
    ReductivePair mu_pair{mu, M, m_half, mu_margin.minus(), mu_margin};
    auto maxima = maximal_reductive_pairs(rho, lmax);
    if (maxima.empty() ||
        compare_margins(mu_pair, maxima.front(), lmax) != Ordering::Equal) {
        throw HypothesesViolated("(M, m) is not margin-maximal");
    }
    if (!crosses(alpha, mu)) throw HypothesesViolated("alpha does not cross mu");
    if (!is_reductive_edge(rho, alpha, lmax)) {
        throw HypothesesViolated("alpha is not reductive");
    }

    HalfMask A = alpha.side_containing(m_half);
    auto reductive_side = [&](HalfMask S) -> std::optional<IdealEdge> {
        S &= full;
        if (S == 0 || S == full) return std::nullopt;
        if (!is_ideal(rho.n(), S) || is_trivial(rho.n(), S)) return std::nullopt;
        IdealEdge candidate(rho.n(), S);
        if (!is_reductive_edge(rho, candidate, lmax)) return std::nullopt;
        return candidate;
    };
    std::optional<IdealEdge> gamma = reductive_side(A | M);
    if (!gamma) gamma = reductive_side(~A & M);
    if (!gamma) {
        throw ConclusionFailed("neither A∪M nor Ā∩M gives a reductive ideal edge");
    }
    if (!compatible(*gamma, alpha) || !compatible(*gamma, mu)) {
        throw Defect("gamma is not compatible with alpha and mu");
    }
    return *gamma;
}

std::pair<Rose, std::vector<DescentStep>> whitehead_reduce(const Rose& rho, int lmax) {
    Rose current = rho;
    std::vector<DescentStep> steps;
    for (int guard = 0; guard < 100000; ++guard) {
        std::optional<ReductivePair> best = max_reductive_edge(current, lmax);
        if (!best) return {current, steps};
        steps.push_back(DescentStep{best->edge, best->side, best->half, best->collapsed});
        current = best->collapsed;
    }
    throw Defect("descent did not terminate");
}

}  // namespace outerspine
