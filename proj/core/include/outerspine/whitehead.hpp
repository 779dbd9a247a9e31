#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "outerspine/marked.hpp"

namespace outerspine {

/// Subsets of the half-edge set H of a rank-n rose as bitmasks over the
/// half-edge ids 0..2n-1.  Half-edge 2(i-1) departs petal i forward and
/// 2(i-1)+1 is its reverse.
using HalfMask = std::uint64_t;

inline HalfMask full_mask(int n) { return (HalfMask{1} << (2 * n)) - 1; }
inline bool mask_has(HalfMask m, int h) { return (m >> h) & 1; }
inline int bar(int h) { return h ^ 1; }
inline int petal_edge_id(int h) { return h & ~1; }
std::vector<int> mask_elements(HalfMask m);
HalfMask mask_of(const std::vector<int>& halves);

inline int departure_half(const Letter& l) {
    return 2 * (l.gen - 1) + (l.sign > 0 ? 0 : 1);
}
inline int arrival_half(const Letter& l) { return bar(departure_half(l)); }

/// Star graph of a conjugacy class at a rose: one vertex per half-edge, one
/// edge per turn of the tight loop representing the class.  The number of
/// edges equals the translation length and the valence of each half-edge
/// equals the number of crossings of its petal.
struct StarGraph {
    int n = 0;
    std::vector<std::pair<int, int>> turns;  // normalized (min, max)
    std::vector<long long> valence;          // per half-edge id

    long long edge_count() const { return static_cast<long long>(turns.size()); }
    /// Edges with one endpoint in A and the other in B (A, B disjoint).
    long long cross(HalfMask A, HalfMask B) const;
    /// Edges separated by the partition {A, H - A}.
    long long cut(HalfMask A) const { return cross(A, full_mask(n) & ~A); }
};

/// Memoized per (rose, class).
StarGraph star_graph(const Rose& rho, const ConjugacyClass& w);

// ---- ideal edges -------------------------------------------------------------

/// Whether the partition {A, H - A} separates some pair {h, h-bar}.
bool is_ideal(int n, HalfMask A);
/// Whether a side is a singleton.
bool is_trivial(int n, HalfMask A);

/// A nontrivial ideal edge: a partition of H separating some petal's pair of
/// half-edges, with neither side a singleton.  The stored side is the one
/// containing half-edge 0.
class IdealEdge {
public:
    IdealEdge(int n, HalfMask side);

    int n() const { return n_; }
    HalfMask side() const { return side_; }
    HalfMask other_side() const { return full_mask(n_) & ~side_; }
    HalfMask side_containing(int h) const {
        return mask_has(side_, h) ? side_ : other_side();
    }
    bool separates_pair(int h) const {
        return mask_has(side_, h) != mask_has(side_, bar(h));
    }

    bool operator==(const IdealEdge& rhs) const {
        return n_ == rhs.n_ && side_ == rhs.side_;
    }
    std::strong_ordering operator<=>(const IdealEdge& rhs) const {
        if (auto c = n_ <=> rhs.n_; c != 0) return c;
        return side_ <=> rhs.side_;
    }

private:
    int n_;
    HalfMask side_;
};

/// Compatible: some choice of sides is disjoint.  Crossing edges are the
/// incompatible pairs (all four sector intersections nonempty).
bool compatible(const IdealEdge& a, const IdealEdge& b);
inline bool crosses(const IdealEdge& a, const IdealEdge& b) { return !compatible(a, b); }

std::vector<IdealEdge> all_ideal_edges(int n);

/// A set of pairwise compatible nontrivial ideal edges, kept sorted.
using IdealTree = std::vector<IdealEdge>;
bool is_ideal_tree(const IdealTree& t);
/// All nonempty ideal trees.
std::vector<IdealTree> all_ideal_trees(int n);

/// The marked graph in the star of rho encoded by an ideal tree: one vertex
/// per tree region, the reconstructed tree edges (fresh ids 2n, 2n+1, ...
/// in tree order) plus the petal edges reattached by side membership.
/// Collapsing the tree edges recovers rho.  Throws IncompatibleEdges.
MarkedGraph blowup(const Rose& rho, const IdealTree& tree);

// ---- dot products --------------------------------------------------------------

/// Coordinate at w counts star-graph edges with one vertex in A and one in
/// B.  Symmetric and additive over disjoint unions.  Throws NotDisjoint.
LazyVector dot(const Rose& rho, HalfMask A, HalfMask B);

/// |A| = A . (H - A); for a side of an ideal edge this equals the crossing
/// vector of the blown-up edge.  Throws DegenerateSubset.
LazyVector size_of(const Rose& rho, HalfMask A);

/// Verifies |A| + |B| = |A∩B| + |A∪B| + 2 (A∩B̄).(B∩Ā) coordinate-wise on
/// all classes of length <= max_len.
bool count_identity_check(const Rose& rho, HalfMask A, HalfMask B, int max_len);

// ---- reduction ---------------------------------------------------------------

/// A reductive pair (side, half): the half lies on `side`, its reverse does
/// not, and |half| - |side| is lexicographically positive — equivalently the
/// two-vertex graph of the edge collapses onto a strictly smaller rose,
/// which is stored.
struct ReductivePair {
    IdealEdge edge;
    HalfMask side;
    int half;
    Rose collapsed;
    LazyVector margin;
};

/// The rose adjacent to rho across the two-vertex graph of alpha, reached by
/// collapsing the petal edge of `half` instead of the blown-up edge.
Rose collapse_along(const Rose& rho, const IdealEdge& alpha, int half);

/// The margin vector |half| - |side| with its norm-difference provenance.
LazyVector margin_vector(const Rose& rho, const IdealEdge& alpha, HalfMask side, int half);

std::vector<ReductivePair> reductive_pairs(const Rose& rho, const IdealEdge& alpha,
                                           int lmax = default_lmax());

bool is_reductive_edge(const Rose& rho, const IdealEdge& alpha, int lmax = default_lmax());
/// Some maximal tree of the blowup collapses to a strictly smaller rose.
bool is_reductive_tree(const Rose& rho, const IdealTree& t, int lmax = default_lmax());
/// Every member edge is reductive.
bool is_strictly_reductive_tree(const Rose& rho, const IdealTree& t,
                                int lmax = default_lmax());

/// Ordering of the margins of two reductive pairs (decided through the
/// norms of the collapsed roses).
Ordering compare_margins(const ReductivePair& a, const ReductivePair& b,
                         int lmax = default_lmax());

/// A reductive pair of maximal margin, ties broken by the canonical
/// encoding of (edge, side, half); nullopt when no reductive edge exists.
std::optional<ReductivePair> max_reductive_edge(const Rose& rho, int lmax = default_lmax());
/// Every margin maximizer, in canonical order.
std::vector<ReductivePair> maximal_reductive_pairs(const Rose& rho,
                                                   int lmax = default_lmax());

/// Given a maximally reductive edge mu with maximal pair (M, m) and a
/// reductive edge alpha crossing mu, returns a reductive ideal edge gamma
/// with side A∪M or Ā∩M, where A is the side of alpha containing m; prefers
/// A∪M when both qualify.  Throws HypothesesViolated on bad inputs and
/// ConclusionFailed if neither candidate works (which would falsify the
/// implementation).
IdealEdge key_lemma_gamma(const Rose& rho, const IdealEdge& mu, HalfMask M, int m_half,
                          const IdealEdge& alpha, int lmax = default_lmax());

struct DescentStep {
    IdealEdge edge;
    HalfMask side;
    int half;
    Rose result;
};

/// Repeatedly collapses along a maximal reductive pair until no reductive
/// edge remains.  The trace of strictly smaller roses is returned with the
/// fixed point.
std::pair<Rose, std::vector<DescentStep>> whitehead_reduce(const Rose& rho,
                                                           int lmax = default_lmax());

}  // namespace outerspine
