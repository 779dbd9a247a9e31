#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "outerspine/graph.hpp"
#include "outerspine/options.hpp"
#include "outerspine/words.hpp"

namespace outerspine {

class Rose;

/// A core connected graph with a marking: for each generator x_i a closed
/// edge path (sequence of directed traversals, each named by its departure
/// half-edge) based at `basepoint`.  Construction verifies that the marking
/// is a homotopy equivalence by collapsing a maximal tree and inverting the
/// resulting petal words.
class MarkedGraph {
public:
    MarkedGraph(Graph graph, int basepoint, std::vector<std::vector<int>> petals);

    const Graph& graph() const { return graph_; }
    int basepoint() const { return basepoint_; }
    const std::vector<std::vector<int>>& petals() const { return petals_; }
    int n() const { return static_cast<int>(petals_.size()); }

private:
    Graph graph_;
    int basepoint_;
    std::vector<std::vector<int>> petals_;  // reduced closed paths
};

/// A marked rose, stored as the words spelled by the marking on the petals
/// of the standard rose: petal i of the target rose is edge {2(i-1),
/// 2(i-1)+1} and the image of x_i spells phi()[i-1].  Valid only when those
/// words define an automorphism of F_n; construction certifies this by
/// folding (see invert_words) and throws NotInvertible otherwise.
///
/// Value type with shared internal caches; safe to copy and to query
/// concurrently.
class Rose {
public:
    explicit Rose(WordTuple phi);
    static Rose standard(int n);

    int n() const;
    const WordTuple& phi() const;
    /// A representative of the inverse automorphism (determined up to
    /// composition with an inner automorphism).
    const WordTuple& psi() const;

    /// The same marking presented as a one-vertex MarkedGraph on
    /// Graph::rose(n).
    MarkedGraph as_marked() const;

    std::string key() const;

    bool same_words(const Rose& rhs) const { return key() == rhs.key(); }

private:
    struct Data;
    std::shared_ptr<const Data> data_;
    friend long long translation_length(const Rose&, const ConjugacyClass&);
};

enum class Ordering { Less, Equal, Greater };

/// An element of the ordered abelian group Z^W presented coordinate by
/// coordinate in W order.  Comparison against zero streams coordinates
/// lexicographically; a vector tagged as a difference of two rose norms can
/// decide equality exactly (distinct roses must differ at some coordinate),
/// while a raw vector can only be compared up to the configured cutoff.
class LazyVector {
public:
    using CoordFn = std::function<long long(const ConjugacyClass&)>;

    LazyVector(int rank, CoordFn coord);
    static LazyVector norm_difference(Rose plus, Rose minus, CoordFn coord);

    int rank() const { return rank_; }
    long long at(const ConjugacyClass& w) const;  // memoized, thread-safe

    bool is_norm_difference() const { return static_cast<bool>(tag_); }
    const Rose& plus() const { return tag_->first; }
    const Rose& minus() const { return tag_->second; }

    /// Lexicographic sign.  Throws UndeterminedComparison when streaming
    /// exhausts classes of length <= lmax without a decision (raw vectors
    /// cannot certify equality at all).
    Ordering compare_to_zero(int lmax = default_lmax()) const;

private:
    int rank_;
    CoordFn coord_;
    std::shared_ptr<std::pair<Rose, Rose>> tag_;
    struct Memo;
    std::shared_ptr<Memo> memo_;
};

/// Translation lengths of the finitely many classes that pin down a rose:
/// in the basis u_1..u_n adapted to a source rose, the classes of u_i,
/// u_i^2, u_i u_j and u_i u_j^{-1} (i < j) — n + n^2 classes in all.
class Fingerprint {
public:
    Fingerprint(int n, std::vector<long long> values);
    static Fingerprint standard(int n);
    int n() const { return n_; }
    const std::vector<long long>& values() const { return values_; }
    bool operator==(const Fingerprint&) const = default;

    /// The words whose classes a fingerprint measures, in storage order,
    /// written in the basis u_i = basis[i-1].
    static std::vector<Word> label_words(const WordTuple& basis);

private:
    int n_;
    std::vector<long long> values_;
};

// ---- operations -------------------------------------------------------------

/// Cyclically reduced edge loop freely homotopic to the marking image of w:
/// petal paths concatenated per letter, reduced, then cyclically reduced.
/// The result is locally injective as a cyclic edge sequence.
std::vector<int> tight_loop(const MarkedGraph& m, const ConjugacyClass& w);

long long translation_length(const MarkedGraph& m, const ConjugacyClass& w);
/// For roses this is the cyclically reduced length of phi(w); memoized.
long long translation_length(const Rose& rho, const ConjugacyClass& w);

/// The full norm vector: coordinate at w is the translation length.
LazyVector norm(const Rose& rho);

/// Translation lengths in rho of the length-<=2 classes of the basis adapted
/// to basis_source.
Fingerprint fingerprint(const Rose& rho, const Rose& basis_source);

/// Whether two roses are the same vertex of the spine.  Decided exactly by
/// comparing fingerprint(rho2, rho1) with the standard fingerprint.
bool roses_equal(const Rose& rho1, const Rose& rho2);

/// Lexicographic comparison of norms; Equal exactly on roses_equal pairs,
/// otherwise decided at the first differing coordinate in W order.
Ordering compare_norm(const Rose& rho1, const Rose& rho2, int lmax = default_lmax());

/// Pushes the marking through a forest collapse.  Throws NotAForest.
MarkedGraph collapse_marked(const MarkedGraph& m, const std::vector<int>& forest_edges);

/// Coordinate at w counts traversals of the edge (either direction) in
/// tight_loop(m, w).
LazyVector edge_crossings(const MarkedGraph& m, int edge_id);

/// Reads a one-vertex marked graph as a Rose: petals ordered by edge id,
/// oriented by their smaller half-edge.
Rose rose_from_marked(const MarkedGraph& m);

/// Same spine vertex: the marking composed with conjugation by u.
Rose compose_inner(const Rose& rho, const Word& u);

/// Same spine vertex: an isometry of the target rose.  perm maps petal i
/// (1-based index i-1) to petal perm[i-1], signs[i-1] = ±1 inverts it.
Rose permute_petals(const Rose& rho, const std::vector<int>& perm,
                    const std::vector<int>& signs);

/// Graph isomorphism plus equal translation lengths on all classes of length
/// <= max_len: the bounded certificate used when comparing spine points.
bool marked_equivalent_bounded(const MarkedGraph& a, const MarkedGraph& b, int max_len = 4);

}  // namespace outerspine
