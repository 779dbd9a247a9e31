#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "outerspine/marked.hpp"

namespace outerspine {

/// A graph morphism onto a rose target: vertices to the vertex, edges to
/// single edges or (degenerate edges) to the vertex.  Sources may have
/// bivalent vertices; the spine point it represents is recovered by
/// ignoring them.  Morphisms produced by subdivided_inverse_morphism carry
/// the in-progress marking of the source, which apply_fold transports.
class GraphMorphism {
public:
    /// half_image maps each source half-edge to a target half-edge, or to -1
    /// for a degenerate edge.  Must respect the involutions.
    GraphMorphism(Graph source, Graph target, std::map<int, int> half_image);
    GraphMorphism(Graph source, Graph target, std::map<int, int> half_image,
                  int marking_base, std::vector<std::vector<int>> marking_petals);

    const Graph& source() const { return source_; }
    const Graph& target() const { return target_; }
    int half_image(int h) const { return half_image_.at(h); }
    bool degenerate(int h) const { return half_image_.at(h) < 0; }
    /// Rose targets have a unique vertex.
    int vertex_image(int) const { return target_.vertices().front(); }

    bool has_marking() const { return marking_base_ >= 0; }
    int marking_base() const { return marking_base_; }
    const std::vector<std::vector<int>>& marking_petals() const { return marking_petals_; }

private:
    Graph source_;
    Graph target_;
    std::map<int, int> half_image_;
    int marking_base_ = -1;
    std::vector<std::vector<int>> marking_petals_;
};

struct DegenerateEdge {
    int edge_id;
};
/// Two distinct half-edges departing a common vertex with the same image.
struct FoldablePair {
    int h1;
    int h2;
};
using FoldWitness = std::variant<std::monostate, DegenerateEdge, FoldablePair>;

/// Monostate iff the morphism is locally injective; otherwise the
/// deterministic witness with smallest identifiers (degenerate edges first).
FoldWitness local_injectivity_witness(const GraphMorphism& m);

/// Every foldable pair, for randomized fold-order experiments.
std::vector<FoldablePair> foldable_pairs(const GraphMorphism& m);

enum class FoldKind { Fold, CollapseDegenerate, CollapseUnivalent };

/// How one fold acts on the spine: the spine of the blow-up graph sits
/// between the old and new spine points, collapsing onto each along the
/// recorded spine forests.  An empty forest means that side of the move does
/// not change the spine point.
struct KnEffect {
    std::optional<MarkedGraph> mid;  // spine of the blow-up; absent for degenerate collapses
    std::vector<int> forest_to_prev;
    std::vector<int> forest_to_next;
    bool loop_shaped = false;  // one of the folded edges was a loop
};

struct FoldMove {
    FoldKind kind;
    int h1 = -1;
    int h2 = -1;
    int edge = -1;  // for CollapseDegenerate
    std::vector<int> univalent_collapsed;
    std::optional<KnEffect> kn;
};

enum class CollapseDir { LeftToRight, RightToLeft };

/// One edge of the spine path: the entry on the `dir` side is the larger
/// graph and collapses onto its neighbor along `forest` (edge ids in the
/// larger graph).
struct KnStep {
    CollapseDir dir;
    std::vector<int> forest;
};

/// A path in the 1-skeleton of the spine: marked graphs with, between
/// consecutive entries, the direction and forest of the collapse relating
/// them.
class KnPath {
public:
    KnPath() = default;
    KnPath(std::vector<MarkedGraph> entries, std::vector<KnStep> steps);

    const std::vector<MarkedGraph>& entries() const { return entries_; }
    const std::vector<KnStep>& steps() const { return steps_; }
    std::size_t length() const { return steps_.size(); }

    void start(MarkedGraph first);
    void extend(KnStep step, MarkedGraph entry);
    void replace_last(MarkedGraph entry);

private:
    std::vector<MarkedGraph> entries_;
    std::vector<KnStep> steps_;
};

KnPath reversed(const KnPath& p);

/// A graph morphism representing a homotopy inverse of the rose's marking:
/// the rose with petal i subdivided into |psi(x_i)| edges spelling psi(x_i)
/// in the target, carrying the rose's own marking.
GraphMorphism subdivided_inverse_morphism(const Rose& rho);

/// Applies one fold (or degenerate-edge collapse) to the morphism, including
/// any forced univalent-vertex collapses, and reports the move together with
/// its effect on the spine.  Throws InvalidWitness for witnesses that do not
/// match the morphism.
std::pair<GraphMorphism, FoldMove> apply_fold(const GraphMorphism& m, const FoldWitness& w);

struct FoldToRoseResult {
    KnPath path;
    std::vector<FoldMove> moves;
};

/// Folds the subdivided inverse morphism of rho until locally injective,
/// assembling the induced spine path.  The path starts at rho and ends at
/// the standard rose; each fold contributes at most one blow-up/collapse
/// pair of spine edges.  Terminates because every move removes an edge.
FoldToRoseResult fold_to_rose_detailed(const Rose& rho);
KnPath fold_to_rose(const Rose& rho);

/// Checks that consecutive entries differ by the recorded forest collapse:
/// the collapse is reconstructed and compared with the stored entry up to
/// isomorphism and translation lengths of classes up to length 4.
bool verify_kn_path(const KnPath& p);

}  // namespace outerspine
