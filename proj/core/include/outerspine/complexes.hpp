#pragma once

#include <optional>
#include <string>
#include <vector>

#include "outerspine/whitehead.hpp"

namespace outerspine {

/// Finite poset over elements 0..size-1 with string labels.  Construction
/// closes the given strict relations transitively and verifies antisymmetry.
class Poset {
public:
    Poset() = default;
    Poset(std::vector<std::string> labels, const std::vector<std::pair<int, int>>& less_pairs);

    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    bool leq(int a, int b) const { return a == b || strict_[a][b]; }
    bool less(int a, int b) const { return strict_[a][b]; }
    /// Covering relation pairs (a, b) with a < b and nothing between.
    std::vector<std::pair<int, int>> covers() const;
    /// Subposet on the given (distinct) element indices, in their order.
    Poset induced(const std::vector<int>& keep) const;

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<bool>> strict_;
};

/// image[i] is the index of f(element i).
struct PosetMap {
    std::vector<int> image;
};

enum class RetractDirection { Decreasing, Increasing };

struct Retraction {
    Poset image;
    std::vector<int> kept;  // original indices of the image elements
};

/// Validates that f is monotone (NotMonotone) and satisfies f(x) <= x for
/// Decreasing or f(x) >= x for Increasing (DirectionViolated), then returns
/// the image subposet, onto which the realization deformation retracts.
Retraction quillen_retract(const Poset& p, const PosetMap& f, RetractDirection dir);

/// All chains of a poset, graded by dimension; chains of k+1 elements are
/// the k-simplices of the order complex.
class OrderComplex {
public:
    static OrderComplex of_poset(const Poset& p, std::size_t max_simplices = 20000,
                                 int max_dimension = 8);

    /// simplices()[k] lists the k-simplices as ascending index vectors.
    const std::vector<std::vector<std::vector<int>>>& simplices() const {
        return simplices_;
    }
    std::size_t total_simplices() const;
    long long euler_characteristic() const;

private:
    std::vector<std::vector<std::vector<int>>> simplices_;
};

/// Betti numbers over the 2-element field, one entry per dimension up to the
/// complex's dimension.  The Euler characteristic of the result is checked
/// against the simplex counts.  Throws TooLarge beyond the size guards.
std::vector<long long> homology_f2(const OrderComplex& c);

std::string ideal_edge_label(const IdealEdge& e);
std::string ideal_tree_label(const IdealTree& t);

/// Poset of all nonempty ideal trees on the rose's half-edge set, ordered by
/// inclusion.  The element payloads are returned through `elements`.
Poset star_poset(const Rose& rho, std::vector<IdealTree>* elements = nullptr);

/// Subposet of reductive ideal trees (the part of the star lying over
/// strictly smaller roses).  Empty exactly when rho admits no reduction.
Poset reductive_subposet(const Rose& rho, std::vector<IdealTree>* elements = nullptr,
                         int lmax = default_lmax());

enum class StepTag { DropNonReductive, AddGamma, DropAlpha, ConeToMu };

struct RetractionStep {
    StepTag tag;
    RetractDirection direction;
    std::vector<std::string> before;  // labels of the poset acted on
    std::vector<int> map;             // index map on `before`
    std::vector<std::string> after;   // labels of the image
    std::string alpha;                // for AddGamma / DropAlpha
    std::string gamma;                // for AddGamma
    std::string mu;                   // for ConeToMu
};

struct RetractionTrace {
    std::vector<RetractionStep> steps;
};

enum class PipelineVerdict { EmptyComplex, Contractible };

struct PipelineResult {
    PipelineVerdict verdict;
    RetractionTrace trace;
    std::vector<IdealTree> reductive_trees;  // elements of the starting poset
    Poset initial;                           // the starting poset itself
};

/// Executes the retraction sequence contracting the reductive part of the
/// star: retract to strictly reductive trees, eliminate the reductive edges
/// crossing the chosen maximal edge mu via key-lemma replacements, then cone
/// onto mu.  Every poset-map hypothesis is validated at runtime; a failure
/// raises PipelineDefect rather than being repaired.
PipelineResult contractibility_pipeline(const Rose& rho, int lmax = default_lmax(),
                                        int iteration_cap = kDefaultPipelineIterationCap);

}  // namespace outerspine
