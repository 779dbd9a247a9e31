#pragma once

#include <stdexcept>
#include <string>

namespace outerspine {

/// Base class for all errors thrown by this library.
///
/// Two broad families matter to callers: `InputError` covers bad arguments
/// and malformed data, while `Defect` covers conditions that should be
/// impossible for valid inputs.  A `Defect` firing means either the
/// implementation or the mathematical argument it encodes is wrong, so it
/// must never be swallowed.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InputError : public Error {
public:
    using Error::Error;
};

class Defect : public Error {
public:
    using Error::Error;
};

// ---- input errors ---------------------------------------------------------

/// A word reduced to the identity where a nontrivial class was required.
class IdentityWord : public InputError {
public:
    IdentityWord() : InputError("word reduces to the identity") {}
};

class Disconnected : public InputError {
public:
    Disconnected() : InputError("graph is not connected") {}
};

class NotAForest : public InputError {
public:
    NotAForest() : InputError("edge set contains a cycle") {}
};

/// Petal data does not define an automorphism of the free group.
class NotInvertible : public InputError {
public:
    NotInvertible() : InputError("petal words do not define an automorphism") {}
};

class InvalidWitness : public InputError {
public:
    explicit InvalidWitness(const std::string& what) : InputError(what) {}
};

class NotDisjoint : public InputError {
public:
    NotDisjoint() : InputError("subsets are not disjoint") {}
};

class DegenerateSubset : public InputError {
public:
    DegenerateSubset() : InputError("subset is empty or all of H") {}
};

class IncompatibleEdges : public InputError {
public:
    IncompatibleEdges() : InputError("ideal edges are not pairwise compatible") {}
};

/// Inputs to the key-lemma step fail its stated hypotheses.
class HypothesesViolated : public InputError {
public:
    explicit HypothesesViolated(const std::string& what) : InputError(what) {}
};

class NotMonotone : public InputError {
public:
    NotMonotone() : InputError("map is not a poset map") {}
};

class DirectionViolated : public InputError {
public:
    DirectionViolated() : InputError("poset map violates the requested direction") {}
};

class TooLarge : public InputError {
public:
    explicit TooLarge(const std::string& what) : InputError(what) {}
};

class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t position)
        : InputError(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// ---- defects ---------------------------------------------------------------

/// A lexicographic comparison hit the configured class-length cutoff before
/// a decision was reached.  For the vectors this library compares a decision
/// is guaranteed to exist, so hitting the cutoff indicates a bug (or an
/// unreasonably small cutoff); we refuse to guess.
class UndeterminedComparison : public Defect {
public:
    explicit UndeterminedComparison(int cutoff)
        : Defect("lexicographic comparison undecided on classes of length <= " +
                 std::to_string(cutoff)) {}
};

/// No valid tree-replacement matching was found.  Guaranteed not to happen
/// for maximal-tree inputs; raised defensively.
class NoMatching : public Defect {
public:
    NoMatching() : Defect("no valid tree replacement matching exists") {}
};

/// The key lemma's conclusion failed on an instance satisfying its
/// hypotheses.  Firing would falsify this implementation.
class ConclusionFailed : public Defect {
public:
    explicit ConclusionFailed(const std::string& what) : Defect(what) {}
};

/// A poset-map hypothesis failed at runtime inside the retraction pipeline.
class PipelineDefect : public Defect {
public:
    explicit PipelineDefect(const std::string& what) : Defect(what) {}
};

}  // namespace outerspine
