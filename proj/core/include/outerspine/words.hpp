#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "outerspine/errors.hpp"

namespace outerspine {

/// One letter of a word in F_n: a generator index (1-based) and a sign.
///
/// The fixed total order on letters is x_1 < x_1^{-1} < x_2 < x_2^{-1} < ...,
/// realized by code().  Every lexicographic choice in the library (canonical
/// class representatives, the ordered class list W, tie-breaks) uses it.
struct Letter {
    int gen;   // 1..n
    int sign;  // +1 or -1

    Letter inverse() const { return Letter{gen, -sign}; }
    int code() const { return 2 * (gen - 1) + (sign < 0 ? 1 : 0); }
    static Letter from_code(int code) {
        return Letter{code / 2 + 1, code % 2 == 0 ? +1 : -1};
    }

    friend bool operator==(const Letter& a, const Letter& b) {
        return a.gen == b.gen && a.sign == b.sign;
    }
    friend std::strong_ordering operator<=>(const Letter& a, const Letter& b) {
        return a.code() <=> b.code();
    }
};

using Letters = std::vector<Letter>;

/// Freely reduced word in F_n.  Constructors reduce their input, so a Word
/// is reduced by (re)construction and immutable afterwards.
class Word {
public:
    Word() = default;
    explicit Word(Letters letters);

    static Word generator(int gen, int sign = +1) {
        return Word(Letters{Letter{gen, sign}});
    }

    const Letters& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    Word inverse() const;
    Word operator*(const Word& rhs) const;

    /// Largest generator index appearing, 0 for the empty word.
    int max_gen() const;

    /// Length-then-lexicographic order (the library's canonical word order).
    std::strong_ordering operator<=>(const Word& rhs) const;
    bool operator==(const Word& rhs) const { return letters_ == rhs.letters_; }

    /// Compact stable key for hashing/memoization.
    std::string key() const;

private:
    Letters letters_;
};

/// Freely reduces an arbitrary letter sequence.  Idempotent and
/// length-non-increasing.
Word free_reduce(const Letters& raw);
inline Word free_reduce(const Word& w) { return w; }

/// Shortest word conjugate to w: free reduction followed by cancellation of
/// inverse first/last pairs.
Word cyclic_reduce(const Word& w);

/// u w u^{-1}, reduced.
Word conjugate(const Word& u, const Word& w);

bool is_cyclically_reduced(const Word& w);

// ---- conjugacy classes -----------------------------------------------------

/// Conjugacy class of a nontrivial element, identified with its inverse.
///
/// The canonical representative is the minimum, in length-then-lex order,
/// over all cyclic rotations of the cyclically reduced form and of its
/// inverse.  This makes class identity a plain word comparison.
class ConjugacyClass {
public:
    /// Canonicalizes w.  Throws IdentityWord if w reduces to the identity.
    explicit ConjugacyClass(const Word& w);

    const Word& rep() const { return rep_; }
    std::size_t length() const { return rep_.size(); }

    bool operator==(const ConjugacyClass& rhs) const { return rep_ == rhs.rep_; }
    std::strong_ordering operator<=>(const ConjugacyClass& rhs) const {
        return rep_ <=> rhs.rep_;
    }
    std::string key() const { return rep_.key(); }

private:
    explicit ConjugacyClass(Word canonical, int) : rep_(std::move(canonical)) {}
    Word rep_;
    friend class ClassStream;
};

inline ConjugacyClass canonical_class(const Word& w) { return ConjugacyClass(w); }

/// Enumerates every conjugacy class of F_n exactly once, in the ordered-list
/// order W: non-decreasing cyclically reduced length, lexicographic on
/// canonical representatives within a length.  The first n entries are the
/// classes of x_1, ..., x_n.
class ClassStream {
public:
    /// rank >= 2 required.  max_length bounds the enumeration when present.
    explicit ClassStream(int rank, std::optional<int> max_length = std::nullopt);

    std::optional<ConjugacyClass> next();
    int rank() const { return rank_; }

private:
    bool advance_counter();

    int rank_;
    std::optional<int> max_length_;
    int length_ = 1;
    std::vector<int> digits_;  // letter codes of the current candidate
    bool exhausted_ = false;
};

inline ClassStream enumerate_classes(int rank,
                                     std::optional<int> max_length = std::nullopt) {
    return ClassStream(rank, max_length);
}

/// All classes of length <= max_length, in W order.
std::vector<ConjugacyClass> classes_up_to(int rank, int max_length);

// ---- endomorphism tuples ---------------------------------------------------

/// images[i] is the image of x_{i+1}; applying a tuple substitutes letters.
using WordTuple = std::vector<Word>;

Word apply_endomorphism(const WordTuple& images, const Word& w);
WordTuple compose(const WordTuple& outer, const WordTuple& inner);
WordTuple identity_tuple(int n);
/// x ↦ u x u^{-1} for every generator.
WordTuple inner_tuple(int n, const Word& u);

/// Inverts the endomorphism x_i ↦ images[i-1] up to an inner automorphism:
/// on success the returned tuple psi satisfies images ∘ psi = conjugation by
/// some fixed word.  Returns nullopt when the images do not generate F_n
/// (equivalently, do not define an automorphism).
///
/// Decided constructively: the wedge of circles spelling the images is
/// folded to an immersion while group-element decorations on the edges track
/// how each surviving petal expands in the original images.
std::optional<WordTuple> invert_words(int n, const WordTuple& images);

/// Composition of `factors` random elementary Nielsen automorphisms
/// (transvections, inversions, transpositions).
WordTuple random_automorphism(int n, int factors, std::mt19937_64& rng);

// ---- text syntax -----------------------------------------------------------

/// Word syntax used by the CLI and the JSON schemas: letters a..z denote
/// x_1..x_26 and uppercase letters their inverses, so "abA" is
/// x1 x2 x1^{-1}.  "1" or "" denote the empty word.
Word parse_word(std::string_view text, int rank);
std::string format_word(const Word& w);

}  // namespace outerspine
