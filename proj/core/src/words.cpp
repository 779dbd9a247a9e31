#include "outerspine/words.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace outerspine {

namespace {

Letters reduce_letters(const Letters& raw) {
    Letters out;
    out.reserve(raw.size());
    for (const Letter& l : raw) {
        if (!out.empty() && out.back() == l.inverse()) {
            out.pop_back();
        } else {
            out.push_back(l);
        }
    }
    return out;
}

}  // namespace

Word::Word(Letters letters) : letters_(reduce_letters(letters)) {}

Word Word::inverse() const {
    Letters out;
    out.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
        out.push_back(it->inverse());
    }
    Word w;
    w.letters_ = std::move(out);  // already reduced
    return w;
}

Word Word::operator*(const Word& rhs) const {
    Letters out = letters_;
    out.insert(out.end(), rhs.letters_.begin(), rhs.letters_.end());
    return Word(std::move(out));
}

int Word::max_gen() const {
    int m = 0;
    for (const Letter& l : letters_) m = std::max(m, l.gen);
    return m;
}

std::strong_ordering Word::operator<=>(const Word& rhs) const {
    if (auto c = letters_.size() <=> rhs.letters_.size(); c != 0) return c;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (auto c = letters_[i] <=> rhs.letters_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

std::string Word::key() const {
    std::string k;
    k.reserve(letters_.size());
    for (const Letter& l : letters_) k.push_back(static_cast<char>('0' + l.code()));
    return k;
}

Word free_reduce(const Letters& raw) { return Word(raw); }

Word cyclic_reduce(const Word& w) {
    Letters ls = w.letters();
    std::size_t lo = 0, hi = ls.size();
    while (hi - lo >= 2 && ls[lo] == ls[hi - 1].inverse()) {
        ++lo;
        --hi;
    }
    Word out;
    out = Word(Letters(ls.begin() + lo, ls.begin() + hi));
    return out;
}

Word conjugate(const Word& u, const Word& w) { return u * w * u.inverse(); }

bool is_cyclically_reduced(const Word& w) {
    if (w.size() < 2) return true;
    return w.letters().front() != w.letters().back().inverse();
}

// ---- conjugacy classes -----------------------------------------------------

namespace {

Word rotation(const Word& w, std::size_t k) {
    const Letters& ls = w.letters();
    Letters out;
    out.reserve(ls.size());
    out.insert(out.end(), ls.begin() + k, ls.end());
    out.insert(out.end(), ls.begin(), ls.begin() + k);
    return Word(std::move(out));
}

Word canonical_rep(const Word& w) {
    Word c = cyclic_reduce(w);
    Word best = c;
    Word ci = c.inverse();
    for (std::size_t k = 0; k < c.size(); ++k) {
        Word r = rotation(c, k);
        if (r < best) best = r;
        Word ri = rotation(ci, k);
        if (ri < best) best = ri;
    }
    return best;
}

}  // namespace

ConjugacyClass::ConjugacyClass(const Word& w) : rep_(canonical_rep(w)) {
    if (rep_.empty()) throw IdentityWord();
}

// ---- class enumeration -----------------------------------------------------

ClassStream::ClassStream(int rank, std::optional<int> max_length)
    : rank_(rank), max_length_(max_length) {
    if (rank < 2) throw InputError("class enumeration requires rank >= 2");
    if (max_length_ && *max_length_ < 1) {
        exhausted_ = true;
    } else {
        digits_.assign(1, 0);
        digits_[0] = -1;  // next() pre-increments
    }
}

bool ClassStream::advance_counter() {
    // odometer over letter codes, least significant digit last
    int base = 2 * rank_;
    for (int i = length_ - 1; i >= 0; --i) {
        if (++digits_[i] < base) return true;
        digits_[i] = 0;
    }
    ++length_;
    if (max_length_ && length_ > *max_length_) return false;
    digits_.assign(length_, 0);
    return true;
}

std::optional<ConjugacyClass> ClassStream::next() {
    if (exhausted_) return std::nullopt;
    for (;;) {
        if (!advance_counter()) {
            exhausted_ = true;
            return std::nullopt;
        }
        Letters ls;
        ls.reserve(length_);
        for (int d : digits_) ls.push_back(Letter::from_code(d));
        // candidate must be its own canonical representative
        Word w;
        {
            Letters copy = ls;
            Word raw = Word(std::move(copy));
            if (static_cast<int>(raw.size()) != length_) continue;  // not reduced
            if (!is_cyclically_reduced(raw)) continue;
            w = std::move(raw);
        }
        Word canon = canonical_rep(w);
        if (canon == w) {
            return ConjugacyClass(std::move(canon), 0);
        }
    }
}

std::vector<ConjugacyClass> classes_up_to(int rank, int max_length) {
    std::vector<ConjugacyClass> out;
    ClassStream s(rank, max_length);
    while (auto c = s.next()) out.push_back(std::move(*c));
    return out;
}

// ---- endomorphism tuples ---------------------------------------------------

Word apply_endomorphism(const WordTuple& images, const Word& w) {
    Letters out;
    for (const Letter& l : w.letters()) {
        assert(l.gen >= 1 && l.gen <= static_cast<int>(images.size()));
        const Word& img = images[l.gen - 1];
        if (l.sign > 0) {
            out.insert(out.end(), img.letters().begin(), img.letters().end());
        } else {
            Word inv = img.inverse();
            out.insert(out.end(), inv.letters().begin(), inv.letters().end());
        }
    }
    return Word(std::move(out));
}

WordTuple compose(const WordTuple& outer, const WordTuple& inner) {
    WordTuple out;
    out.reserve(inner.size());
    for (const Word& w : inner) out.push_back(apply_endomorphism(outer, w));
    return out;
}

WordTuple identity_tuple(int n) {
    WordTuple out;
    out.reserve(n);
    for (int i = 1; i <= n; ++i) out.push_back(Word::generator(i));
    return out;
}

WordTuple inner_tuple(int n, const Word& u) {
    WordTuple out;
    out.reserve(n);
    for (int i = 1; i <= n; ++i) out.push_back(conjugate(u, Word::generator(i)));
    return out;
}

// ---- inversion by decorated folding ----------------------------------------

namespace {

// determinant of the abelianized tuple; automorphisms have det = ±1
long long abelianized_det(int n, const WordTuple& images) {
    std::vector<std::vector<long long>> m(n, std::vector<long long>(n, 0));
    for (int j = 0; j < n; ++j) {
        for (const Letter& l : images[j].letters()) m[l.gen - 1][j] += l.sign;
    }
    // Bareiss fraction-free elimination
    long long prev = 1;
    for (int k = 0; k < n; ++k) {
        int pivot = -1;
        for (int r = k; r < n; ++r) {
            if (m[r][k] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) return 0;
        if (pivot != k) {
            std::swap(m[pivot], m[k]);
            for (int j = 0; j < n; ++j) m[k][j] = -m[k][j];
        }
        for (int r = k + 1; r < n; ++r) {
            for (int c = k + 1; c < n; ++c) {
                m[r][c] = (m[r][c] * m[k][k] - m[r][k] * m[k][c]) / prev;
            }
            m[r][k] = 0;
        }
        prev = m[k][k];
    }
    return m[n - 1][n - 1];
}

struct LabeledEdge {
    int src = -1;
    int dst = -1;
    Letter label{1, 1};  // letter read traversing src -> dst
    Word decor;          // group decoration read src -> dst, over formal symbols
    bool alive = false;
};

struct FoldableGraph {
    std::vector<LabeledEdge> edges;
    int base = 0;
    int num_vertices = 0;

    std::vector<std::pair<int, int>> halves_at(int v) const {
        // (edge index, direction): +1 departs via src, -1 departs via dst
        std::vector<std::pair<int, int>> out;
        for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
            if (!edges[e].alive) continue;
            if (edges[e].src == v) out.emplace_back(e, +1);
            if (edges[e].dst == v) out.emplace_back(e, -1);
        }
        return out;
    }
    Letter label_of(std::pair<int, int> half) const {
        const LabeledEdge& e = edges[half.first];
        return half.second > 0 ? e.label : e.label.inverse();
    }
    Word decor_of(std::pair<int, int> half) const {
        const LabeledEdge& e = edges[half.first];
        return half.second > 0 ? e.decor : e.decor.inverse();
    }
    int head_of(std::pair<int, int> half) const {
        const LabeledEdge& e = edges[half.first];
        return half.second > 0 ? e.dst : e.src;
    }
};

// Merge vertex `from` into `to`, correcting decorations so that every closed
// path at the base keeps its decoration value: halves departing `from` gain
// delta on the left.
void merge_vertex(FoldableGraph& g, int from, int to, const Word& delta) {
    for (LabeledEdge& e : g.edges) {
        if (!e.alive) continue;
        bool s = e.src == from, d = e.dst == from;
        if (s && d) {
            e.decor = delta * e.decor * delta.inverse();
            e.src = e.dst = to;
        } else if (s) {
            e.decor = delta * e.decor;
            e.src = to;
        } else if (d) {
            e.decor = e.decor * delta.inverse();
            e.dst = to;
        }
    }
}

}  // namespace

std::optional<WordTuple> invert_words(int n, const WordTuple& images) {
    if (static_cast<int>(images.size()) != n) return std::nullopt;
    WordTuple phi;
    phi.reserve(n);
    for (const Word& w : images) {
        if (w.empty() || w.max_gen() > n) return std::nullopt;
        phi.push_back(w);
    }
    if (auto d = abelianized_det(n, phi); d != 1 && d != -1) return std::nullopt;

    FoldableGraph g;
    g.base = 0;
    g.num_vertices = 1;
    for (int i = 0; i < n; ++i) {
        const Letters& ls = phi[i].letters();
        int prev = g.base;
        for (std::size_t k = 0; k < ls.size(); ++k) {
            int next = (k + 1 == ls.size()) ? g.base : g.num_vertices++;
            LabeledEdge e;
            e.src = prev;
            e.dst = next;
            e.label = ls[k];
            e.decor = (k == 0) ? Word::generator(i + 1) : Word();
            e.alive = true;
            g.edges.push_back(std::move(e));
            prev = next;
        }
    }

    // fold until immersed
    for (;;) {
        bool folded = false;
        for (int v = 0; v < g.num_vertices && !folded; ++v) {
            auto halves = g.halves_at(v);
            for (std::size_t a = 0; a < halves.size() && !folded; ++a) {
                for (std::size_t b = a + 1; b < halves.size() && !folded; ++b) {
                    if (g.label_of(halves[a]) != g.label_of(halves[b])) continue;
                    auto h1 = halves[a], h2 = halves[b];
                    int u1 = g.head_of(h1), u2 = g.head_of(h2);
                    if (u1 == u2) return std::nullopt;  // rank would drop
                    if (u2 == g.base) {
                        std::swap(h1, h2);
                        std::swap(u1, u2);
                    }
                    Word delta = g.decor_of(h1).inverse() * g.decor_of(h2);
                    g.edges[h2.first].alive = false;
                    merge_vertex(g, u2, u1, delta);
                    folded = true;
                }
            }
        }
        if (!folded) break;
    }

    // trim hanging trees (never the base)
    for (;;) {
        bool trimmed = false;
        for (int v = 0; v < g.num_vertices; ++v) {
            if (v == g.base) continue;
            auto halves = g.halves_at(v);
            if (halves.size() == 1) {
                g.edges[halves[0].first].alive = false;
                trimmed = true;
            }
        }
        if (!trimmed) break;
    }

    // expected shape: a simple arc path base -> c carrying no loops, then a
    // rose at c whose n loops read each generator exactly once
    std::vector<int> loop_edge_of_gen(n, -1);
    int c = -1;
    std::vector<int> arcs;
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        const LabeledEdge& le = g.edges[e];
        if (!le.alive) continue;
        if (le.src == le.dst) {
            if (c == -1) c = le.src;
            if (c != le.src) return std::nullopt;
            int gen = le.label.gen;
            if (loop_edge_of_gen[gen - 1] != -1) return std::nullopt;
            loop_edge_of_gen[gen - 1] = e;
        } else {
            arcs.push_back(e);
        }
    }
    for (int e : loop_edge_of_gen) {
        if (e < 0) return std::nullopt;
    }
    if (c == -1) return std::nullopt;

    // walk the arc path from base to c
    Word path_decor, path_letters;
    {
        int at = g.base;
        std::vector<bool> used(g.edges.size(), false);
        std::size_t steps = 0;
        while (at != c || steps < arcs.size()) {
            bool moved = false;
            for (int e : arcs) {
                if (used[e]) continue;
                const LabeledEdge& le = g.edges[e];
                if (le.src == at) {
                    path_decor = path_decor * le.decor;
                    path_letters = path_letters * Word(Letters{le.label});
                    at = le.dst;
                } else if (le.dst == at) {
                    path_decor = path_decor * le.decor.inverse();
                    path_letters = path_letters * Word(Letters{le.label.inverse()});
                    at = le.src;
                } else {
                    continue;
                }
                used[e] = true;
                moved = true;
                ++steps;
                break;
            }
            if (!moved) return std::nullopt;  // arcs do not form a base-to-c path
        }
        if (at != c) return std::nullopt;
    }

    WordTuple psi(n);
    for (int gen = 1; gen <= n; ++gen) {
        const LabeledEdge& le = g.edges[loop_edge_of_gen[gen - 1]];
        Word d = le.label.sign > 0 ? le.decor : le.decor.inverse();
        psi[gen - 1] = path_decor * d * path_decor.inverse();
    }

    // internal certificate: phi(psi(x_g)) must equal W x_g W^{-1} exactly
    for (int gen = 1; gen <= n; ++gen) {
        Word lhs = apply_endomorphism(phi, psi[gen - 1]);
        Word rhs = conjugate(path_letters, Word::generator(gen));
        if (!(lhs == rhs)) {
            throw Defect("inversion bookkeeping produced an inconsistent witness");
        }
    }

    // strip a common conjugator greedily to shorten the representative
    for (;;) {
        std::size_t total = 0;
        for (const Word& w : psi) total += w.size();
        bool improved = false;
        for (int code = 0; code < 2 * n && !improved; ++code) {
            Word a = Word(Letters{Letter::from_code(code)});
            std::size_t stripped = 0;
            WordTuple candidate;
            candidate.reserve(n);
            for (const Word& w : psi) {
                Word c2 = conjugate(a.inverse(), w);
                stripped += c2.size();
                candidate.push_back(std::move(c2));
            }
            if (stripped < total) {
                psi = std::move(candidate);
                improved = true;
            }
        }
        if (!improved) break;
    }
    return psi;
}

WordTuple random_automorphism(int n, int factors, std::mt19937_64& rng) {
    WordTuple phi = identity_tuple(n);
    std::uniform_int_distribution<int> kind(0, 9);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int step = 0; step < factors; ++step) {
        WordTuple t = identity_tuple(n);
        int k = kind(rng);
        if (k < 7) {  // transvection x_i -> x_i x_j^{±1} or x_j^{±1} x_i
            int i = pick(rng);
            int j = pick(rng);
            while (j == i) j = pick(rng);
            Word xj = Word::generator(j + 1, coin(rng) ? +1 : -1);
            t[i] = coin(rng) ? Word::generator(i + 1) * xj : xj * Word::generator(i + 1);
        } else if (k < 9) {  // inversion
            int i = pick(rng);
            t[i] = Word::generator(i + 1, -1);
        } else {  // transposition
            int i = pick(rng);
            int j = pick(rng);
            while (j == i) j = pick(rng);
            std::swap(t[i], t[j]);
        }
        phi = compose(phi, t);
    }
    return phi;
}

// ---- text syntax -----------------------------------------------------------

Word parse_word(std::string_view text, int rank) {
    if (text == "1" || text.empty()) return Word();
    Letters out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        int gen = 0, sign = 0;
        if (ch >= 'a' && ch <= 'z') {
            gen = ch - 'a' + 1;
            sign = +1;
        } else if (ch >= 'A' && ch <= 'Z') {
            gen = ch - 'A' + 1;
            sign = -1;
        } else {
            throw ParseError(std::string("invalid character '") + ch + "'", i);
        }
        if (gen > rank) {
            throw ParseError(std::string("letter '") + ch + "' exceeds rank " +
                                 std::to_string(rank),
                             i);
        }
        out.push_back(Letter{gen, sign});
    }
    return Word(std::move(out));
}

std::string format_word(const Word& w) {
    if (w.empty()) return "1";
    std::string out;
    out.reserve(w.size());
    for (const Letter& l : w.letters()) {
        char base = l.sign > 0 ? 'a' : 'A';
        out.push_back(static_cast<char>(base + l.gen - 1));
    }
    return out;
}

}  // namespace outerspine
