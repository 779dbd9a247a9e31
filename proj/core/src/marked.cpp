#include "outerspine/marked.hpp"

#include <algorithm>
#include <cassert>
#include <mutex>
#include <set>
#include <unordered_map>

namespace outerspine {

namespace {

// cancel adjacent traversals h, partner(h)
std::vector<int> reduce_path(const Graph& g, const std::vector<int>& path) {
    std::vector<int> out;
    out.reserve(path.size());
    for (int h : path) {
        if (!out.empty() && g.partner(out.back()) == h) {
            out.pop_back();
        } else {
            out.push_back(h);
        }
    }
    return out;
}

void validate_closed_path(const Graph& g, int base, const std::vector<int>& path) {
    int at = base;
    for (int h : path) {
        if (!g.has_half(h)) throw InputError("petal path uses unknown half-edge");
        if (g.vertex_of(h) != at) throw InputError("petal path is not connected");
        at = g.vertex_of(g.partner(h));
    }
    if (at != base) throw InputError("petal path is not a closed loop at the basepoint");
}

// deterministic spanning tree: BFS from the smallest vertex, smallest halves first
std::vector<int> bfs_spanning_tree(const Graph& g) {
    std::vector<int> tree;
    if (g.vertices().empty()) return tree;
    std::set<int> seen{g.vertices().front()};
    std::vector<int> queue{g.vertices().front()};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        for (int h : g.halves_at(v)) {
            int w = g.vertex_of(g.partner(h));
            if (!seen.count(w)) {
                seen.insert(w);
                queue.push_back(w);
                tree.push_back(g.edge_of(h).id());
            }
        }
    }
    return tree;
}

// letters of a one-vertex graph: k-th edge in id order is petal k+1,
// traversed positively via its smaller half
WordTuple words_of_one_vertex(const Graph& g, const std::vector<std::vector<int>>& petals) {
    std::vector<Edge> es = g.edges();
    std::map<int, Letter> letter_of;
    for (std::size_t k = 0; k < es.size(); ++k) {
        letter_of[es[k].a] = Letter{static_cast<int>(k) + 1, +1};
        letter_of[es[k].b] = Letter{static_cast<int>(k) + 1, -1};
    }
    WordTuple out;
    out.reserve(petals.size());
    for (const auto& path : petals) {
        Letters ls;
        ls.reserve(path.size());
        for (int h : path) ls.push_back(letter_of.at(h));
        out.push_back(Word(std::move(ls)));
    }
    return out;
}

// petal words after collapsing a maximal tree (no MarkedGraph construction)
WordTuple marking_words(const Graph& g, const std::vector<std::vector<int>>& petals) {
    std::vector<int> tree = bfs_spanning_tree(g);
    if (tree.empty()) return words_of_one_vertex(g, petals);
    CollapseResult c = collapse_forest(g, tree);
    std::set<int> dropped(tree.begin(), tree.end());
    std::vector<std::vector<int>> mapped;
    mapped.reserve(petals.size());
    for (const auto& path : petals) {
        std::vector<int> q;
        for (int h : path) {
            if (!dropped.count(g.edge_of(h).id())) q.push_back(h);
        }
        mapped.push_back(reduce_path(c.quotient, q));
    }
    return words_of_one_vertex(c.quotient, mapped);
}

}  // namespace

MarkedGraph::MarkedGraph(Graph graph, int basepoint, std::vector<std::vector<int>> petals)
    : graph_(std::move(graph)), basepoint_(basepoint) {
    if (petals.size() < 2) throw InputError("marking needs rank >= 2");
    if (!graph_.connected()) throw Disconnected();
    if (!is_core(graph_)) throw InputError("marked graphs must have all valences >= 3");
    if (rank(graph_) != static_cast<int>(petals.size())) {
        throw InputError("marking rank does not match graph rank");
    }
    petals_.reserve(petals.size());
    for (const auto& p : petals) {
        validate_closed_path(graph_, basepoint_, p);
        petals_.push_back(reduce_path(graph_, p));
    }
    // the marking must induce an isomorphism of fundamental groups
    WordTuple words = marking_words(graph_, petals_);
    if (!invert_words(n(), words)) throw NotInvertible();
}

// ---- Rose -------------------------------------------------------------------

struct Rose::Data {
    int n = 0;
    WordTuple phi;
    WordTuple psi;
    std::string key;
    mutable std::mutex mu;
    mutable std::unordered_map<std::string, long long> lengths;
};

Rose::Rose(WordTuple phi) {
    auto d = std::make_shared<Data>();
    d->n = static_cast<int>(phi.size());
    if (d->n < 2) throw InputError("roses need rank >= 2");
    d->phi = std::move(phi);
    auto psi = invert_words(d->n, d->phi);
    if (!psi) throw NotInvertible();
    d->psi = std::move(*psi);
    for (const Word& w : d->phi) {
        d->key += format_word(w);
        d->key += ',';
    }
    data_ = std::move(d);
}

Rose Rose::standard(int n) { return Rose(identity_tuple(n)); }

int Rose::n() const { return data_->n; }
const WordTuple& Rose::phi() const { return data_->phi; }
const WordTuple& Rose::psi() const { return data_->psi; }
std::string Rose::key() const { return data_->key; }

MarkedGraph Rose::as_marked() const {
    Graph g = Graph::rose(n());
    std::vector<std::vector<int>> petals;
    petals.reserve(data_->phi.size());
    for (const Word& w : data_->phi) {
        std::vector<int> path;
        path.reserve(w.size());
        for (const Letter& l : w.letters()) {
            path.push_back(2 * (l.gen - 1) + (l.sign > 0 ? 0 : 1));
        }
        petals.push_back(std::move(path));
    }
    return MarkedGraph(std::move(g), 0, std::move(petals));
}

// ---- LazyVector --------------------------------------------------------------

struct LazyVector::Memo {
    std::mutex mu;
    std::unordered_map<std::string, long long> vals;
};

LazyVector::LazyVector(int rank, CoordFn coord)
    : rank_(rank), coord_(std::move(coord)), memo_(std::make_shared<Memo>()) {}

LazyVector LazyVector::norm_difference(Rose plus, Rose minus, CoordFn coord) {
    LazyVector v(plus.n(), std::move(coord));
    v.tag_ = std::make_shared<std::pair<Rose, Rose>>(std::move(plus), std::move(minus));
    return v;
}

long long LazyVector::at(const ConjugacyClass& w) const {
    std::string k = w.key();
    {
        std::lock_guard<std::mutex> lock(memo_->mu);
        auto it = memo_->vals.find(k);
        if (it != memo_->vals.end()) return it->second;
    }
    long long v = coord_(w);
    std::lock_guard<std::mutex> lock(memo_->mu);
    memo_->vals.emplace(std::move(k), v);
    return v;
}

Ordering LazyVector::compare_to_zero(int lmax) const {
    if (tag_ && roses_equal(tag_->first, tag_->second)) return Ordering::Equal;
    ClassStream stream(rank_, lmax);
    while (auto w = stream.next()) {
        long long v = at(*w);
        if (v > 0) return Ordering::Greater;
        if (v < 0) return Ordering::Less;
    }
    throw UndeterminedComparison(lmax);
}

// ---- Fingerprint --------------------------------------------------------------

Fingerprint::Fingerprint(int n, std::vector<long long> values)
    : n_(n), values_(std::move(values)) {
    assert(static_cast<int>(values_.size()) == n_ + n_ * n_);
}

Fingerprint Fingerprint::standard(int n) {
    std::vector<long long> vals;
    vals.reserve(n + n * n);
    for (int i = 0; i < n; ++i) vals.push_back(1);
    for (int i = n; i < n + n * n; ++i) vals.push_back(2);
    return Fingerprint(n, std::move(vals));
}

std::vector<Word> Fingerprint::label_words(const WordTuple& basis) {
    int n = static_cast<int>(basis.size());
    std::vector<Word> out;
    out.reserve(n + n * n);
    for (int i = 0; i < n; ++i) out.push_back(basis[i]);
    for (int i = 0; i < n; ++i) out.push_back(basis[i] * basis[i]);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            out.push_back(basis[i] * basis[j]);
            out.push_back(basis[i] * basis[j].inverse());
        }
    }
    return out;
}

// ---- operations ----------------------------------------------------------------

std::vector<int> tight_loop(const MarkedGraph& m, const ConjugacyClass& w) {
    std::vector<int> path;
    for (const Letter& l : w.rep().letters()) {
        const std::vector<int>& petal = m.petals()[l.gen - 1];
        if (l.sign > 0) {
            path.insert(path.end(), petal.begin(), petal.end());
        } else {
            for (auto it = petal.rbegin(); it != petal.rend(); ++it) {
                path.push_back(m.graph().partner(*it));
            }
        }
    }
    path = reduce_path(m.graph(), path);
    while (path.size() >= 2 && m.graph().partner(path.front()) == path.back()) {
        path.erase(path.begin());
        path.pop_back();
    }
    if (path.empty()) {
        throw Defect("nontrivial class has empty tight loop; marking is not an equivalence");
    }
    return path;
}

long long translation_length(const MarkedGraph& m, const ConjugacyClass& w) {
    return static_cast<long long>(tight_loop(m, w).size());
}

long long translation_length(const Rose& rho, const ConjugacyClass& w) {
    // word route: the tight loop of w spells phi(w) cyclically reduced
    const Rose::Data& d = *rho.data_;
    std::string k = w.key();
    {
        std::lock_guard<std::mutex> lock(d.mu);
        auto it = d.lengths.find(k);
        if (it != d.lengths.end()) return it->second;
    }
    Word image = apply_endomorphism(d.phi, w.rep());
    long long len = static_cast<long long>(cyclic_reduce(image).size());
    std::lock_guard<std::mutex> lock(d.mu);
    d.lengths.emplace(std::move(k), len);
    return len;
}

LazyVector norm(const Rose& rho) {
    Rose r = rho;
    return LazyVector(rho.n(), [r](const ConjugacyClass& w) {
        return translation_length(r, w);
    });
}

Fingerprint fingerprint(const Rose& rho, const Rose& basis_source) {
    if (rho.n() != basis_source.n()) throw InputError("rank mismatch");
    std::vector<long long> vals;
    std::vector<Word> labels = Fingerprint::label_words(basis_source.psi());
    vals.reserve(labels.size());
    for (const Word& w : labels) {
        vals.push_back(translation_length(rho, ConjugacyClass(w)));
    }
    return Fingerprint(rho.n(), std::move(vals));
}

bool roses_equal(const Rose& rho1, const Rose& rho2) {
    if (rho1.n() != rho2.n()) return false;
    if (rho1.same_words(rho2)) return true;
    return fingerprint(rho2, rho1) == Fingerprint::standard(rho1.n());
}

Ordering compare_norm(const Rose& rho1, const Rose& rho2, int lmax) {
    if (roses_equal(rho1, rho2)) return Ordering::Equal;
    ClassStream stream(rho1.n(), lmax);
    while (auto w = stream.next()) {
        long long a = translation_length(rho1, *w);
        long long b = translation_length(rho2, *w);
        if (a < b) return Ordering::Less;
        if (a > b) return Ordering::Greater;
    }
    throw UndeterminedComparison(lmax);
}

MarkedGraph collapse_marked(const MarkedGraph& m, const std::vector<int>& forest_edges) {
    CollapseResult c = collapse_forest(m.graph(), forest_edges);
    std::set<int> dropped(forest_edges.begin(), forest_edges.end());
    std::vector<std::vector<int>> petals;
    petals.reserve(m.petals().size());
    for (const auto& path : m.petals()) {
        std::vector<int> q;
        for (int h : path) {
            if (!dropped.count(m.graph().edge_of(h).id())) q.push_back(h);
        }
        petals.push_back(std::move(q));
    }
    return MarkedGraph(c.quotient, c.vertex_image.at(m.basepoint()), std::move(petals));
}

LazyVector edge_crossings(const MarkedGraph& m, int edge_id) {
    if (!m.graph().find_edge(edge_id)) throw InputError("unknown edge id");
    MarkedGraph copy = m;
    return LazyVector(m.n(), [copy, edge_id](const ConjugacyClass& w) {
        long long count = 0;
        for (int h : tight_loop(copy, w)) {
            if (copy.graph().edge_of(h).id() == edge_id) ++count;
        }
        return count;
    });
}

Rose rose_from_marked(const MarkedGraph& m) {
    if (m.graph().num_vertices() != 1) {
        throw InputError("not a rose: graph has more than one vertex");
    }
    return Rose(words_of_one_vertex(m.graph(), m.petals()));
}

Rose compose_inner(const Rose& rho, const Word& u) {
    WordTuple phi;
    phi.reserve(rho.phi().size());
    for (const Word& w : rho.phi()) phi.push_back(conjugate(u, w));
    return Rose(std::move(phi));
}

Rose permute_petals(const Rose& rho, const std::vector<int>& perm,
                    const std::vector<int>& signs) {
    int n = rho.n();
    if (static_cast<int>(perm.size()) != n || static_cast<int>(signs.size()) != n) {
        throw InputError("permutation size mismatch");
    }
    WordTuple phi;
    phi.reserve(rho.phi().size());
    for (const Word& w : rho.phi()) {
        Letters ls;
        ls.reserve(w.size());
        for (const Letter& l : w.letters()) {
            ls.push_back(Letter{perm[l.gen - 1], l.sign * signs[l.gen - 1]});
        }
        phi.push_back(Word(std::move(ls)));
    }
    return Rose(std::move(phi));
}

bool marked_equivalent_bounded(const MarkedGraph& a, const MarkedGraph& b, int max_len) {
    if (a.n() != b.n()) return false;
    if (!graph_isomorphic(a.graph(), b.graph())) return false;
    for (const ConjugacyClass& w : classes_up_to(a.n(), max_len)) {
        if (translation_length(a, w) != translation_length(b, w)) return false;
    }
    return true;
}

}  // namespace outerspine
