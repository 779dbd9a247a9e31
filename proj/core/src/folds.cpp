#include "outerspine/folds.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace outerspine {

// ---- GraphMorphism -----------------------------------------------------------

namespace {

void check_morphism(const Graph& source, const Graph& target,
                    const std::map<int, int>& half_image) {
    if (target.num_vertices() != 1) {
        throw InputError("morphism targets must be roses (one vertex)");
    }
    for (int h : source.half_edges()) {
        auto it = half_image.find(h);
        if (it == half_image.end()) throw InputError("half-edge without image");
        int img = it->second;
        int pimg = half_image.at(source.partner(h));
        if (img < 0) {
            if (pimg >= 0) throw InputError("degenerate status disagrees on a pair");
        } else {
            if (!target.has_half(img)) throw InputError("image half-edge not in target");
            if (pimg != target.partner(img)) {
                throw InputError("half-edge images do not respect the involution");
            }
        }
    }
}

}  // namespace

GraphMorphism::GraphMorphism(Graph source, Graph target, std::map<int, int> half_image)
    : source_(std::move(source)), target_(std::move(target)),
      half_image_(std::move(half_image)) {
    check_morphism(source_, target_, half_image_);
}

GraphMorphism::GraphMorphism(Graph source, Graph target, std::map<int, int> half_image,
                             int marking_base, std::vector<std::vector<int>> marking_petals)
    : source_(std::move(source)), target_(std::move(target)),
      half_image_(std::move(half_image)), marking_base_(marking_base),
      marking_petals_(std::move(marking_petals)) {
    check_morphism(source_, target_, half_image_);
}

// ---- engine ------------------------------------------------------------------

namespace {

struct Engine {
    std::vector<int> partner;  // by half id; -1 unused
    std::vector<int> vertex;
    std::vector<int> image;  // target half id or -1
    std::vector<bool> alive;
    std::vector<bool> vertex_alive;
    int base = -1;
    std::vector<std::vector<int>> petals;
    Graph target;
    int rank_n = 0;

    bool has_marking() const { return base >= 0; }
    int head(int h) const { return vertex[partner[h]]; }
    int edge_of(int h) const { return std::min(h, partner[h]); }

    std::vector<int> halves_at(int v) const {
        std::vector<int> out;
        for (int h = 0; h < static_cast<int>(partner.size()); ++h) {
            if (h < static_cast<int>(alive.size()) && alive[h] && vertex[h] == v) {
                out.push_back(h);
            }
        }
        return out;
    }
    int valence(int v) const { return static_cast<int>(halves_at(v).size()); }

    std::vector<int> alive_halves() const {
        std::vector<int> out;
        for (int h = 0; h < static_cast<int>(alive.size()); ++h) {
            if (alive[h]) out.push_back(h);
        }
        return out;
    }
    std::size_t edge_count() const { return alive_halves().size() / 2; }

    std::vector<int> reduce(std::vector<int> path) const {
        std::vector<int> out;
        out.reserve(path.size());
        for (int h : path) {
            if (!out.empty() && partner[out.back()] == h) {
                out.pop_back();
            } else {
                out.push_back(h);
            }
        }
        return out;
    }
};

Engine to_engine(const GraphMorphism& m) {
    Engine e;
    int max_half = 0, max_vertex = 0;
    for (int h : m.source().half_edges()) max_half = std::max(max_half, h);
    for (int v : m.source().vertices()) max_vertex = std::max(max_vertex, v);
    e.partner.assign(max_half + 1, -1);
    e.vertex.assign(max_half + 1, -1);
    e.image.assign(max_half + 1, -1);
    e.alive.assign(max_half + 1, false);
    e.vertex_alive.assign(max_vertex + 1, false);
    for (int h : m.source().half_edges()) {
        e.partner[h] = m.source().partner(h);
        e.vertex[h] = m.source().vertex_of(h);
        e.image[h] = m.half_image(h);
        e.alive[h] = true;
        e.vertex_alive[m.source().vertex_of(h)] = true;
    }
    e.target = m.target();
    e.rank_n = rank(m.source());
    if (m.has_marking()) {
        e.base = m.marking_base();
        e.petals = m.marking_petals();
    }
    return e;
}

GraphMorphism to_morphism(const Engine& e) {
    std::vector<std::pair<int, int>> pairs;
    std::map<int, int> vof, img;
    for (int h : e.alive_halves()) {
        if (h < e.partner[h]) pairs.emplace_back(h, e.partner[h]);
        vof[h] = e.vertex[h];
        img[h] = e.image[h];
    }
    Graph source(std::move(pairs), std::move(vof));
    if (e.has_marking()) {
        return GraphMorphism(std::move(source), e.target, std::move(img), e.base, e.petals);
    }
    return GraphMorphism(std::move(source), e.target, std::move(img));
}

// Collapse newly produced univalent vertices starting from `seed`; the
// marking basepoint is rebased off a univalent vertex before its spur edge
// collapses.  Records collapsed edge ids.
void collapse_univalents_from(Engine& e, int seed, std::vector<int>& record) {
    int w = seed;
    while (w >= 0 && e.vertex_alive[w] && e.valence(w) == 1) {
        int c = e.halves_at(w).front();
        int other = e.head(c);
        if (e.has_marking() && e.base == w) {
            for (auto& petal : e.petals) {
                if (petal.size() < 2 || petal.front() != c ||
                    petal.back() != e.partner[c]) {
                    throw Defect("marking loop at a univalent basepoint is malformed");
                }
                petal.erase(petal.begin());
                petal.pop_back();
            }
            e.base = other;
        }
        record.push_back(e.edge_of(c));
        e.alive[c] = e.alive[e.partner[c]] = false;
        e.vertex_alive[w] = false;
        w = other == w ? -1 : other;
    }
}

// ---- spine extraction --------------------------------------------------------

struct SpineData {
    MarkedGraph spine;
    // spine edge id -> engine edge ids forming its chain
    std::map<int, std::vector<int>> chain_members;

    SpineData(MarkedGraph s, std::map<int, std::vector<int>> members)
        : spine(std::move(s)), chain_members(std::move(members)) {}
};

SpineData spine_of(Engine e) {
    if (!e.has_marking()) throw InputError("spine extraction needs a marking");

    // prune hanging trees, rebasing when the basepoint itself hangs
    for (;;) {
        int w = -1;
        for (int v = 0; v < static_cast<int>(e.vertex_alive.size()); ++v) {
            if (e.vertex_alive[v] && e.valence(v) == 1) {
                w = v;
                break;
            }
        }
        if (w < 0) break;
        std::vector<int> dropped;
        collapse_univalents_from(e, w, dropped);
    }

    // rebase off a bivalent basepoint
    if (e.valence(e.base) == 2) {
        std::vector<int> walk;
        int cur = e.halves_at(e.base).front();
        walk.push_back(cur);
        while (e.valence(e.head(cur)) == 2) {
            int v2 = e.head(cur);
            auto germs = e.halves_at(v2);
            int next = germs[0] == e.partner[cur] ? germs[1] : germs[0];
            walk.push_back(next);
            cur = next;
            if (walk.size() > e.alive.size()) throw Defect("spine walk did not terminate");
        }
        std::vector<int> back;
        for (auto it = walk.rbegin(); it != walk.rend(); ++it) back.push_back(e.partner[*it]);
        for (auto& petal : e.petals) {
            std::vector<int> conj = back;
            conj.insert(conj.end(), petal.begin(), petal.end());
            conj.insert(conj.end(), walk.begin(), walk.end());
            petal = e.reduce(std::move(conj));
        }
        e.base = e.head(walk.back());
    }

    auto nonbivalent = [&](int v) { return e.valence(v) != 2; };

    // decompose into chains through bivalent vertices
    std::map<int, int> spine_half_of_start;  // chain start half -> spine half id
    std::vector<std::vector<int>> chain_seq;
    for (int h : e.alive_halves()) {
        if (!nonbivalent(e.vertex[h]) || spine_half_of_start.count(h)) continue;
        std::vector<int> seq{h};
        while (!nonbivalent(e.head(seq.back()))) {
            int v2 = e.head(seq.back());
            auto germs = e.halves_at(v2);
            int next = germs[0] == e.partner[seq.back()] ? germs[1] : germs[0];
            seq.push_back(next);
        }
        int sid = static_cast<int>(chain_seq.size());
        std::vector<int> rev;
        for (auto it = seq.rbegin(); it != seq.rend(); ++it) rev.push_back(e.partner[*it]);
        spine_half_of_start[h] = sid;
        spine_half_of_start[rev.front()] = sid + 1;
        chain_seq.push_back(seq);
        chain_seq.push_back(std::move(rev));
    }

    // relabel vertices
    std::map<int, int> vmap;
    for (int v = 0; v < static_cast<int>(e.vertex_alive.size()); ++v) {
        if (e.vertex_alive[v] && nonbivalent(v)) {
            int id = static_cast<int>(vmap.size());
            vmap[v] = id;
        }
    }

    std::vector<std::pair<int, int>> pairs;
    std::map<int, int> vof;
    std::map<int, std::vector<int>> members;
    for (int sid = 0; sid < static_cast<int>(chain_seq.size()); sid += 2) {
        pairs.emplace_back(sid, sid + 1);
        vof[sid] = vmap.at(e.vertex[chain_seq[sid].front()]);
        vof[sid + 1] = vmap.at(e.vertex[chain_seq[sid + 1].front()]);
        std::vector<int> mem;
        for (int h : chain_seq[sid]) mem.push_back(e.edge_of(h));
        members[sid] = std::move(mem);
    }
    Graph spine_graph(std::move(pairs), std::move(vof));

    std::vector<std::vector<int>> spine_petals;
    spine_petals.reserve(e.petals.size());
    for (const auto& petal : e.petals) {
        std::vector<int> out;
        std::size_t i = 0;
        while (i < petal.size()) {
            auto it = spine_half_of_start.find(petal[i]);
            if (it == spine_half_of_start.end()) {
                throw Defect("marking path does not start a chain");
            }
            const auto& seq = chain_seq[it->second];
            for (std::size_t k = 0; k < seq.size(); ++k) {
                if (i + k >= petal.size() || petal[i + k] != seq[k]) {
                    throw Defect("marking path leaves a chain mid-way");
                }
            }
            out.push_back(it->second);
            i += seq.size();
        }
        spine_petals.push_back(std::move(out));
    }

    MarkedGraph spine(std::move(spine_graph), vmap.at(e.base), std::move(spine_petals));
    return SpineData(std::move(spine), std::move(members));
}

std::vector<int> spine_forest(const SpineData& s, const std::set<int>& engine_edges) {
    std::vector<int> out;
    for (const auto& [sid, members] : s.chain_members) {
        bool inside = true;
        for (int e : members) {
            if (!engine_edges.count(e)) {
                inside = false;
                break;
            }
        }
        if (inside) out.push_back(sid);
    }
    return out;
}

}  // namespace

// ---- witnesses ---------------------------------------------------------------

FoldWitness local_injectivity_witness(const GraphMorphism& m) {
    for (const Edge& e : m.source().edges()) {
        if (m.degenerate(e.a)) return DegenerateEdge{e.id()};
    }
    for (int v : m.source().vertices()) {
        auto germs = m.source().halves_at(v);
        for (std::size_t i = 0; i < germs.size(); ++i) {
            for (std::size_t j = i + 1; j < germs.size(); ++j) {
                if (m.half_image(germs[i]) == m.half_image(germs[j])) {
                    return FoldablePair{germs[i], germs[j]};
                }
            }
        }
    }
    return std::monostate{};
}

std::vector<FoldablePair> foldable_pairs(const GraphMorphism& m) {
    std::vector<FoldablePair> out;
    for (int v : m.source().vertices()) {
        auto germs = m.source().halves_at(v);
        for (std::size_t i = 0; i < germs.size(); ++i) {
            for (std::size_t j = i + 1; j < germs.size(); ++j) {
                if (!m.degenerate(germs[i]) &&
                    m.half_image(germs[i]) == m.half_image(germs[j])) {
                    out.push_back(FoldablePair{germs[i], germs[j]});
                }
            }
        }
    }
    return out;
}

// ---- KnPath ------------------------------------------------------------------

KnPath::KnPath(std::vector<MarkedGraph> entries, std::vector<KnStep> steps)
    : entries_(std::move(entries)), steps_(std::move(steps)) {
    if (entries_.empty() || entries_.size() != steps_.size() + 1) {
        throw InputError("path must have one more entry than steps");
    }
}

void KnPath::start(MarkedGraph first) {
    if (!entries_.empty()) throw InputError("path already started");
    entries_.push_back(std::move(first));
}

void KnPath::extend(KnStep step, MarkedGraph entry) {
    if (entries_.empty()) throw InputError("path not started");
    steps_.push_back(std::move(step));
    entries_.push_back(std::move(entry));
}

void KnPath::replace_last(MarkedGraph entry) {
    if (entries_.empty()) throw InputError("path not started");
    entries_.back() = std::move(entry);
}

KnPath reversed(const KnPath& p) {
    std::vector<MarkedGraph> entries(p.entries().rbegin(), p.entries().rend());
    std::vector<KnStep> steps;
    for (auto it = p.steps().rbegin(); it != p.steps().rend(); ++it) {
        KnStep s = *it;
        s.dir = s.dir == CollapseDir::LeftToRight ? CollapseDir::RightToLeft
                                                  : CollapseDir::LeftToRight;
        steps.push_back(std::move(s));
    }
    return KnPath(std::move(entries), std::move(steps));
}

// ---- subdivided inverse morphism ----------------------------------------------

GraphMorphism subdivided_inverse_morphism(const Rose& rho) {
    const WordTuple& psi = rho.psi();
    const int n = rho.n();
    std::vector<std::pair<int, int>> pairs;
    std::map<int, int> vof, img;
    int next_half = 0, next_vertex = 1;  // vertex 0 is the base
    std::vector<std::vector<int>> petal_chain(n);  // forward halves per source petal
    for (int j = 0; j < n; ++j) {
        const Letters& ls = psi[j].letters();
        int prev = 0;
        for (std::size_t k = 0; k < ls.size(); ++k) {
            int at = next_half;
            next_half += 2;
            int to = (k + 1 == ls.size()) ? 0 : next_vertex++;
            pairs.emplace_back(at, at + 1);
            vof[at] = prev;
            vof[at + 1] = to;
            img[at] = 2 * (ls[k].gen - 1) + (ls[k].sign > 0 ? 0 : 1);
            img[at + 1] = rho.n() >= 0 ? (img[at] % 2 == 0 ? img[at] + 1 : img[at] - 1) : -1;
            petal_chain[j].push_back(at);
            prev = to;
        }
    }
    // the marking: x_i traverses whole subdivided petals per letter of phi(x_i)
    std::vector<std::vector<int>> petals;
    petals.reserve(n);
    for (const Word& w : rho.phi()) {
        std::vector<int> path;
        for (const Letter& l : w.letters()) {
            const std::vector<int>& chain = petal_chain[l.gen - 1];
            if (l.sign > 0) {
                path.insert(path.end(), chain.begin(), chain.end());
            } else {
                for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
                    path.push_back(*it + 1);  // partner of a forward half
                }
            }
        }
        petals.push_back(std::move(path));
    }
    Graph source(std::move(pairs), std::move(vof));
    return GraphMorphism(std::move(source), Graph::rose(n), std::move(img), 0,
                         std::move(petals));
}

// ---- folding ----------------------------------------------------------------

std::pair<GraphMorphism, FoldMove> apply_fold(const GraphMorphism& m, const FoldWitness& w) {
    Engine e = to_engine(m);
    FoldMove move{FoldKind::Fold, -1, -1, -1, {}, std::nullopt};

    if (const auto* deg = std::get_if<DegenerateEdge>(&w)) {
        int h = deg->edge_id;
        if (h >= static_cast<int>(e.alive.size()) || !e.alive[h] || e.image[h] >= 0) {
            throw InvalidWitness("not a degenerate edge");
        }
        int ha = h, hb = e.partner[h];
        int va = e.vertex[ha], vb = e.vertex[hb];
        if (va == vb) {
            throw InvalidWitness("degenerate loop cannot be collapsed");
        }
        move.kind = FoldKind::CollapseDegenerate;
        move.edge = e.edge_of(h);

        std::optional<SpineData> prev;
        std::vector<int> forest;
        if (e.has_marking()) {
            prev = spine_of(e);
            forest = spine_forest(*prev, {move.edge});
        }
        // drop the edge, merge vb into va
        e.alive[ha] = e.alive[hb] = false;
        for (auto& petal : e.petals) {
            std::vector<int> q;
            for (int t : petal) {
                if (t != ha && t != hb) q.push_back(t);
            }
            petal = e.reduce(std::move(q));
        }
        for (int k : e.alive_halves()) {
            if (e.vertex[k] == vb) e.vertex[k] = va;
        }
        e.vertex_alive[vb] = false;
        if (e.base == vb) e.base = va;
        collapse_univalents_from(e, va, move.univalent_collapsed);

        if (prev) {
            KnEffect kn;
            kn.mid = prev->spine;
            kn.forest_to_next = std::move(forest);
            move.kn = std::move(kn);
        }
        return {to_morphism(e), std::move(move)};
    }

    const auto* fp = std::get_if<FoldablePair>(&w);
    if (!fp) throw InvalidWitness("empty witness");
    int h1 = fp->h1, h2 = fp->h2;
    auto bad = [&](int h) {
        return h < 0 || h >= static_cast<int>(e.alive.size()) || !e.alive[h];
    };
    if (bad(h1) || bad(h2) || h1 == h2 || e.vertex[h1] != e.vertex[h2] ||
        e.image[h1] < 0 || e.image[h1] != e.image[h2]) {
        throw InvalidWitness("halves are not a foldable pair");
    }
    int v = e.vertex[h1];
    int u1 = e.head(h1), u2 = e.head(h2);
    if (u1 == u2) {
        throw InvalidWitness(
            "fold endpoints coincide; the morphism is not a homotopy equivalence");
    }
    move.h1 = h1;
    move.h2 = h2;
    bool loop_shaped = (u1 == v) || (u2 == v);

    std::optional<SpineData> mid;
    std::vector<int> f_prev, f_next;
    if (e.has_marking()) {
        // blow-up: pull the two folding germs onto a new vertex
        Engine blown = e;
        int vhat = static_cast<int>(blown.vertex_alive.size());
        blown.vertex_alive.push_back(true);
        blown.vertex[h1] = vhat;
        blown.vertex[h2] = vhat;
        int a = static_cast<int>(blown.alive.size());
        blown.partner.resize(a + 2);
        blown.vertex.resize(a + 2);
        blown.image.resize(a + 2);
        blown.alive.resize(a + 2);
        blown.partner[a] = a + 1;
        blown.partner[a + 1] = a;
        blown.vertex[a] = v;
        blown.vertex[a + 1] = vhat;
        blown.image[a] = blown.image[a + 1] = -1;
        blown.alive[a] = blown.alive[a + 1] = true;
        for (auto& petal : blown.petals) {
            std::vector<int> out;
            int cur = blown.base;
            for (int t : petal) {
                int dep = blown.vertex[t];
                if (dep != cur) {
                    assert((cur == v && dep == vhat) || (cur == vhat && dep == v));
                    out.push_back(cur == v ? a : a + 1);
                }
                out.push_back(t);
                cur = blown.vertex[blown.partner[t]];
            }
            if (cur != blown.base) {
                assert(cur == vhat && blown.base == v);
                out.push_back(a + 1);
            }
            petal = blown.reduce(std::move(out));
        }
        mid = spine_of(blown);
        f_prev = spine_forest(*mid, {blown.edge_of(a)});
        f_next = spine_forest(*mid, {e.edge_of(h1), e.edge_of(h2)});
    }

    // identify edge(h2) with edge(h1): rewrite, drop, merge u2 into u1
    int p1 = e.partner[h1], p2 = e.partner[h2];
    e.alive[h2] = e.alive[p2] = false;
    for (auto& petal : e.petals) {
        for (int& t : petal) {
            if (t == h2) t = h1;
            if (t == p2) t = p1;
        }
        petal = e.reduce(petal);
    }
    for (int k : e.alive_halves()) {
        if (e.vertex[k] == u2) e.vertex[k] = u1;
    }
    if (u2 != u1) e.vertex_alive[u2] = false;
    if (e.base == u2) e.base = u1;
    collapse_univalents_from(e, v, move.univalent_collapsed);

    if (mid) {
        KnEffect kn;
        kn.mid = mid->spine;
        kn.forest_to_prev = std::move(f_prev);
        kn.forest_to_next = std::move(f_next);
        kn.loop_shaped = loop_shaped;
        move.kn = std::move(kn);
    }
    return {to_morphism(e), std::move(move)};
}

// ---- fold_to_rose -------------------------------------------------------------

FoldToRoseResult fold_to_rose_detailed(const Rose& rho) {
    GraphMorphism m = subdivided_inverse_morphism(rho);
    FoldToRoseResult out;
    {
        Engine e0 = to_engine(m);
        out.path.start(spine_of(e0).spine);
    }
    std::size_t bound = m.source().num_edges() + 1;
    for (std::size_t step = 0;; ++step) {
        if (step > bound) throw Defect("folding exceeded its edge-count bound");
        FoldWitness w = local_injectivity_witness(m);
        if (std::holds_alternative<std::monostate>(w)) break;
        auto [next, move] = apply_fold(m, w);
        if (move.kn) {
            const KnEffect& kn = *move.kn;
            bool have_prev = !kn.forest_to_prev.empty();
            bool have_next = !kn.forest_to_next.empty();
            if (have_prev) {
                out.path.extend(KnStep{CollapseDir::RightToLeft, kn.forest_to_prev},
                                *kn.mid);
            } else if (have_next) {
                // the blow-up is the same spine point; use its presentation
                out.path.replace_last(*kn.mid);
            }
            if (have_next) {
                Engine e2 = to_engine(next);
                out.path.extend(KnStep{CollapseDir::LeftToRight, kn.forest_to_next},
                                spine_of(e2).spine);
            }
        }
        out.moves.push_back(std::move(move));
        m = std::move(next);
    }
    // a locally injective equivalence onto the rose is a homeomorphism, so
    // the endpoint must be a one-vertex spine point
    const MarkedGraph& last = out.path.entries().back();
    if (last.graph().num_vertices() != 1 ||
        last.graph().num_edges() != static_cast<std::size_t>(rho.n())) {
        throw Defect("folding terminated away from a rose");
    }
    return out;
}

KnPath fold_to_rose(const Rose& rho) { return fold_to_rose_detailed(rho).path; }

bool verify_kn_path(const KnPath& p) {
    if (p.entries().empty()) return false;
    if (p.entries().size() != p.steps().size() + 1) return false;
    for (std::size_t i = 0; i < p.steps().size(); ++i) {
        const KnStep& s = p.steps()[i];
        const MarkedGraph& bigger =
            s.dir == CollapseDir::LeftToRight ? p.entries()[i] : p.entries()[i + 1];
        const MarkedGraph& smaller =
            s.dir == CollapseDir::LeftToRight ? p.entries()[i + 1] : p.entries()[i];
        if (s.forest.empty()) return false;
        try {
            MarkedGraph collapsed = collapse_marked(bigger, s.forest);
            if (!marked_equivalent_bounded(collapsed, smaller, 4)) return false;
        } catch (const InputError&) {
            return false;
        }
    }
    return true;
}

}  // namespace outerspine
