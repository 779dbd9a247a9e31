#include "outerspine/complexes.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace outerspine {

// ---- Poset -------------------------------------------------------------------

Poset::Poset(std::vector<std::string> labels,
             const std::vector<std::pair<int, int>>& less_pairs)
    : labels_(std::move(labels)) {
    int n = static_cast<int>(labels_.size());
    strict_.assign(n, std::vector<bool>(n, false));
    for (auto [a, b] : less_pairs) {
        if (a < 0 || b < 0 || a >= n || b >= n) throw InputError("relation out of range");
        if (a == b) throw InputError("strict relation is irreflexive");
        strict_[a][b] = true;
    }
    // transitive closure
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            if (!strict_[i][k]) continue;
            for (int j = 0; j < n; ++j) {
                if (strict_[k][j]) strict_[i][j] = true;
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j && strict_[i][j] && strict_[j][i]) {
                throw InputError("relation is not antisymmetric");
            }
        }
    }
}

std::vector<std::pair<int, int>> Poset::covers() const {
    std::vector<std::pair<int, int>> out;
    int n = size();
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (!strict_[a][b]) continue;
            bool covering = true;
            for (int c = 0; c < n && covering; ++c) {
                if (strict_[a][c] && strict_[c][b]) covering = false;
            }
            if (covering) out.emplace_back(a, b);
        }
    }
    return out;
}

Poset Poset::induced(const std::vector<int>& keep) const {
    std::vector<std::string> labels;
    labels.reserve(keep.size());
    for (int i : keep) labels.push_back(labels_[i]);
    std::vector<std::pair<int, int>> rel;
    for (std::size_t a = 0; a < keep.size(); ++a) {
        for (std::size_t b = 0; b < keep.size(); ++b) {
            if (strict_[keep[a]][keep[b]]) {
                rel.emplace_back(static_cast<int>(a), static_cast<int>(b));
            }
        }
    }
    return Poset(std::move(labels), rel);
}

Retraction quillen_retract(const Poset& p, const PosetMap& f, RetractDirection dir) {
    int n = p.size();
    if (static_cast<int>(f.image.size()) != n) throw InputError("map size mismatch");
    for (int x = 0; x < n; ++x) {
        int fx = f.image[x];
        if (fx < 0 || fx >= n) throw InputError("map image out of range");
        bool ok = dir == RetractDirection::Decreasing ? p.leq(fx, x) : p.leq(x, fx);
        if (!ok) throw DirectionViolated();
    }
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            if (p.leq(x, y) && !p.leq(f.image[x], f.image[y])) throw NotMonotone();
        }
    }
    std::vector<int> kept;
    for (int x = 0; x < n; ++x) {
        if (std::find(kept.begin(), kept.end(), f.image[x]) == kept.end()) {
            kept.push_back(f.image[x]);
        }
    }
    std::sort(kept.begin(), kept.end());
    return Retraction{p.induced(kept), std::move(kept)};
}

// ---- order complex and homology ------------------------------------------------

OrderComplex OrderComplex::of_poset(const Poset& p, std::size_t max_simplices,
                                    int max_dimension) {
    OrderComplex c;
    std::size_t total = 0;
    std::vector<int> chain;
    c.simplices_.clear();
    std::function<void(int)> extend = [&](int last) {
        int dim = static_cast<int>(chain.size()) - 1;
        if (dim >= 0) {
            if (dim > max_dimension) throw TooLarge("order complex dimension exceeds cap");
            if (static_cast<int>(c.simplices_.size()) <= dim) c.simplices_.resize(dim + 1);
            c.simplices_[dim].push_back(chain);
            if (++total > max_simplices) {
                throw TooLarge("order complex exceeds the simplex cap");
            }
        }
        for (int next = 0; next < p.size(); ++next) {
            if (last >= 0 && !p.less(last, next)) continue;
            chain.push_back(next);
            extend(next);
            chain.pop_back();
        }
    };
    extend(-1);
    return c;
}

std::size_t OrderComplex::total_simplices() const {
    std::size_t total = 0;
    for (const auto& dim : simplices_) total += dim.size();
    return total;
}

long long OrderComplex::euler_characteristic() const {
    long long chi = 0;
    long long sign = 1;
    for (const auto& dim : simplices_) {
        chi += sign * static_cast<long long>(dim.size());
        sign = -sign;
    }
    return chi;
}

namespace {

// rank of a set of F2 row vectors given as bitsets
long long f2_rank(std::vector<std::vector<std::uint64_t>> rows) {
    long long rank = 0;
    std::size_t words = rows.empty() ? 0 : rows[0].size();
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < words * 64 && pivot_row < rows.size(); ++col) {
        std::size_t w = col / 64, b = col % 64;
        std::size_t found = pivot_row;
        while (found < rows.size() && !((rows[found][w] >> b) & 1)) ++found;
        if (found == rows.size()) continue;
        std::swap(rows[pivot_row], rows[found]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != pivot_row && ((rows[r][w] >> b) & 1)) {
                for (std::size_t k = 0; k < words; ++k) rows[r][k] ^= rows[pivot_row][k];
            }
        }
        ++pivot_row;
        ++rank;
    }
    return rank;
}

}  // namespace

std::vector<long long> homology_f2(const OrderComplex& c) {
    const auto& simplices = c.simplices();
    if (simplices.empty()) return {};
    if (c.total_simplices() > 20000) throw TooLarge("complex too large for homology");
    int top = static_cast<int>(simplices.size()) - 1;

    // index simplices per dimension
    std::vector<std::map<std::vector<int>, int>> index(top + 1);
    for (int d = 0; d <= top; ++d) {
        for (std::size_t i = 0; i < simplices[d].size(); ++i) {
            index[d][simplices[d][i]] = static_cast<int>(i);
        }
    }

    // rank of each boundary map d_k : C_k -> C_{k-1}
    std::vector<long long> boundary_rank(top + 2, 0);
    for (int d = 1; d <= top; ++d) {
        std::size_t cols = simplices[d - 1].size();
        std::size_t words = (cols + 63) / 64;
        std::vector<std::vector<std::uint64_t>> rows;
        rows.reserve(simplices[d].size());
        for (const auto& s : simplices[d]) {
            std::vector<std::uint64_t> row(words, 0);
            for (std::size_t omit = 0; omit < s.size(); ++omit) {
                std::vector<int> face;
                face.reserve(s.size() - 1);
                for (std::size_t k = 0; k < s.size(); ++k) {
                    if (k != omit) face.push_back(s[k]);
                }
                int j = index[d - 1].at(face);
                row[j / 64] ^= std::uint64_t{1} << (j % 64);
            }
            rows.push_back(std::move(row));
        }
        boundary_rank[d] = f2_rank(std::move(rows));
    }

    std::vector<long long> betti(top + 1, 0);
    for (int d = 0; d <= top; ++d) {
        long long nd = static_cast<long long>(simplices[d].size());
        betti[d] = nd - boundary_rank[d] - boundary_rank[d + 1];
    }
    // alternating sums must agree
    long long chi_b = 0, sign = 1;
    for (int d = 0; d <= top; ++d) {
        chi_b += sign * betti[d];
        sign = -sign;
    }
    if (chi_b != c.euler_characteristic()) {
        throw Defect("homology ranks disagree with the Euler characteristic");
    }
    return betti;
}

// ---- tree posets ----------------------------------------------------------------

std::string ideal_edge_label(const IdealEdge& e) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (int h : mask_elements(e.side())) {
        if (!first) os << ' ';
        os << h;
        first = false;
    }
    os << '}';
    return os.str();
}

std::string ideal_tree_label(const IdealTree& t) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) os << ' ';
        os << ideal_edge_label(t[i]);
    }
    os << ']';
    return os.str();
}

namespace {

bool tree_subset(const IdealTree& a, const IdealTree& b) {
    for (const IdealEdge& e : a) {
        if (std::find(b.begin(), b.end(), e) == b.end()) return false;
    }
    return true;
}

Poset poset_of_trees(const std::vector<IdealTree>& trees) {
    std::vector<std::string> labels;
    labels.reserve(trees.size());
    for (const IdealTree& t : trees) labels.push_back(ideal_tree_label(t));
    std::vector<std::pair<int, int>> rel;
    for (std::size_t a = 0; a < trees.size(); ++a) {
        for (std::size_t b = 0; b < trees.size(); ++b) {
            if (a != b && trees[a].size() < trees[b].size() &&
                tree_subset(trees[a], trees[b])) {
                rel.emplace_back(static_cast<int>(a), static_cast<int>(b));
            }
        }
    }
    return Poset(std::move(labels), rel);
}

}  // namespace

Poset star_poset(const Rose& rho, std::vector<IdealTree>* elements) {
    std::vector<IdealTree> trees = all_ideal_trees(rho.n());
    if (elements) *elements = trees;
    return poset_of_trees(trees);
}

Poset reductive_subposet(const Rose& rho, std::vector<IdealTree>* elements, int lmax) {
    std::vector<IdealTree> reductive;
    for (const IdealTree& t : all_ideal_trees(rho.n())) {
        if (is_reductive_tree(rho, t, lmax)) reductive.push_back(t);
    }
    if (elements) *elements = reductive;
    return poset_of_trees(reductive);
}

// ---- pipeline -------------------------------------------------------------------

namespace {

int find_tree(const std::vector<IdealTree>& trees, const IdealTree& t) {
    for (std::size_t i = 0; i < trees.size(); ++i) {
        if (trees[i] == t) return static_cast<int>(i);
    }
    return -1;
}

IdealTree sorted_insert(IdealTree t, const IdealEdge& e) {
    if (std::find(t.begin(), t.end(), e) == t.end()) {
        t.push_back(e);
        std::sort(t.begin(), t.end());
    }
    return t;
}

IdealTree without(IdealTree t, const IdealEdge& e) {
    t.erase(std::remove(t.begin(), t.end(), e), t.end());
    return t;
}

RetractionStep record_step(StepTag tag, RetractDirection dir, const Poset& before,
                           const PosetMap& f, const Poset& after) {
    RetractionStep s;
    s.tag = tag;
    s.direction = dir;
    s.before = before.labels();
    s.map = f.image;
    s.after = after.labels();
    return s;
}

}  // namespace

PipelineResult contractibility_pipeline(const Rose& rho, int lmax, int iteration_cap) {
    PipelineResult out;
    std::vector<IdealTree> elements;
    Poset p = reductive_subposet(rho, &elements, lmax);
    out.reductive_trees = elements;
    out.initial = p;
    if (elements.empty()) {
        out.verdict = PipelineVerdict::EmptyComplex;
        return out;
    }

    // (1) throw the non-reductive edges out of each tree
    std::vector<IdealEdge> reductive_edges;
    for (const IdealEdge& e : all_ideal_edges(rho.n())) {
        if (is_reductive_edge(rho, e, lmax)) reductive_edges.push_back(e);
    }
    auto edge_is_reductive = [&](const IdealEdge& e) {
        return std::find(reductive_edges.begin(), reductive_edges.end(), e) !=
               reductive_edges.end();
    };
    {
        PosetMap f;
        f.image.resize(elements.size());
        for (std::size_t i = 0; i < elements.size(); ++i) {
            IdealTree stripped;
            for (const IdealEdge& e : elements[i]) {
                if (edge_is_reductive(e)) stripped.push_back(e);
            }
            if (stripped.empty()) {
                throw PipelineDefect(
                    "a reductive tree contains no reductive edge (factorization failure)");
            }
            int j = find_tree(elements, stripped);
            if (j < 0) {
                throw PipelineDefect("strictly reductive part of a tree is not reductive");
            }
            f.image[i] = j;
        }
        Retraction r = quillen_retract(p, f, RetractDirection::Decreasing);
        out.trace.steps.push_back(record_step(StepTag::DropNonReductive,
                                              RetractDirection::Decreasing, p, f, r.image));
        std::vector<IdealTree> next;
        next.reserve(r.kept.size());
        for (int i : r.kept) next.push_back(elements[i]);
        elements = std::move(next);
        p = std::move(r.image);
    }

    // (2) the maximally reductive edge
    std::optional<ReductivePair> best = max_reductive_edge(rho, lmax);
    if (!best) throw PipelineDefect("nonempty poset but no reductive edge");
    const IdealEdge mu = best->edge;
    const HalfMask M = best->side;
    const int m_half = best->half;

    // (3) eliminate the reductive edges crossing mu
    std::vector<IdealEdge> crossing;
    for (const IdealEdge& e : reductive_edges) {
        if (crosses(e, mu)) crossing.push_back(e);
    }
    int iterations = 0;
    while (!crossing.empty()) {
        if (++iterations > iteration_cap) {
            throw PipelineDefect("crossing elimination exceeded its iteration cap");
        }
        // the side condition: for every other reductive edge beta compatible
        // with alpha, if the side B of beta containing m contains A then it
        // also contains M
        auto side_condition = [&](const IdealEdge& alpha) {
            HalfMask A = alpha.side_containing(m_half);
            for (const IdealEdge& beta : reductive_edges) {
                if (beta == alpha || !compatible(beta, alpha)) continue;
                HalfMask B = beta.side_containing(m_half);
                if ((A & ~B) == 0 && (M & ~B) != 0) return false;
            }
            return true;
        };
        std::optional<IdealEdge> alpha;
        for (const IdealEdge& cand : crossing) {
            if (side_condition(cand)) {
                alpha = cand;
                break;
            }
        }
        if (!alpha) {
            throw PipelineDefect(
                "no crossing edge satisfies the side condition; selection impossible");
        }
        IdealEdge gamma = key_lemma_gamma(rho, mu, M, m_half, *alpha, lmax);
        for (const IdealEdge& beta : reductive_edges) {
            if (beta != *alpha && compatible(beta, *alpha) && !compatible(beta, gamma)) {
                throw PipelineDefect("gamma is incompatible with an edge compatible with alpha");
            }
        }

        // add gamma to every tree containing alpha
        {
            PosetMap f;
            f.image.resize(elements.size());
            for (std::size_t i = 0; i < elements.size(); ++i) {
                if (std::find(elements[i].begin(), elements[i].end(), *alpha) !=
                    elements[i].end()) {
                    int j = find_tree(elements, sorted_insert(elements[i], gamma));
                    if (j < 0) {
                        throw PipelineDefect("tree plus gamma left the strictly reductive poset");
                    }
                    f.image[i] = j;
                } else {
                    f.image[i] = static_cast<int>(i);
                }
            }
            Retraction r = quillen_retract(p, f, RetractDirection::Increasing);
            RetractionStep step = record_step(StepTag::AddGamma, RetractDirection::Increasing,
                                              p, f, r.image);
            step.alpha = ideal_edge_label(*alpha);
            step.gamma = ideal_edge_label(gamma);
            out.trace.steps.push_back(std::move(step));
            std::vector<IdealTree> next;
            for (int i : r.kept) next.push_back(elements[i]);
            elements = std::move(next);
            p = std::move(r.image);
        }

        // then drop alpha from every tree containing it
        {
            PosetMap f;
            f.image.resize(elements.size());
            for (std::size_t i = 0; i < elements.size(); ++i) {
                IdealTree stripped = without(elements[i], *alpha);
                if (stripped.empty()) {
                    throw PipelineDefect("dropping alpha emptied a tree");
                }
                int j = find_tree(elements, stripped);
                if (j < 0) throw PipelineDefect("tree minus alpha left the poset");
                f.image[i] = j;
            }
            Retraction r = quillen_retract(p, f, RetractDirection::Decreasing);
            RetractionStep step = record_step(StepTag::DropAlpha, RetractDirection::Decreasing,
                                              p, f, r.image);
            step.alpha = ideal_edge_label(*alpha);
            out.trace.steps.push_back(std::move(step));
            std::vector<IdealTree> next;
            for (int i : r.kept) next.push_back(elements[i]);
            elements = std::move(next);
            p = std::move(r.image);
        }
        for (const IdealTree& t : elements) {
            if (std::find(t.begin(), t.end(), *alpha) != t.end()) {
                throw PipelineDefect("alpha survived its own elimination step");
            }
        }
        crossing.erase(std::remove(crossing.begin(), crossing.end(), *alpha), crossing.end());
    }

    for (const IdealTree& t : elements) {
        for (const IdealEdge& e : t) {
            if (crosses(e, mu)) {
                throw PipelineDefect("an edge crossing mu survived the elimination loop");
            }
        }
    }

    // (4) cone onto mu: adjoin mu everywhere, then project to {mu}
    {
        PosetMap f;
        f.image.resize(elements.size());
        for (std::size_t i = 0; i < elements.size(); ++i) {
            int j = find_tree(elements, sorted_insert(elements[i], mu));
            if (j < 0) throw PipelineDefect("tree plus mu left the poset");
            f.image[i] = j;
        }
        Retraction r = quillen_retract(p, f, RetractDirection::Increasing);
        RetractionStep step =
            record_step(StepTag::ConeToMu, RetractDirection::Increasing, p, f, r.image);
        step.mu = ideal_edge_label(mu);
        out.trace.steps.push_back(std::move(step));
        std::vector<IdealTree> next;
        for (int i : r.kept) next.push_back(elements[i]);
        elements = std::move(next);
        p = std::move(r.image);
    }
    {
        int apex = find_tree(elements, IdealTree{mu});
        if (apex < 0) throw PipelineDefect("the singleton {mu} is not in the poset");
        PosetMap f;
        f.image.assign(elements.size(), apex);
        Retraction r = quillen_retract(p, f, RetractDirection::Decreasing);
        RetractionStep step =
            record_step(StepTag::ConeToMu, RetractDirection::Decreasing, p, f, r.image);
        step.mu = ideal_edge_label(mu);
        out.trace.steps.push_back(std::move(step));
        std::vector<IdealTree> next;
        for (int i : r.kept) next.push_back(elements[i]);
        elements = std::move(next);
        p = std::move(r.image);
    }
    if (p.size() != 1) throw PipelineDefect("pipeline did not end at a single point");
    out.verdict = PipelineVerdict::Contractible;
    return out;
}

}  // namespace outerspine
