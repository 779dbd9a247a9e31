#include <doctest.h>

#include <random>
#include <set>

#include "outerspine/folds.hpp"

using namespace outerspine;

namespace {

Word W(const std::string& s, int rank = 4) { return parse_word(s, rank); }

Rose rose2(const std::string& w1, const std::string& w2) {
    return Rose(WordTuple{W(w1, 2), W(w2, 2)});
}

// words spelled by the composition of the morphism with its marking
WordTuple composed_words(const GraphMorphism& m) {
    REQUIRE(m.has_marking());
    WordTuple out;
    for (const auto& petal : m.marking_petals()) {
        Letters ls;
        for (int h : petal) {
            int img = m.half_image(h);
            if (img < 0) continue;
            ls.push_back(Letter{img / 2 + 1, img % 2 == 0 ? +1 : -1});
        }
        out.push_back(Word(std::move(ls)));
    }
    return out;
}

}  // namespace

TEST_CASE("subdivided inverse morphisms") {
    SUBCASE("the standard rose needs no subdivision") {
        GraphMorphism m = subdivided_inverse_morphism(Rose::standard(2));
        CHECK(m.source().num_edges() == 2);
        CHECK(m.source().num_vertices() == 1);
        CHECK(std::holds_alternative<std::monostate>(local_injectivity_witness(m)));
    }
    SUBCASE("x1 -> x1 x2 subdivides petal one into two edges") {
        GraphMorphism m = subdivided_inverse_morphism(rose2("ab", "b"));
        CHECK(m.source().num_edges() == 3);
        CHECK(m.source().num_vertices() == 2);
    }
    SUBCASE("the composition with the marking is homotopic to the identity") {
        Rose r = rose2("ab", "b");
        GraphMorphism m = subdivided_inverse_morphism(r);
        WordTuple t = composed_words(m);
        for (const ConjugacyClass& w : classes_up_to(2, 4)) {
            Word image = apply_endomorphism(t, w.rep());
            CHECK(cyclic_reduce(image).size() == w.length());
        }
    }
}

TEST_CASE("witness selection") {
    // two petals with the same image fold
    Graph two_rose = Graph::rose(2);
    std::map<int, int> img{{0, 0}, {1, 1}, {2, 0}, {3, 1}};
    GraphMorphism collapse_two(two_rose, Graph::rose(2), img);
    FoldWitness w = local_injectivity_witness(collapse_two);
    auto* fp = std::get_if<FoldablePair>(&w);
    REQUIRE(fp);
    CHECK(fp->h1 == 0);
    CHECK(fp->h2 == 2);

    // a degenerate edge is reported first
    Graph theta({{0, 1}, {2, 3}, {4, 5}},
                {{0, 0}, {1, 1}, {2, 0}, {3, 1}, {4, 0}, {5, 1}});
    std::map<int, int> img2{{0, 0}, {1, 1}, {2, -1}, {3, -1}, {4, 2}, {5, 3}};
    GraphMorphism with_degenerate(theta, Graph::rose(2), img2);
    FoldWitness w2 = local_injectivity_witness(with_degenerate);
    auto* de = std::get_if<DegenerateEdge>(&w2);
    REQUIRE(de);
    CHECK(de->edge_id == 2);
}

TEST_CASE("folding the local picture of two edges at a shared vertex") {
    // center vertex 0 with edges e1 to vertex 1 and e2 to vertex 2 mapping
    // to the same petal, plus spurs matching the classic picture
    Graph g({{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}, {10, 11}},
            {{0, 0}, {1, 1},    // e1
             {2, 0}, {3, 2},    // e2
             {4, 0}, {5, 3},    // spur at the center
             {6, 1}, {7, 4},    // spur at u1
             {8, 2}, {9, 5},    // spurs at u2
             {10, 2}, {11, 6}});
    std::map<int, int> img{{0, 0}, {1, 1}, {2, 0}, {3, 1}, {4, 2}, {5, 3},
                           {6, 2}, {7, 3}, {8, 2}, {9, 3}, {10, 4}, {11, 5}};
    GraphMorphism m(g, Graph::rose(3), img);
    FoldWitness w = local_injectivity_witness(m);
    auto* fp = std::get_if<FoldablePair>(&w);
    REQUIRE(fp);
    CHECK(fp->h1 == 0);
    CHECK(fp->h2 == 2);
    auto [folded, move] = apply_fold(m, w);
    CHECK(move.kind == FoldKind::Fold);
    CHECK(folded.source().num_edges() == g.num_edges() - 1);
    CHECK(move.univalent_collapsed.empty());
    // the merged picture: u1 and u2 identified, e1 = e2 a single edge
    Graph expected({{0, 1}, {4, 5}, {6, 7}, {8, 9}, {10, 11}},
                   {{0, 0}, {1, 1}, {4, 0}, {5, 3}, {6, 1}, {7, 4},
                    {8, 1}, {9, 5}, {10, 1}, {11, 6}});
    CHECK(graph_isomorphic(folded.source(), expected));
}

TEST_CASE("invalid witnesses are rejected") {
    Graph two_rose = Graph::rose(2);
    std::map<int, int> img{{0, 0}, {1, 1}, {2, 0}, {3, 1}};
    GraphMorphism m(two_rose, Graph::rose(2), img);
    CHECK_THROWS_AS(apply_fold(m, FoldWitness{FoldablePair{0, 1}}), InvalidWitness);
    CHECK_THROWS_AS(apply_fold(m, FoldWitness{std::monostate{}}), InvalidWitness);
    CHECK_THROWS_AS(apply_fold(m, FoldWitness{DegenerateEdge{0}}), InvalidWitness);
    // folding two parallel petals would identify their endpoints
    CHECK_THROWS_AS(apply_fold(m, FoldWitness{FoldablePair{0, 2}}), InvalidWitness);
}

TEST_CASE("a fold that produces a univalent vertex collapses its spur") {
    // v joined to u1 and u2 by same-image edges; loops at u1 and u2
    Graph g({{0, 1}, {2, 3}, {4, 5}, {6, 7}},
            {{0, 0}, {1, 1}, {2, 0}, {3, 2}, {4, 1}, {5, 1}, {6, 2}, {7, 2}});
    std::map<int, int> img{{0, 0}, {1, 1}, {2, 0}, {3, 1},
                           {4, 2}, {5, 3}, {6, 2}, {7, 3}};
    GraphMorphism m(g, Graph::rose(2), img, 0, {{0, 4, 1}, {2, 6, 3}});
    auto [folded, move] = apply_fold(m, FoldWitness{FoldablePair{0, 2}});
    CHECK(move.kind == FoldKind::Fold);
    CHECK(move.univalent_collapsed.size() == 1);
    // fold (-1 edge) plus spur collapse (-1 edge)
    CHECK(folded.source().num_edges() == 2);
    CHECK(folded.source().num_vertices() == 1);
    REQUIRE(move.kn.has_value());
    // the blow-up is spine-equal to the starting point, and the fold side
    // collapses one genuine spine edge (the two identified arcs)
    CHECK(move.kn->forest_to_prev.empty());
    CHECK(move.kn->forest_to_next.size() == 1);
}

TEST_CASE("fold paths reach the standard rose") {
    SUBCASE("the standard rose is a path of length zero") {
        KnPath p = fold_to_rose(Rose::standard(2));
        CHECK(p.entries().size() == 1);
        CHECK(p.steps().empty());
        CHECK(verify_kn_path(p));
    }
    SUBCASE("a single twist folds in one move") {
        FoldToRoseResult r = fold_to_rose_detailed(rose2("ab", "b"));
        // regression: one fold, emitting the blow-up and its two collapses
        CHECK(r.moves.size() == 1);
        CHECK(r.path.entries().size() == 3);
        CHECK(r.path.steps().size() == 2);
        CHECK(verify_kn_path(r.path));
        Rose endpoint = rose_from_marked(r.path.entries().back());
        CHECK(roses_equal(endpoint, Rose::standard(2)));
        // the blow-up sits over both neighbors
        CHECK(r.path.steps()[0].dir == CollapseDir::RightToLeft);
        CHECK(r.path.steps()[1].dir == CollapseDir::LeftToRight);
    }
    SUBCASE("random automorphisms fold back to the standard rose") {
        std::mt19937_64 rng(27);
        for (int trial = 0; trial < 25; ++trial) {
            int n = 2 + trial % 2;
            Rose r = Rose(random_automorphism(n, 6, rng));
            FoldToRoseResult res = fold_to_rose_detailed(r);
            CHECK(verify_kn_path(res.path));
            CHECK(roses_equal(rose_from_marked(res.path.entries().front()), r));
            CHECK(roses_equal(rose_from_marked(res.path.entries().back()),
                              Rose::standard(n)));
        }
    }
}

TEST_CASE("edge counts strictly decrease along folds") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        Rose r = Rose(random_automorphism(2, 6, rng));
        GraphMorphism m = subdivided_inverse_morphism(r);
        std::size_t initial = m.source().num_edges();
        std::size_t moves = 0;
        for (;;) {
            FoldWitness w = local_injectivity_witness(m);
            if (std::holds_alternative<std::monostate>(w)) break;
            std::size_t before = m.source().num_edges();
            auto [next, move] = apply_fold(m, w);
            CHECK(next.source().num_edges() < before);
            m = std::move(next);
            ++moves;
        }
        CHECK(moves <= initial);
    }
}

TEST_CASE("pulled-back translation lengths are constant along the fold sequence") {
    Rose r = rose2("ab", "b");
    GraphMorphism m = subdivided_inverse_morphism(r);
    auto check_constant = [&](const GraphMorphism& stage) {
        WordTuple t = composed_words(stage);
        for (const ConjugacyClass& w : classes_up_to(2, 4)) {
            CHECK(cyclic_reduce(apply_endomorphism(t, w.rep())).size() == w.length());
        }
    };
    check_constant(m);
    for (;;) {
        FoldWitness w = local_injectivity_witness(m);
        if (std::holds_alternative<std::monostate>(w)) break;
        m = apply_fold(m, w).first;
        check_constant(m);
    }
}

TEST_CASE("folding is confluent in outcome under any witness order") {
    std::mt19937_64 rng(33);
    Rose r = Rose(random_automorphism(2, 6, rng));
    for (int trial = 0; trial < 12; ++trial) {
        GraphMorphism m = subdivided_inverse_morphism(r);
        std::size_t guard = m.source().num_edges() + 1;
        for (std::size_t k = 0; k <= guard; ++k) {
            auto pairs = foldable_pairs(m);
            if (pairs.empty()) break;
            std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
            m = apply_fold(m, FoldWitness{pairs[pick(rng)]}).first;
        }
        CHECK(foldable_pairs(m).empty());
        CHECK(m.source().num_vertices() == 1);
        CHECK(m.source().num_edges() == 2);
    }
}

TEST_CASE("path verification rejects corrupted paths") {
    FoldToRoseResult r = fold_to_rose_detailed(rose2("ab", "b"));
    REQUIRE(verify_kn_path(r.path));
    CHECK(verify_kn_path(reversed(r.path)));

    SUBCASE("a non-collapse jump fails") {
        std::vector<MarkedGraph> entries = r.path.entries();
        std::vector<KnStep> steps = r.path.steps();
        entries.push_back(rose2("ba", "a").as_marked());
        steps.push_back(KnStep{CollapseDir::LeftToRight, {0}});
        KnPath bad(entries, steps);
        CHECK_FALSE(verify_kn_path(bad));
    }
    SUBCASE("a wrong forest fails") {
        std::vector<MarkedGraph> entries = r.path.entries();
        std::vector<KnStep> steps = r.path.steps();
        steps[0].forest = {99};
        KnPath bad(entries, steps);
        CHECK_FALSE(verify_kn_path(bad));
    }
}
