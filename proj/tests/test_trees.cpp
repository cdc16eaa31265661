#include <doctest.h>

#include <set>

#include "mdiag/trees.hpp"

using namespace mdiag;

TEST_CASE("grammar parses colored faces")
{
    Nesting F = parse_face("p(b(**)*)", Kind::mult);
    CHECK(F.n == 3);
    CHECK(F.dim() == 1);
    CHECK(to_string(F) == "p(b(**)*)");
    int blue = 0, purple = 0;
    for (const Nest& t : F.nests) {
        blue += t.color == Color::blue;
        purple += t.color == Color::purple;
    }
    CHECK(blue == 1);
    CHECK(purple == 1);
}

TEST_CASE("grammar rejects bad input with a position")
{
    CHECK_THROWS(parse_face("b(r(**)*)", Kind::mult));
    CHECK_THROWS(parse_face("", Kind::mult));
    CHECK_THROWS_AS(parse_face("p(**", Kind::mult), ParseError);
    try {
        parse_face("p(*x*)", Kind::mult);
        FAIL("accepted");
    } catch (const ParseError& e) {
        CHECK(e.position() == 3);
    }
}

TEST_CASE("every face of J_5 and K_6 round-trips")
{
    for (Kind k : {Kind::mult, Kind::assoc}) {
        int n = k == Kind::mult ? 5 : 6;
        auto fs = enumerate_faces(k, n);
        std::set<std::string> seen;
        for (const Nesting& F : fs) {
            std::string s = to_string(F);
            CHECK(seen.insert(s).second);
            CHECK(parse_face(s, k) == F);
            CHECK(nesting_of_tree(tree_of_nesting(F), k) == F);
        }
    }
}

TEST_CASE("vertex counts")
{
    // 1, 2, 6, 21, 80, 322 for the multiplihedra
    const std::size_t mult[] = {0, 1, 2, 6, 21, 80, 322};
    const std::size_t assoc[] = {0, 0, 1, 2, 5, 14, 42};
    for (int n = 1; n <= 6; ++n) {
        CHECK(enumerate_atomic(Kind::mult, n).size() == mult[n]);
        if (n >= 2)
            CHECK(enumerate_atomic(Kind::assoc, n).size() == assoc[n]);
    }
}

TEST_CASE("faces of J_3")
{
    auto fs = enumerate_faces(Kind::mult, 3);
    CHECK(fs.size() == 13);
    int by_dim[3] = {0, 0, 0};
    for (const Nesting& F : fs)
        by_dim[F.dim()]++;
    CHECK(by_dim[0] == 6);
    CHECK(by_dim[1] == 6);
    CHECK(by_dim[2] == 1);
}

TEST_CASE("refinements and face order agree")
{
    Nesting top = parse_face("p(****)", Kind::mult);
    CHECK(refinements(top).size() == 21);
    for (const Nesting& F : enumerate_faces(Kind::mult, 4)) {
        auto r = refinements(F);
        for (const Nesting& v : r) {
            CHECK(v.atomic());
            CHECK(face_leq(v, F));
        }
        CHECK(face_leq(F, F));
        CHECK(face_leq(F, top));
    }
}

TEST_CASE("tamari order is a bounded poset")
{
    for (int n = 2; n <= 5; ++n) {
        const TamariPoset& P = tamari_poset(Kind::mult, n);
        int N = static_cast<int>(P.vertices().size());
        int mins = 0;
        for (int a = 0; a < N; ++a) {
            CHECK(P.leq(a, a));
            bool lo = true;
            for (int b = 0; b < N; ++b) {
                lo = lo && P.leq(a, b);
                if (a != b && P.leq(a, b))
                    CHECK_FALSE(P.leq(b, a));
            }
            mins += lo;
        }
        CHECK(mins == 1);
    }
}

TEST_CASE("left-levelwise decomposition regrafts")
{
    for (const Nesting& F : enumerate_faces(Kind::mult, 4)) {
        Tree t = tree_of_nesting(F);
        CHECK(ll_regraft(ll_decomposition(t)) == t);
    }
}
