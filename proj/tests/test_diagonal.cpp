#include <doctest.h>

#include <set>

#include "mdiag/diagonal.hpp"
#include "mdiag/geometry.hpp"
#include "mdiag/trees.hpp"

using namespace mdiag;

TEST_CASE("arity 2 diagonal of the multiplihedron")
{
    auto ps = diagonal_pairs(Kind::mult, 2, Filter::complementary, true);
    REQUIRE(ps.size() == 2);
    std::set<std::string> got;
    for (const auto& p : ps)
        got.insert((p.sign > 0 ? "+ " : "- ") + to_string(p.left) + " (x) " + to_string(p.right));
    CHECK(got == std::set<std::string>{"+ b(**) (x) p(**)", "+ p(**) (x) r(**)"});
}

TEST_CASE("complementary pairs have complementary dimensions and unit signs")
{
    for (Kind k : {Kind::assoc, Kind::mult})
        for (int n = 2; n <= 5; ++n) {
            int d = polytope_dim(k, n);
            for (const auto& p : diagonal_pairs(k, n, Filter::complementary, true)) {
                CHECK(p.left.dim() + p.right.dim() == d);
                CHECK((p.sign == 1 || p.sign == -1));
                CHECK(in_image(p.left, p.right));
            }
        }
}

TEST_CASE("vertex pairs satisfy the Tamari order")
{
    for (Kind k : {Kind::assoc, Kind::mult})
        for (int n = 2; n <= 5; ++n)
            for (const auto& p : diagonal_pairs(k, n, Filter::vertices, false))
                CHECK(tamari_leq(p.left, p.right));
}

TEST_CASE("counts in low dimensions")
{
    auto a = counts(Kind::assoc, 3);
    auto m = counts(Kind::mult, 3);
    REQUIRE(a.size() == 4);
    REQUIRE(m.size() == 4);
    CHECK(a[3].complementary == 22);
    CHECK(a[3].vertex_pairs == 68);
    CHECK(m[3].complementary == 42);
    CHECK(m[3].vertex_pairs == 122);
}

TEST_CASE("parallel enumeration matches the serial one")
{
    auto s = diagonal_pairs(Kind::mult, 5, Filter::complementary, true, 1);
    auto p = diagonal_pairs(Kind::mult, 5, Filter::complementary, true, 3);
    REQUIRE(s.size() == p.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s[i].left == p[i].left);
        CHECK(s[i].right == p[i].right);
        CHECK(s[i].sign == p[i].sign);
    }
}

TEST_CASE("pair signs agree with the determinant rule")
{
    auto ps = diagonal_pairs(Kind::mult, 4, Filter::complementary, true);
    for (const auto& p : ps)
        CHECK(sign_pair(p.left, p.right) == p.sign);
}

TEST_CASE("image test rejects pairs of the wrong dimension")
{
    Nesting top = parse_face("p(***)", Kind::mult);
    Nesting v = parse_face("b(b(**)*)", Kind::mult);
    CHECK(in_image(v, top));
    CHECK_FALSE(in_image(top, top));
}

TEST_CASE("tp <= bm relaxation overcounts in arity 4")
{
    auto ps = tp_bm_pairs(Kind::mult, 4, good_vector(3));
    CHECK(ps.size() == 46);
    CHECK(diagonal_pairs(Kind::mult, 4, Filter::complementary, false).size() == 42);
}

TEST_CASE("subdivision cells carry their vertices")
{
    auto cells = subdivision(3);
    CHECK(cells.size() == 8);
    for (const Cell& c : cells)
        CHECK_FALSE(c.vertices.empty());
}
