#include <doctest.h>

#include <set>

#include "mdiag/geometry.hpp"
#include "mdiag/trees.hpp"

using namespace mdiag;

namespace {

RatPoint pt(std::initializer_list<int> xs)
{
    RatPoint p;
    for (int x : xs)
        p.push_back(x);
    return p;
}

}  // namespace

TEST_CASE("coordinates of J_3 with standard weights")
{
    Weight w = standard_weight(3);
    CHECK(forcey_loday_point(parse_face("b(b(**)*)", Kind::mult), w) == pt({1, 2}));
    CHECK(forcey_loday_point(parse_face("r(b(**)*)", Kind::mult), w) == pt({1, 4}));
    CHECK(forcey_loday_point(parse_face("r(r(**)*)", Kind::mult), w) == pt({2, 4}));
    CHECK(forcey_loday_point(parse_face("r(*r(**))", Kind::mult), w) == pt({4, 2}));
}

TEST_CASE("loday coordinates sum to the hyperplane value")
{
    for (int n = 2; n <= 6; ++n) {
        Weight w = standard_weight(n);
        std::set<RatPoint> pts;
        for (const Nesting& t : enumerate_atomic(Kind::assoc, n)) {
            RatPoint x = loday_point(t, w);
            Rational s = 0;
            for (const auto& c : x)
                s += c;
            CHECK(s == Rational(n * (n - 1)) / 2);
            pts.insert(x);
        }
        CHECK(pts.size() == enumerate_atomic(Kind::assoc, n).size());
    }
}

TEST_CASE("facets are tight exactly on the vertices of their face")
{
    Weight w = {Rational(1), Rational(3, 2), Rational(2), Rational(1, 3)};
    for (Kind k : {Kind::mult, Kind::assoc}) {
        auto hs = facet_halfspaces(k, 4, w);
        CHECK_FALSE(hs.empty());
        for (const Nesting& t : enumerate_atomic(k, 4)) {
            RatPoint x = vertex_point(t, w);
            for (const HalfSpace& h : hs) {
                CHECK(h.satisfied(x));
                if (h.sense != HalfSpace::Sense::eq)
                    CHECK(h.tight(x) == face_leq(t, h.face));
            }
        }
    }
}

TEST_CASE("lifted vertices lie on the lifting hyperplane")
{
    for (int n = 2; n <= 5; ++n) {
        Weight w = standard_weight(n);
        for (const Nesting& t : enumerate_atomic(Kind::mult, n)) {
            RatPoint x = lift_vertex(t, w);
            CHECK(x.size() == static_cast<std::size_t>(n));
            CHECK(project(x) == forcey_loday_point(t, w));
        }
    }
}

TEST_CASE("weights are validated")
{
    CHECK_THROWS(check_weight({Rational(1), Rational(0)}, 2));
    CHECK_THROWS(check_weight({Rational(1)}, 2));
    CHECK_THROWS(forcey_loday_point(parse_face("(**)", Kind::assoc), standard_weight(2)));
}

TEST_CASE("good vectors")
{
    for (int m = 1; m <= 6; ++m)
        CHECK(is_good(good_vector(m)));
    CHECK_FALSE(is_good(pt({1, 1, 1})));
}

TEST_CASE("rationals print as p/q")
{
    CHECK(to_string(Rational(3) / 6) == "1/2");
    CHECK(to_string(Rational(4)) == "4");
    CHECK(parse_rational("6/4") == Rational(3, 2));
}
