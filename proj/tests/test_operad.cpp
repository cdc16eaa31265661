#include <doctest.h>

#include "mdiag/operad.hpp"

using namespace mdiag;
using namespace mdiag::op;

TEST_CASE("term grammar round-trips")
{
    for (Sort s : {Sort::A, Sort::M, Sort::MM})
        for (int n = (s == Sort::A ? 2 : 1); n <= 4; ++n)
            for (const Term& t : basis(s, n)) {
                CHECK(parse_term(to_string(t), s) == t);
                CHECK(sort_of(t) == s);
                CHECK(arity(t) == n);
            }
}

TEST_CASE("monomials parse with any separator")
{
    Monomial a = parse_monomial("b(**) (x) p(**)");
    Monomial b = parse_monomial("b(**)|p(**)");
    Monomial c = parse_monomial("b(**) ⊗ p(**)");
    CHECK(a.size() == 2);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(to_string(a) == "b(**) (x) p(**)");
}

TEST_CASE("degrees of generators")
{
    CHECK(gen_degree(Gen::m, 2) == 0);
    CHECK(gen_degree(Gen::m, 5) == 3);
    CHECK(gen_degree(Gen::f, 1) == 0);
    CHECK(gen_degree(Gen::f, 4) == 3);
    CHECK(degree(generator(Gen::m, 4)) == 2);
}

TEST_CASE("the differential squares to zero")
{
    for (Sort s : {Sort::A, Sort::M, Sort::MM})
        for (int n = (s == Sort::A ? 2 : 1); n <= 5; ++n)
            for (const Term& t : basis(s, n))
                CHECK(differential(differential(t)).empty());
}

TEST_CASE("differential of m3 and f2")
{
    FormalSum dm3 = differential(generator(Gen::m, 3));
    CHECK(dm3.size() == 2);
    FormalSum df2 = differential(generator(Gen::f, 2));
    CHECK(df2.size() == 2);
    for (const auto& [m, c] : df2.terms())
        CHECK((c == 1 || c == -1));
}

TEST_CASE("diagonals are chain maps")
{
    for (int n = 2; n <= 5; ++n)
        for (const Term& t : basis(Sort::A, n)) {
            auto x = FormalSum::of(t);
            CHECK(diag(differential(x)) == differential(diag(x)));
        }
    for (int n = 1; n <= 4; ++n)
        for (const Term& t : basis(Sort::M, n)) {
            auto x = FormalSum::of(t);
            CHECK(diag(differential(x)) == differential(diag(x)));
            CHECK(comp(differential(x)) == differential(comp(x)));
        }
}

TEST_CASE("diagonal of f1 and m2")
{
    FormalSum d1 = diag(FormalSum::of(generator(Gen::f, 1)));
    CHECK(to_string(d1) == "p(*) (x) p(*)");
    FormalSum d2 = diag(FormalSum::of(generator(Gen::m, 2)));
    CHECK(to_string(d2) == "(**) (x) (**)");
}

TEST_CASE("tau is an involution")
{
    for (const Term& t : basis(Sort::M, 3)) {
        FormalSum x = diag(FormalSum::of(t));
        CHECK(tau(tau(x)) == x);
    }
}

TEST_CASE("partial composition is associative up to its sign")
{
    Term m2 = generator(Gen::m, 2), m3 = generator(Gen::m, 3);
    auto [s1, ab] = compose(m3, 2, m2);
    auto [s2, abc] = compose(ab, 1, m3);
    auto [s3, ac] = compose(m3, 1, m3);
    auto [s4, acb] = compose(ac, 4, m2);
    CHECK(abc == acb);
    CHECK(s1 * s2 == s3 * s4);
    auto [t1, u] = compose(m2, 2, m3);
    auto [t2, uv] = compose(u, 1, m3);
    auto [t3, v] = compose(m2, 1, m3);
    auto [t4, vu] = compose(v, 4, m3);
    CHECK(uv == vu);
    CHECK(t1 * t2 == -t3 * t4);
}

TEST_CASE("defects vanish in low arity and are boundaries")
{
    CHECK(defect(DefectKind::coassoc_K, 3).empty());
    CHECK(defect(DefectKind::coassoc_J, 2).empty());
    CHECK(defect(DefectKind::cocomm_K, 2).empty());
    CHECK(defect(DefectKind::cocomm_J, 1).empty());
    for (auto [k, n] : {std::pair{DefectKind::coassoc_K, 4}, {DefectKind::coassoc_J, 3}, {DefectKind::cocomm_K, 3},
                        {DefectKind::cocomm_J, 2}, {DefectKind::comp_compat, 2}}) {
        FormalSum d = defect(k, n);
        REQUIRE_FALSE(d.empty());
        auto h = is_boundary(d);
        REQUIRE(h.has_value());
        REQUIRE(h->integral);
        CHECK(differential(h->integer_value()) == d);
    }
}

TEST_CASE("is_boundary rejects cycles that are not boundaries")
{
    FormalSum x = FormalSum::of(generator(Gen::m, 2));
    CHECK_FALSE(is_boundary(x).has_value());
}

TEST_CASE("no integer alpha gives a compatible diagonal")
{
    NoGoReport r = alpha_no_go();
    CHECK_FALSE(r.integer_solution);
    CHECK_FALSE(r.constraints.empty());
}

TEST_CASE("defect names")
{
    for (auto k : {DefectKind::coassoc_K, DefectKind::coassoc_J, DefectKind::cocomm_K, DefectKind::cocomm_J,
                   DefectKind::comp_compat})
        CHECK(defect_kind_of_name(defect_name(k)) == k);
    CHECK_THROWS(defect_kind_of_name("nope"));
}

TEST_CASE("cocommutativity defects against hand computation")
{
    // dm3 = -m2(m2, 1) + m2(1, m2) and df2 = f1 m2 - m2(f1, f1)
    Term m3 = generator(Gen::m, 3), f2 = generator(Gen::f, 2);
    FormalSum K = defect(DefectKind::cocomm_K, 3);
    FormalSum J = defect(DefectKind::cocomm_J, 2);
    CHECK(K == differential(FormalSum({m3, m3}, 1)) * -1);
    CHECK(J == differential(FormalSum({f2, f2}, 1)));
    CHECK(to_string(differential(m3)) == "(*(**)) - ((**)*)");
    CHECK(to_string(differential(f2)) == "b(**) - r(**)");
}

TEST_CASE("coassociativity defects have the expected primitives")
{
    FormalSum hK = FormalSum(parse_monomial("((***)*) (x) (*(**)*) (x) (*(***))"), -1);
    CHECK(differential(hK) == defect(DefectKind::coassoc_K, 4));
    FormalSum hJ = FormalSum(parse_monomial("b(***) (x) p(*b(**)) (x) r(*p(**))"), -1) +
                   FormalSum(parse_monomial("p(b(**)*) (x) r(p(**)*) (x) r(***)"), 1);
    CHECK(differential(hJ) == defect(DefectKind::coassoc_J, 3));
}
