#include <doctest.h>

#include "mdiag/algebra.hpp"
#include "mdiag/io.hpp"

using namespace mdiag;
using namespace mdiag::alg;

TEST_CASE("fixtures are A-infinity structures")
{
    CHECK(check_stasheff(*fixture_algebra(), 5).ok());
    CHECK(check_stasheff(*strict_algebra(), 5).ok());
    CHECK(check_stasheff(*dual_number_algebra(), 4).ok());
    CHECK(check_stasheff(*fixture_coalgebra(), 5).ok());
    auto [F, G] = fixture_morphisms();
    CHECK(check_morphism(F, F.cap).ok());
    CHECK(check_morphism(G, G.cap).ok());
}

TEST_CASE("a broken structure is detected")
{
    AInfAlgebra A = *strict_algebra();
    const FinComplex& V = *A.V;
    REQUIRE(A.m[2].entries.erase({V.index("a"), V.index("1")}) == 1);
    Report r = check_stasheff(A, 4);
    CHECK_FALSE(r.ok());
}

TEST_CASE("tensor products of algebras")
{
    Alg A = fixture_algebra(), S = strict_algebra();
    Alg T = tensor_algebra(A, S, 4);
    CHECK(T->V->dim() == 9);
    CHECK(check_stasheff(*T, 4).ok());
    CHECK_FALSE(T->op(3).zero());
    Alg SS = tensor_algebra(S, S, 4);
    CHECK(SS->op(3).zero());
    CHECK(SS->op(4).zero());
    CHECK(check_stasheff(*tensor_algebra(T, S, 4), 4).ok());
}

TEST_CASE("evaluation commutes with the differential")
{
    Alg A = tensor_algebra(fixture_algebra(), strict_algebra(), 4);
    for (int n = 2; n <= 4; ++n)
        for (const op::Term& t : op::basis(op::Sort::A, n)) {
            op::FormalSum dt = op::differential(t);
            MultiMap lhs = bracket(evaluate(t, *A));
            if (dt.empty())
                CHECK(lhs.zero());
            else
                CHECK(evaluate(dt, *A) == lhs);
        }
}

TEST_CASE("tensor products of morphisms")
{
    auto [F, G] = fixture_morphisms();
    CHECK(check_morphism(tensor_morphism(F, G, 3), 3).ok());
    auto GF = compose_morphisms(G, F);
    CHECK(check_morphism(GF, GF.cap).ok());
}

TEST_CASE("identity morphisms are units")
{
    auto [F, G] = fixture_morphisms();
    auto a = compose_morphisms(identity_morphism(F.dst), F);
    auto b = compose_morphisms(F, identity_morphism(F.src));
    for (int n = 1; n <= F.cap; ++n) {
        CHECK(a.op(n) == F.op(n));
        CHECK(b.op(n) == F.op(n));
    }
}

TEST_CASE("convolution algebras")
{
    Alg H = convolution(fixture_coalgebra(), strict_algebra(), 4);
    CHECK(check_stasheff(*H, 4).ok());
    CHECK_FALSE(H->op(3).zero());
}

TEST_CASE("Maurer-Cartan elements are transported")
{
    MCFixture m = mc_fixture(3);
    CHECK(check_morphism(m.transport, 3).ok());
    CHECK(mc_residual(*m.source, m.alpha, 3).empty());
    Vec img = mc_transport(m.transport, m.alpha, 3);
    CHECK_FALSE(img.empty());
    CHECK(mc_residual(*m.target, img, 3).empty());
}

TEST_CASE("tensor product of morphisms is not functorial")
{
    auto [F, G] = fixture_morphisms();
    Witness w = functoriality_witness(F, G, F, G, 2);
    CHECK(w.differing > 0);
    CHECK_FALSE(w.lhs == w.rhs);
}

TEST_CASE("structures round-trip through JSON")
{
    Alg A = fixture_algebra();
    Alg B = io::algebra_from_json(io::to_json(*A));
    CHECK(B->V->names == A->V->names);
    CHECK(B->V->degrees == A->V->degrees);
    for (int n = 2; n <= A->cap; ++n)
        CHECK(B->op(n) == A->op(n));
}

TEST_CASE("invalid structure JSON is rejected")
{
    io::Json j = io::to_json(*fixture_algebra());
    j["ops"]["m2"] = io::Json::array({io::Json::array({1, "x", "y", "y"})});
    CHECK_THROWS(io::algebra_from_json(j));
    io::Json k = io::to_json(*strict_algebra());
    k["complex"]["d"] = io::Json::array({io::Json::array({1, "1", "a"})});
    CHECK_THROWS(io::algebra_from_json(k));
}

TEST_CASE("complexes validate their differential")
{
    FinComplex V = make_complex({"u", "v"}, {1, 0});
    V.d[0][1] = 1;
    CHECK_NOTHROW(V.validate());
    V.d[1][0] = 1;
    CHECK_THROWS(V.validate());
}
