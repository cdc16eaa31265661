#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mdiag/operad.hpp"

namespace mdiag::alg {

// Finite graded free Z-module with a differential of degree -1.
struct FinComplex {
    std::vector<std::string> names;
    std::vector<int> degrees;
    std::vector<std::map<int, long long>> d;  // d[i][j]: coefficient of e_j in de_i

    int dim() const { return static_cast<int>(names.size()); }
    int index(const std::string& name) const;
    // Throws unless d has degree -1 and squares to zero.
    void validate() const;
};
using Cx = std::shared_ptr<const FinComplex>;

FinComplex make_complex(std::vector<std::string> names, std::vector<int> degrees);

using Tuple = std::vector<int>;
using Vec = std::map<Tuple, long long>;

// Linear map between tensor products of complexes, given on basis tuples.
struct MultiMap {
    std::vector<Cx> src;
    std::vector<Cx> dst;
    int degree = 0;
    std::map<Tuple, Vec> entries;

    void add(const Tuple& in, const Tuple& out, long long c);
    void add(const MultiMap& o, long long scale = 1);
    Vec apply(const Tuple& in) const;
    bool zero() const { return entries.empty(); }
    std::size_t support() const;
    bool operator==(const MultiMap& o) const { return entries == o.entries; }
};

int tuple_degree(const std::vector<Cx>& slots, const Tuple& t);
// Every entry maps a tuple of degree k to tuples of degree k + F.degree.
bool homogeneous(const MultiMap& F);

MultiMap zero_map(std::vector<Cx> src, std::vector<Cx> dst, int degree);
MultiMap identity(const Cx& V);
// F o G.
MultiMap compose(const MultiMap& F, const MultiMap& G);
// Koszul tensor: (F (x) G)(x (x) y) = (-1)^{|G||x|} F(x) (x) G(y).
MultiMap tensor(const MultiMap& F, const MultiMap& G);
// Differential of a tensor product of complexes.
MultiMap tensor_differential(const std::vector<Cx>& slots);
// [d, F] = d F - (-1)^|F| F d.
MultiMap bracket(const MultiMap& F);

// Two ways of composing multilinear maps operadically: End (maps
// V^n -> W, partial composition in the inputs) and coEnd (maps
// V -> W^n, partial composition in the outputs).
enum class Flavor { end, coend };
MultiMap partial(const MultiMap& X, int i, const MultiMap& Y, Flavor fl);
// gamma(X; Y_1, ..., Y_k) through left-to-right partial compositions.
MultiMap full(const MultiMap& X, const std::vector<const MultiMap*>& Ys, Flavor fl);

struct AInfAlgebra {
    Cx V;
    int cap = 4;
    std::map<int, MultiMap> m;  // n >= 2, absent means zero
    MultiMap op(int n) const;
};

struct AInfCoalgebra {
    Cx V;
    int cap = 4;
    std::map<int, MultiMap> c;
    MultiMap op(int n) const;
};

using Alg = std::shared_ptr<const AInfAlgebra>;
using Coalg = std::shared_ptr<const AInfCoalgebra>;

struct AInfMorphism {
    Alg src;
    Alg dst;
    int cap = 4;
    std::map<int, MultiMap> f;  // n >= 1
    MultiMap op(int n) const;
};

// Morphism of A-infinity coalgebras; g_n : src -> dst^n.
struct CoMorphism {
    Coalg src;
    Coalg dst;
    int cap = 4;
    std::map<int, MultiMap> g;
    MultiMap op(int n) const;
};

struct Residual {
    int arity = 0;
    std::size_t nonzero = 0;
};

struct Report {
    int max_arity = 0;
    std::vector<Residual> residuals;  // only the failing arities
    bool ok() const { return residuals.empty(); }
    std::string summary() const;
};

Report check_stasheff(const AInfAlgebra& A, int max_arity);
Report check_stasheff(const AInfCoalgebra& C, int max_arity);
Report check_morphism(const AInfMorphism& F, int max_arity);
Report check_morphism(const CoMorphism& G, int max_arity);

// Residual matrices themselves, for reporting.
MultiMap stasheff_residual(const AInfAlgebra& A, int n);
MultiMap morphism_residual(const AInfMorphism& F, int n);

// Evaluation of operad terms.  A-terms use the algebra, M-terms the
// morphism (m above f from the source, below f from the target), MM-terms
// a composable pair G o F.
MultiMap evaluate(const op::Term& t, const AInfAlgebra& A);
MultiMap evaluate(const op::Term& t, const AInfMorphism& F);
MultiMap evaluate(const op::Term& t, const AInfMorphism& G, const AInfMorphism& F);
MultiMap coevaluate(const op::Term& t, const AInfCoalgebra& C);
MultiMap coevaluate(const op::Term& t, const CoMorphism& G);
// Evaluates a one-factor formal sum.
MultiMap evaluate(const op::FormalSum& x, const AInfAlgebra& A);
MultiMap evaluate(const op::FormalSum& x, const AInfMorphism& F);
MultiMap evaluate(const op::FormalSum& x, const AInfMorphism& G, const AInfMorphism& F);

// Tensor products of complexes; basis (i, j) has index i * dim W + j.
Cx tensor_complex(const Cx& V, const Cx& W);
// Map (V_1 (x) W_1)^n -> V_2 (x) W_2 from F : V_1^n -> V_2 and
// G : W_1^n -> W_2, with the interleaving sign.
MultiMap interleave(const MultiMap& F, const MultiMap& G, const Cx& src, const Cx& dst);

Alg tensor_algebra(const Alg& A, const Alg& B, int cap);
AInfMorphism tensor_morphism(const AInfMorphism& F, const AInfMorphism& G, int cap);
AInfMorphism compose_morphisms(const AInfMorphism& G, const AInfMorphism& F);
AInfMorphism identity_morphism(const Alg& A);
CoMorphism identity_comorphism(const Coalg& C);
// The morphism with f_1 = id and the given f_2 out of A, into the structure
// on the same complex that makes it an A-infinity morphism up to `cap`.
AInfMorphism pushforward(const Alg& A, const MultiMap& f2, int cap);

// Hom(C, A) on elementary maps e_{c->a}, index c * dim A + a.
Cx hom_complex(const Cx& C, const Cx& A);
Alg convolution(const Coalg& C, const Alg& A, int cap);
// For G : C_2 -> C_1 and F : A_1 -> A_2; the source is convolution(C_1, A_1).
AInfMorphism convolution_morphism(const CoMorphism& G, const AInfMorphism& F, const Alg& src, const Alg& dst, int cap);

// Truncated MC expression sum_n (-1)^{n(n-1)/2} m_n(a, ..., a), n <= cap.
Vec mc_residual(const AInfAlgebra& A, const Vec& alpha, int cap);
// Image of an element under sum_n (-1)^{n(n-1)/2} f_n(a, ..., a), n <= cap.
Vec mc_transport(const AInfMorphism& F, const Vec& alpha, int cap);

// Linear dual coalgebra of a finite algebra.
Coalg dual_coalgebra(const Alg& A);

// Shipped fixtures, validated on construction.
Alg fixture_algebra();      // x, y, z with m2(x, x) = y, m3(x, x, x) = z
Alg strict_algebra();       // 1, a, b with da = b, 1 a unit
Coalg fixture_coalgebra();  // dual of fixture_algebra
Alg dual_number_algebra();  // 1, t, w with t t = w, dt = w
// F : S -> S' with f_2(1, 1) = a and G : S' -> S'' with g_2(b, 1) = a, S the
// strict algebra.
std::pair<AInfMorphism, AInfMorphism> fixture_morphisms();

struct MCFixture {
    Coalg C;         // dual of dual_number_algebra
    AInfMorphism F;  // first of fixture_morphisms
    Alg source;      // Hom(C, S)
    Alg target;      // Hom(C, S')
    AInfMorphism transport;
    Vec alpha;       // -e_{t* -> 1}
};
MCFixture mc_fixture(int cap = 3);

struct Witness {
    int arity = 0;
    MultiMap lhs;  // (G1 (x) G2) o (F1 (x) F2)
    MultiMap rhs;  // (G1 o F1) (x) (G2 o F2)
    std::size_t differing = 0;
};
Witness functoriality_witness(const AInfMorphism& F1, const AInfMorphism& G1, const AInfMorphism& F2,
                              const AInfMorphism& G2, int arity);

}  // namespace mdiag::alg
