#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdiag/geometry.hpp"
#include "mdiag/trees.hpp"

namespace mdiag::op {

// Generator kinds.  m: degree arity-2; f, g: degree arity-1.
enum class Gen : unsigned char { leaf = 0, m = 1, f = 2, g = 3 };

// Sort of a single tensor factor: A (only m), M (one f on every path),
// MM (g below f on every path, three layers of m).
enum class Sort { A, M, MM };

// A term is a planar tree of generators, encoded as its preorder sequence
// of bytes (arity << 2 | kind).  Unary f and g vertices are explicit.
struct Term {
    std::string code;
    auto operator<=>(const Term&) const = default;
};

Term leaf_term();
Term generator(Gen g, int arity);
int arity(const Term& t);
int degree(const Term& t);
Sort sort_of(const Term& t);
int gen_degree(Gen g, int arity);

// Mutable tree form used by the rewriting routines.
struct Node {
    Gen kind = Gen::leaf;
    std::vector<int> ch;
    int tag = -1;
};

struct TTree {
    std::vector<Node> nodes;
    int root = 0;
};

TTree decode(const Term& t);
Term encode(const TTree& t);
// Internal vertices, bottom to top and left to right.
std::vector<int> ll_order(const TTree& t);
std::vector<int> preorder(const TTree& t);
int tree_arity(const TTree& t);

// Koszul sign of bringing the tagged generators into left-levelwise order;
// tag k carries degree degs[k].
int koszul_to_ll(const TTree& t, const std::vector<int>& degs);

using Monomial = std::vector<Term>;

class FormalSum {
public:
    FormalSum() = default;
    FormalSum(const Monomial& m, long long c) { add(m, c); }
    static FormalSum of(const Term& t, long long c = 1) { return FormalSum({t}, c); }

    void add(const Monomial& m, long long c);
    void add(const FormalSum& o, long long scale = 1);
    FormalSum operator+(const FormalSum& o) const;
    FormalSum operator-(const FormalSum& o) const;
    FormalSum operator*(long long c) const;
    bool operator==(const FormalSum& o) const { return terms_ == o.terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const std::map<Monomial, long long>& terms() const { return terms_; }
    long long coef(const Monomial& m) const;

private:
    std::map<Monomial, long long> terms_;
};

using RationalSum = std::map<Monomial, Rational>;

int degree(const Monomial& m);

// Pretty printing and parsing.  A-terms use the uncolored tree grammar,
// M-terms the colored grammar (b above f, p for f, r below f, unary f
// implicit).  MM-terms use explicit letters: b, f, g (green m), h (the
// second morphism generator), r; unary f and h vertices are explicit.
std::string to_string(const Term& t);
std::string to_string(const Monomial& m);
std::string to_string(const FormalSum& x);
Term parse_term(std::string_view s);
Term parse_term(std::string_view s, Sort sort);
Monomial parse_monomial(std::string_view s);

Term term_of_face(const Nesting& N, Gen top = Gen::f);
Nesting face_of_term(const Term& t);

// Generator differentials.
FormalSum d_generator(Gen g, int arity);
FormalSum differential(const Term& t);
FormalSum differential(const FormalSum& x);

// Single partial composition x o_i y: returns the signed term.
std::pair<int, Term> compose(const Term& x, int i, const Term& y);
// x with ys[j] grafted on leaf positions[j] simultaneously.
std::pair<int, Term> compose_multi(const Term& x, const std::vector<int>& positions, const std::vector<Term>& ys);

// Generator diagonal data: coefficient and the two factors.
struct DiagTerm {
    long long coef;
    Term left;
    Term right;
};
using GenDiag = std::function<std::vector<DiagTerm>(Gen, int)>;

const std::vector<DiagTerm>& standard_gen_diag(Gen g, int arity);
GenDiag standard_diag();

// Applies the diagonal built from `gd` to factor j of every monomial.
FormalSum diag(const FormalSum& x, const GenDiag& gd, std::size_t factor = 0);
FormalSum diag(const FormalSum& x, std::size_t factor = 0);
FormalSum tau(const FormalSum& x);

// The composition morphism into the three-layer composite, applied to every
// factor.
FormalSum comp(const FormalSum& x);
FormalSum comp_generator(int arity);

enum class DefectKind { coassoc_K, coassoc_J, cocomm_K, cocomm_J, comp_compat };
DefectKind defect_kind_of_name(const std::string& s);
std::string defect_name(DefectKind k);
FormalSum defect(DefectKind k, int n);

// Finite complex of a single factor: all terms of a sort and arity.
std::vector<Term> basis(Sort s, int arity);

struct Primitive {
    RationalSum value;
    bool integral = true;
    FormalSum integer_value() const;
};

// Solves d(h) = x exactly; nothing when x is not a boundary.
std::optional<Primitive> is_boundary(const FormalSum& x);

// Candidate diagonals on f_2 parameterized by alpha, identity elsewhere.
GenDiag alpha_diag(long long alpha);
struct NoGoReport {
    std::vector<std::string> constraints;  // one line per coefficient equation
    std::vector<Rational> forced;          // values of alpha forced by some equation
    bool inconsistent_constant = false;    // an equation 0 = c with c != 0
    bool integer_solution = false;
};
NoGoReport alpha_no_go();
FormalSum comp_compat_defect(const GenDiag& gd, int n);

}  // namespace mdiag::op
