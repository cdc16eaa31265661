#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "mdiag/trees.hpp"

namespace mdiag {

using Rational = mpq_class;
using RatPoint = std::vector<Rational>;
using Weight = std::vector<Rational>;
using GoodVector = std::vector<Rational>;

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& s);

struct HalfSpace {
    enum class Sense { geq, leq, eq };
    std::vector<Rational> normal;
    Rational bound;
    Sense sense = Sense::geq;
    std::string label;  // "B(p,q,r)", "T(i1,...,ik)" or "sum"
    Nesting face;       // face of the polytope supported by the hyperplane

    Rational value(const RatPoint& x) const;
    bool satisfied(const RatPoint& x) const;
    bool tight(const RatPoint& x) const { return value(x) == bound; }
};

Weight standard_weight(int n);
void check_weight(const Weight& w, int n);

RatPoint forcey_loday_point(const Nesting& t, const Weight& w);
RatPoint loday_point(const Nesting& t, const Weight& w);
// Forcey-Loday for mult, Loday for assoc.
RatPoint vertex_point(const Nesting& t, const Weight& w);

// Facets of J_w, or of K_w inside its hyperplane.
std::vector<HalfSpace> facet_halfspaces(Kind k, int n, const Weight& w);
HalfSpace assoc_hyperplane(int n, const Weight& w);

RatPoint lift_vertex(const Nesting& t, const Weight& w);
RatPoint project(const RatPoint& p);

GoodVector good_vector(int m, int base = 2);
bool is_good(const GoodVector& v);
Rational dot(const RatPoint& a, const std::vector<Rational>& b);

Nesting top_vertex(const Nesting& F, const Weight& w, const GoodVector& v);
Nesting bottom_vertex(const Nesting& F, const Weight& w, const GoodVector& v);

// Coordinate interleavings of the facet embeddings.
// (B): x has p+r coordinates, y has q-1: (x_1..x_p, y, x_{p+1}..x_{p+r}).
RatPoint theta_embed_B(int p, int q, int r, const RatPoint& x, const RatPoint& y);
// (T): x has k-1 coordinates, ys[j] has i_j - 1: (y^1, x_1, y^2, ..., x_{k-1}, y^k).
RatPoint theta_embed_T(const std::vector<int>& is, const RatPoint& x, const std::vector<RatPoint>& ys);

// Faces labelling the facets.
Nesting facet_face_B(Kind k, int p, int q, int r);
Nesting facet_face_T(const std::vector<int>& is);

}  // namespace mdiag
