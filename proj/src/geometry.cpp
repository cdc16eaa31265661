#include "mdiag/geometry.hpp"

#include <functional>
#include <stdexcept>

namespace mdiag {

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& s)
{
    Rational q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("not a rational number: '" + s + "'");
    q.canonicalize();
    return q;
}

Rational HalfSpace::value(const RatPoint& x) const
{
    Rational s = 0;
    for (std::size_t i = 0; i < normal.size(); ++i)
        s += normal[i] * x[i];
    return s;
}

bool HalfSpace::satisfied(const RatPoint& x) const
{
    Rational v = value(x);
    switch (sense) {
    case Sense::geq: return v >= bound;
    case Sense::leq: return v <= bound;
    default: return v == bound;
    }
}

Weight standard_weight(int n) { return Weight(n, Rational(1)); }

void check_weight(const Weight& w, int n)
{
    if (static_cast<int>(w.size()) != n)
        throw std::invalid_argument("weight length " + std::to_string(w.size()) + " does not match arity "
                                    + std::to_string(n));
    for (const auto& x : w)
        if (x <= 0)
            throw std::invalid_argument("weights must be positive");
}

namespace {

// Returns the weight of the subtree; fills coordinate (gap index) of each
// binary vertex.
Rational coords_rec(const Tree& t, const Weight& w, int& leaf, RatPoint& out, bool colored)
{
    if (t.is_leaf())
        return w[leaf++];
    if (t.children.size() != 2)
        throw std::invalid_argument("vertex coordinates need an atomic face");
    Rational a = coords_rec(t.children[0], w, leaf, out, colored);
    int gap = leaf;  // edge between leaves gap and gap+1
    Rational b = coords_rec(t.children[1], w, leaf, out, colored);
    Rational c = a * b;
    if (colored && t.color == Color::red)
        c *= 2;
    out[gap - 1] = c;
    return a + b;
}

RatPoint point_of(const Nesting& t, const Weight& w, bool colored)
{
    if (!t.atomic())
        throw std::invalid_argument("vertex coordinates need an atomic face: " + to_string(t));
    check_weight(w, t.n);
    RatPoint out(t.n - 1);
    if (t.n == 1)
        return out;
    int leaf = 0;
    coords_rec(tree_of_nesting(t), w, leaf, out, colored);
    return out;
}

Rational pair_sum(const Weight& w, int from, int to)
{
    Rational s = 0;
    for (int a = from; a <= to; ++a)
        for (int b = a + 1; b <= to; ++b)
            s += w[a] * w[b];
    return s;
}

void compositions_k2(int n, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (n == 0) {
        if (cur.size() >= 2)
            out.push_back(cur);
        return;
    }
    for (int a = 1; a <= n; ++a) {
        cur.push_back(a);
        compositions_k2(n - a, cur, out);
        cur.pop_back();
    }
}

}  // namespace

RatPoint forcey_loday_point(const Nesting& t, const Weight& w)
{
    if (t.kind != Kind::mult)
        throw std::invalid_argument("forcey_loday_point needs a colored face");
    return point_of(t, w, true);
}

RatPoint loday_point(const Nesting& t, const Weight& w)
{
    if (t.kind != Kind::assoc)
        throw std::invalid_argument("loday_point needs an uncolored face");
    return point_of(t, w, false);
}

RatPoint vertex_point(const Nesting& t, const Weight& w)
{
    return t.kind == Kind::mult ? forcey_loday_point(t, w) : loday_point(t, w);
}

Nesting facet_face_B(Kind k, int p, int q, int r)
{
    int outer = p + 1 + r;
    Tree base = Tree::corolla(outer, k == Kind::mult ? Color::purple : Color::none);
    Tree top = Tree::corolla(q, k == Kind::mult ? Color::blue : Color::none);
    if (k == Kind::mult)
        return nesting_of_tree(graft(base, p + 1, top), k);
    base.children[p] = top;
    return nesting_of_tree(base, k);
}

Nesting facet_face_T(const std::vector<int>& is)
{
    Tree base = Tree::corolla(static_cast<int>(is.size()), Color::red);
    std::vector<Tree> tops;
    for (int i : is)
        tops.push_back(Tree::corolla(i, Color::purple));
    return nesting_of_tree(graft_level(base, tops), Kind::mult);
}

std::vector<HalfSpace> facet_halfspaces(Kind k, int n, const Weight& w)
{
    if (n < 2)
        throw std::invalid_argument("facets need arity at least 2");
    check_weight(w, n);
    std::vector<HalfSpace> out;
    int qmax = k == Kind::mult ? n : n - 1;
    for (int q = 2; q <= qmax; ++q)
        for (int p = 0; p + q <= n; ++p) {
            int r = n - p - q;
            HalfSpace h;
            h.normal.assign(n - 1, Rational(0));
            for (int i = p + 1; i <= p + q - 1; ++i)
                h.normal[i - 1] = 1;
            h.bound = pair_sum(w, p, p + q - 1);
            h.sense = HalfSpace::Sense::geq;
            h.label = "B(" + std::to_string(p) + "," + std::to_string(q) + "," + std::to_string(r) + ")";
            h.face = facet_face_B(k, p, q, r);
            out.push_back(std::move(h));
        }
    if (k == Kind::assoc)
        return out;
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions_k2(n, cur, comps);
    for (const auto& is : comps) {
        HalfSpace h;
        h.normal.assign(n - 1, Rational(0));
        std::vector<Rational> block;
        int acc = 0;
        for (std::size_t j = 0; j < is.size(); ++j) {
            Rational s = 0;
            for (int a = acc; a < acc + is[j]; ++a)
                s += w[a];
            block.push_back(s);
            acc += is[j];
            if (j + 1 < is.size())
                h.normal[acc - 1] = 1;
        }
        Rational b = 0;
        for (std::size_t j = 0; j < block.size(); ++j)
            for (std::size_t l = j + 1; l < block.size(); ++l)
                b += block[j] * block[l];
        h.bound = 2 * b;
        h.sense = HalfSpace::Sense::leq;
        h.label = "T(";
        for (std::size_t j = 0; j < is.size(); ++j)
            h.label += (j ? "," : "") + std::to_string(is[j]);
        h.label += ")";
        h.face = facet_face_T(is);
        out.push_back(std::move(h));
    }
    return out;
}

HalfSpace assoc_hyperplane(int n, const Weight& w)
{
    check_weight(w, n);
    HalfSpace h;
    h.normal.assign(n - 1, Rational(1));
    h.bound = pair_sum(w, 0, n - 1);
    h.sense = HalfSpace::Sense::eq;
    h.label = "sum";
    h.face = Nesting{Kind::assoc, n, {{1, n - 1, Color::none}}};
    return h;
}

RatPoint lift_vertex(const Nesting& t, const Weight& w)
{
    RatPoint c = forcey_loday_point(t, w);
    Rational z = 2 * pair_sum(w, 0, t.n - 1);
    Rational s = 0;
    for (const auto& x : c)
        s += x;
    c.push_back(z - s);
    return c;
}

RatPoint project(const RatPoint& p)
{
    if (p.empty())
        throw std::invalid_argument("cannot project a point of dimension 0");
    return RatPoint(p.begin(), p.end() - 1);
}

GoodVector good_vector(int m, int base)
{
    if (m < 1)
        throw std::invalid_argument("good vector dimension must be positive");
    if (base < 2)
        throw std::invalid_argument("good vector base must be at least 2");
    GoodVector v(m);
    mpz_class x = base;
    for (int i = m - 1; i >= 0; --i) {
        v[i] = Rational(x);
        x *= base;
    }
    return v;
}

bool is_good(const GoodVector& v)
{
    if (v.empty() || v.back() <= 0)
        return false;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i] < 2 * v[i + 1])
            return false;
    return true;
}

Rational dot(const RatPoint& a, const std::vector<Rational>& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("dot: dimension mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

namespace {

Nesting extreme_vertex(const Nesting& F, const Weight& w, const GoodVector& v, bool top)
{
    if (static_cast<int>(v.size()) != F.n - 1)
        throw std::invalid_argument("orientation vector has the wrong dimension");
    Nesting best;
    Rational bval;
    bool have = false, tie = false;
    for (const auto& s : refinements(F)) {
        Rational x = dot(vertex_point(s, w), v);
        if (!have || (top ? x > bval : x < bval)) {
            best = s;
            bval = x;
            have = true;
            tie = false;
        }
        else if (x == bval) {
            tie = true;
        }
    }
    if (tie)
        throw std::runtime_error("orientation vector is not generic on face " + to_string(F));
    return best;
}

}  // namespace

Nesting top_vertex(const Nesting& F, const Weight& w, const GoodVector& v)
{
    if (F.n == 1)
        return F;
    return extreme_vertex(F, w, v, true);
}

Nesting bottom_vertex(const Nesting& F, const Weight& w, const GoodVector& v)
{
    if (F.n == 1)
        return F;
    return extreme_vertex(F, w, v, false);
}

RatPoint theta_embed_B(int p, int q, int r, const RatPoint& x, const RatPoint& y)
{
    if (p < 0 || r < 0 || q < 2 || static_cast<int>(x.size()) != p + r || static_cast<int>(y.size()) != q - 1)
        throw std::invalid_argument("theta_embed_B: shape mismatch");
    RatPoint out;
    out.insert(out.end(), x.begin(), x.begin() + p);
    out.insert(out.end(), y.begin(), y.end());
    out.insert(out.end(), x.begin() + p, x.end());
    return out;
}

RatPoint theta_embed_T(const std::vector<int>& is, const RatPoint& x, const std::vector<RatPoint>& ys)
{
    if (is.size() < 2 || ys.size() != is.size() || x.size() + 1 != is.size())
        throw std::invalid_argument("theta_embed_T: shape mismatch");
    RatPoint out;
    for (std::size_t j = 0; j < is.size(); ++j) {
        if (static_cast<int>(ys[j].size()) != is[j] - 1)
            throw std::invalid_argument("theta_embed_T: shape mismatch");
        out.insert(out.end(), ys[j].begin(), ys[j].end());
        if (j + 1 < is.size())
            out.push_back(x[j]);
    }
    return out;
}

}  // namespace mdiag
