#include "mdiag/algebra.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace mdiag::alg {

namespace {

int sgn(long long e) { return (e % 2 == 0) ? 1 : -1; }

void add_vec(Vec& v, const Tuple& t, long long c)
{
    if (c == 0)
        return;
    auto [it, fresh] = v.try_emplace(t, c);
    if (!fresh && (it->second += c) == 0)
        v.erase(it);
}

Tuple concat(const Tuple& a, const Tuple& b)
{
    Tuple out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::vector<Cx> concat(const std::vector<Cx>& a, const std::vector<Cx>& b)
{
    std::vector<Cx> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::vector<Cx> power(const Cx& V, int n) { return std::vector<Cx>(n, V); }

// Differential of a tensor of complexes applied to a basis tuple.
Vec d_tuple(const std::vector<Cx>& slots, const Tuple& t)
{
    Vec out;
    int pre = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (auto [j, c] : slots[i]->d[t[i]]) {
            Tuple u = t;
            u[i] = j;
            add_vec(out, u, sgn(pre) * c);
        }
        pre += slots[i]->degrees[t[i]];
    }
    return out;
}

int compositions_epsilon(const std::vector<int>& is)
{
    int k = static_cast<int>(is.size()), e = 0;
    for (int u = 1; u <= k; ++u)
        e += (k - u) * (1 - is[u - 1]);
    return e;
}

void compositions(int n, int min_parts, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (n == 0) {
        if (static_cast<int>(cur.size()) >= min_parts)
            out.push_back(cur);
        return;
    }
    for (int a = 1; a <= n; ++a) {
        cur.push_back(a);
        compositions(n - a, min_parts, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> compositions(int n, int min_parts)
{
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    compositions(n, min_parts, cur, out);
    return out;
}

bool same_complex(const Cx& a, const Cx& b)
{
    return a == b || (a->names == b->names && a->degrees == b->degrees && a->d == b->d);
}

bool same_algebra(const Alg& a, const Alg& b)
{
    if (a == b)
        return true;
    if (!same_complex(a->V, b->V))
        return false;
    int cap = std::min(a->cap, b->cap);
    for (int n = 2; n <= cap; ++n)
        if (!(a->op(n) == b->op(n)))
            return false;
    return true;
}

void require(bool ok, const char* what)
{
    if (!ok)
        throw std::logic_error(what);
}

// Bindings for evaluation: which map a generator stands for, by region.
enum class Region { bottom, middle, top };

struct Binder {
    std::function<MultiMap(op::Gen, int, Region)> gen;
    Cx leaf;
    Flavor fl = Flavor::end;
};

MultiMap eval_rec(const op::TTree& t, int v, Region reg, const Binder& b)
{
    const op::Node& nd = t.nodes[v];
    if (nd.kind == op::Gen::leaf)
        return identity(b.leaf);
    int k = static_cast<int>(nd.ch.size());
    MultiMap X = b.gen(nd.kind, k, reg);
    Region next = reg;
    if (nd.kind == op::Gen::f)
        next = Region::top;
    else if (nd.kind == op::Gen::g)
        next = Region::middle;
    int off = 0;
    for (int c : nd.ch) {
        MultiMap Y = eval_rec(t, c, next, b);
        int width = static_cast<int>(b.fl == Flavor::end ? Y.src.size() : Y.dst.size());
        if (t.nodes[c].kind != op::Gen::leaf)
            X = partial(X, off + 1, Y, b.fl);
        off += width;
    }
    return X;
}

MultiMap eval_term(const op::Term& term, const Binder& b, Region root)
{
    op::TTree t = op::decode(term);
    auto pre = op::preorder(t);
    std::vector<int> degs;
    for (std::size_t i = 0; i < pre.size(); ++i) {
        t.nodes[pre[i]].tag = static_cast<int>(i);
        degs.push_back(op::gen_degree(t.nodes[pre[i]].kind, static_cast<int>(t.nodes[pre[i]].ch.size())));
    }
    MultiMap out = eval_rec(t, t.root, root, b);
    int s = op::koszul_to_ll(t, degs);
    if (s < 0) {
        MultiMap neg = zero_map(out.src, out.dst, out.degree);
        neg.add(out, -1);
        return neg;
    }
    return out;
}

MultiMap eval_sum(const op::FormalSum& x, const std::function<MultiMap(const op::Term&)>& ev)
{
    std::optional<MultiMap> out;
    for (const auto& [mono, c] : x.terms()) {
        if (mono.size() != 1)
            throw std::invalid_argument("evaluate expects one tensor factor");
        MultiMap y = ev(mono[0]);
        if (!out)
            out = zero_map(y.src, y.dst, y.degree);
        out->add(y, c);
    }
    if (!out)
        throw std::invalid_argument("cannot evaluate an empty sum");
    return *out;
}

Binder algebra_binder(const AInfAlgebra& A)
{
    return {[&A](op::Gen g, int k, Region) {
                if (g != op::Gen::m)
                    throw std::invalid_argument("unbound generator in an algebra term");
                return A.op(k);
            },
            A.V, Flavor::end};
}

Binder morphism_binder(const AInfMorphism& F)
{
    return {[&F](op::Gen g, int k, Region r) {
                if (g == op::Gen::f)
                    return F.op(k);
                if (g != op::Gen::m)
                    throw std::invalid_argument("unbound generator in a morphism term");
                return r == Region::top ? F.src->op(k) : F.dst->op(k);
            },
            F.src->V, Flavor::end};
}

// Sum over an operad element given by its generator diagonal, paired by
// `pair`.
template <class Pair>
MultiMap diag_sum(op::Gen g, int n, const Pair& pair)
{
    std::optional<MultiMap> out;
    for (const auto& dt : op::standard_gen_diag(g, n)) {
        MultiMap y = pair(dt.left, dt.right);
        if (!out)
            out = zero_map(y.src, y.dst, y.degree);
        out->add(y, dt.coef);
    }
    return *out;
}

// Hom(C, A)-valued map from a coEnd element gamma : C -> C^n and an End
// element mu : A^n -> A.
MultiMap convolve(const MultiMap& gamma, const MultiMap& mu, const Cx& src, const Cx& dst)
{
    const FinComplex& C1 = *gamma.dst.at(0);
    const FinComplex& A1 = *mu.src.at(0);
    const FinComplex& A2 = *mu.dst.at(0);
    int n = static_cast<int>(gamma.dst.size());
    MultiMap out = zero_map(power(src, n), {dst}, gamma.degree + mu.degree);
    for (const auto& [cin, gv] : gamma.entries)
        for (const auto& [cs, cg] : gv)
            for (const auto& [as, mv] : mu.entries) {
                // (phi_1 (x) ... (x) phi_n) applied to c_1 (x) ... (x) c_n.
                long long e = 0, phis = 0;
                Tuple in(n);
                for (int i = 0; i < n; ++i) {
                    int phi = A1.degrees[as[i]] - C1.degrees[cs[i]];
                    for (int j = 0; j < i; ++j)
                        e += static_cast<long long>(phi) * C1.degrees[cs[j]];
                    phis += phi;
                    in[i] = cs[i] * A1.dim() + as[i];
                }
                e += static_cast<long long>(gamma.degree) * (mu.degree + phis);
                for (const auto& [a, cm] : mv)
                    out.add(in, {cin[0] * A2.dim() + a[0]}, sgn(e) * cg * cm);
            }
    return out;
}

Vec power_vec(const Vec& alpha, int n)
{
    Vec out{{Tuple{}, 1}};
    for (int i = 0; i < n; ++i) {
        Vec next;
        for (const auto& [t, c] : out)
            for (const auto& [a, ca] : alpha)
                add_vec(next, concat(t, a), c * ca);
        out = std::move(next);
    }
    return out;
}

Vec apply_vec(const MultiMap& F, const Vec& x)
{
    Vec out;
    for (const auto& [t, c] : x)
        for (const auto& [o, co] : F.apply(t))
            add_vec(out, o, c * co);
    return out;
}

}  // namespace

// --------------------------------------------------------------- complexes

int FinComplex::index(const std::string& name) const
{
    for (int i = 0; i < dim(); ++i)
        if (names[i] == name)
            return i;
    throw std::invalid_argument("unknown basis element '" + name + "'");
}

void FinComplex::validate() const
{
    if (degrees.size() != names.size() || d.size() != names.size())
        throw std::invalid_argument("complex: basis, degrees and differential differ in size");
    for (int i = 0; i < dim(); ++i)
        for (auto [j, c] : d[i]) {
            if (j < 0 || j >= dim())
                throw std::invalid_argument("complex: differential index out of range");
            if (c != 0 && degrees[j] != degrees[i] - 1)
                throw std::invalid_argument("complex: differential of " + names[i] + " does not have degree -1");
        }
    for (int i = 0; i < dim(); ++i) {
        std::map<int, long long> dd;
        for (auto [j, c] : d[i])
            for (auto [k, c2] : d[j])
                dd[k] += c * c2;
        for (auto [k, c] : dd)
            if (c != 0)
                throw std::invalid_argument("complex: d^2 != 0 on " + names[i]);
    }
}

FinComplex make_complex(std::vector<std::string> names, std::vector<int> degrees)
{
    FinComplex V;
    V.d.resize(names.size());
    V.names = std::move(names);
    V.degrees = std::move(degrees);
    return V;
}

// -------------------------------------------------------------------- maps

void MultiMap::add(const Tuple& in, const Tuple& out, long long c)
{
    if (c == 0)
        return;
    Vec& v = entries[in];
    add_vec(v, out, c);
    if (v.empty())
        entries.erase(in);
}

void MultiMap::add(const MultiMap& o, long long scale)
{
    if (scale == 0)
        return;
    for (const auto& [in, v] : o.entries)
        for (const auto& [out, c] : v)
            add(in, out, scale * c);
}

Vec MultiMap::apply(const Tuple& in) const
{
    auto it = entries.find(in);
    return it == entries.end() ? Vec{} : it->second;
}

std::size_t MultiMap::support() const
{
    std::size_t n = 0;
    for (const auto& [in, v] : entries)
        n += v.size();
    return n;
}

int tuple_degree(const std::vector<Cx>& slots, const Tuple& t)
{
    int d = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        d += slots[i]->degrees[t[i]];
    return d;
}

bool homogeneous(const MultiMap& F)
{
    for (const auto& [in, v] : F.entries) {
        if (in.size() != F.src.size())
            return false;
        for (const auto& [out, c] : v)
            if (out.size() != F.dst.size() || tuple_degree(F.dst, out) != tuple_degree(F.src, in) + F.degree)
                return false;
    }
    return true;
}

MultiMap zero_map(std::vector<Cx> src, std::vector<Cx> dst, int degree)
{
    MultiMap F;
    F.src = std::move(src);
    F.dst = std::move(dst);
    F.degree = degree;
    return F;
}

MultiMap identity(const Cx& V)
{
    MultiMap F = zero_map({V}, {V}, 0);
    for (int i = 0; i < V->dim(); ++i)
        F.add({i}, {i}, 1);
    return F;
}

MultiMap compose(const MultiMap& F, const MultiMap& G)
{
    require(F.src.size() == G.dst.size(), "compose: arity mismatch");
    MultiMap out = zero_map(G.src, F.dst, F.degree + G.degree);
    for (const auto& [in, v] : G.entries)
        for (const auto& [mid, c] : v)
            for (const auto& [o, c2] : F.apply(mid))
                out.add(in, o, c * c2);
    return out;
}

MultiMap tensor(const MultiMap& F, const MultiMap& G)
{
    MultiMap out = zero_map(concat(F.src, G.src), concat(F.dst, G.dst), F.degree + G.degree);
    for (const auto& [x, vf] : F.entries) {
        int s = sgn(static_cast<long long>(G.degree) * tuple_degree(F.src, x));
        for (const auto& [y, vg] : G.entries)
            for (const auto& [ox, cf] : vf)
                for (const auto& [oy, cg] : vg)
                    out.add(concat(x, y), concat(ox, oy), s * cf * cg);
    }
    return out;
}

MultiMap tensor_differential(const std::vector<Cx>& slots)
{
    MultiMap out = zero_map(slots, slots, -1);
    Tuple t(slots.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == slots.size()) {
            for (const auto& [u, c] : d_tuple(slots, t))
                out.add(t, u, c);
            return;
        }
        for (int b = 0; b < slots[i]->dim(); ++b) {
            t[i] = b;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

MultiMap bracket(const MultiMap& F)
{
    MultiMap out = zero_map(F.src, F.dst, F.degree - 1);
    for (const auto& [in, v] : F.entries)
        for (const auto& [o, c] : v)
            for (const auto& [u, cd] : d_tuple(F.dst, o))
                out.add(in, u, c * cd);
    // F o d: for each support tuple s and slot i, the tuples t with s in d(t).
    int s0 = -sgn(F.degree);
    for (const auto& [s, v] : F.entries) {
        int pre = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const FinComplex& V = *F.src[i];
            for (int b = 0; b < V.dim(); ++b) {
                auto it = V.d[b].find(s[i]);
                if (it == V.d[b].end())
                    continue;
                Tuple t = s;
                t[i] = b;
                for (const auto& [o, c] : v)
                    out.add(t, o, s0 * sgn(pre) * it->second * c);
            }
            pre += V.degrees[s[i]];
        }
    }
    return out;
}

MultiMap partial(const MultiMap& X, int i, const MultiMap& Y, Flavor fl)
{
    std::size_t pos = static_cast<std::size_t>(i - 1);
    if (fl == Flavor::end) {
        require(Y.dst.size() == 1 && pos < X.src.size(), "partial: bad position");
        std::vector<Cx> src(X.src.begin(), X.src.begin() + pos);
        src.insert(src.end(), Y.src.begin(), Y.src.end());
        src.insert(src.end(), X.src.begin() + pos + 1, X.src.end());
        MultiMap out = zero_map(src, X.dst, X.degree + Y.degree);
        std::map<int, std::vector<std::pair<const Tuple*, long long>>> by_out;
        for (const auto& [yin, yv] : Y.entries)
            for (const auto& [yo, c] : yv)
                by_out[yo[0]].push_back({&yin, c});
        for (const auto& [s, xv] : X.entries) {
            auto it = by_out.find(s[pos]);
            if (it == by_out.end())
                continue;
            int pre = 0;
            for (std::size_t l = 0; l < pos; ++l)
                pre += X.src[l]->degrees[s[l]];
            int sign = sgn(static_cast<long long>(Y.degree) * pre);
            for (const auto& [yin, cy] : it->second) {
                Tuple t(s.begin(), s.begin() + pos);
                t.insert(t.end(), yin->begin(), yin->end());
                t.insert(t.end(), s.begin() + pos + 1, s.end());
                for (const auto& [o, cx] : xv)
                    out.add(t, o, sign * cy * cx);
            }
        }
        return out;
    }
    require(Y.src.size() == 1 && pos < X.dst.size(), "partial: bad position");
    std::vector<Cx> dst(X.dst.begin(), X.dst.begin() + pos);
    dst.insert(dst.end(), Y.dst.begin(), Y.dst.end());
    dst.insert(dst.end(), X.dst.begin() + pos + 1, X.dst.end());
    MultiMap out = zero_map(X.src, dst, X.degree + Y.degree);
    for (const auto& [in, xv] : X.entries)
        for (const auto& [o, cx] : xv) {
            Vec yv = Y.apply({o[pos]});
            if (yv.empty())
                continue;
            int pre = 0;
            for (std::size_t l = 0; l < pos; ++l)
                pre += X.dst[l]->degrees[o[l]];
            int sign = sgn(static_cast<long long>(Y.degree) * pre);
            for (const auto& [yo, cy] : yv) {
                Tuple u(o.begin(), o.begin() + pos);
                u.insert(u.end(), yo.begin(), yo.end());
                u.insert(u.end(), o.begin() + pos + 1, o.end());
                out.add(in, u, sign * cx * cy);
            }
        }
    return out;
}

MultiMap full(const MultiMap& X, const std::vector<const MultiMap*>& Ys, Flavor fl)
{
    MultiMap out = X;
    int off = 0;
    for (const MultiMap* Y : Ys) {
        out = partial(out, off + 1, *Y, fl);
        off += static_cast<int>(fl == Flavor::end ? Y->src.size() : Y->dst.size());
    }
    return out;
}

// -------------------------------------------------------------- structures

MultiMap AInfAlgebra::op(int n) const
{
    if (n < 2)
        throw std::invalid_argument("algebra operations start in arity 2");
    if (n > cap)
        throw std::out_of_range("arity " + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
    auto it = m.find(n);
    return it == m.end() ? zero_map(power(V, n), {V}, n - 2) : it->second;
}

MultiMap AInfCoalgebra::op(int n) const
{
    if (n < 2)
        throw std::invalid_argument("coalgebra operations start in arity 2");
    if (n > cap)
        throw std::out_of_range("arity " + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
    auto it = c.find(n);
    return it == c.end() ? zero_map({V}, power(V, n), n - 2) : it->second;
}

MultiMap AInfMorphism::op(int n) const
{
    if (n < 1)
        throw std::invalid_argument("morphism components start in arity 1");
    if (n > cap)
        throw std::out_of_range("arity " + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
    auto it = f.find(n);
    return it == f.end() ? zero_map(power(src->V, n), {dst->V}, n - 1) : it->second;
}

MultiMap CoMorphism::op(int n) const
{
    if (n < 1)
        throw std::invalid_argument("morphism components start in arity 1");
    if (n > cap)
        throw std::out_of_range("arity " + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
    auto it = g.find(n);
    return it == g.end() ? zero_map({src->V}, power(dst->V, n), n - 1) : it->second;
}

std::string Report::summary() const
{
    std::ostringstream os;
    if (ok()) {
        os << "identities hold up to arity " << max_arity;
        return os.str();
    }
    for (std::size_t i = 0; i < residuals.size(); ++i)
        os << (i ? "; " : "") << "arity " << residuals[i].arity << ": " << residuals[i].nonzero << " nonzero entries";
    return os.str();
}

// ------------------------------------------------------------------ checks

namespace {

template <class Op>
MultiMap stasheff_generic(const Op& op, int n, Flavor fl)
{
    MultiMap out = bracket(op(n));
    for (int q = 2; q <= n - 1; ++q)
        for (int p = 0; p + q <= n; ++p) {
            int r = n - p - q;
            out.add(partial(op(p + 1 + r), p + 1, op(q), fl), sgn(p + q * r));
        }
    return out;
}

template <class F, class Inner, class Outer>
MultiMap morphism_generic(const F& f, const Inner& inner, const Outer& outer, int n, Flavor fl)
{
    MultiMap out = bracket(f(n));
    for (int q = 2; q <= n; ++q)
        for (int p = 0; p + q <= n; ++p) {
            int r = n - p - q;
            out.add(partial(f(p + 1 + r), p + 1, inner(q), fl), -sgn(p + q * r));
        }
    for (const auto& is : compositions(n, 2)) {
        std::vector<MultiMap> fs;
        for (int a : is)
            fs.push_back(f(a));
        std::vector<const MultiMap*> ptrs;
        for (const auto& x : fs)
            ptrs.push_back(&x);
        out.add(full(outer(static_cast<int>(is.size())), ptrs, fl), sgn(compositions_epsilon(is)));
    }
    return out;
}

Report make_report(int max_arity, int from, const std::function<MultiMap(int)>& residual)
{
    Report rep;
    rep.max_arity = max_arity;
    for (int n = from; n <= max_arity; ++n) {
        MultiMap r = residual(n);
        if (!r.zero())
            rep.residuals.push_back({n, r.support()});
    }
    return rep;
}

}  // namespace

MultiMap stasheff_residual(const AInfAlgebra& A, int n)
{
    return stasheff_generic([&](int k) { return A.op(k); }, n, Flavor::end);
}

MultiMap morphism_residual(const AInfMorphism& F, int n)
{
    return morphism_generic([&](int k) { return F.op(k); }, [&](int k) { return F.src->op(k); },
                            [&](int k) { return F.dst->op(k); }, n, Flavor::end);
}

Report check_stasheff(const AInfAlgebra& A, int max_arity)
{
    return make_report(max_arity, 2, [&](int n) { return stasheff_residual(A, n); });
}

Report check_stasheff(const AInfCoalgebra& C, int max_arity)
{
    return make_report(max_arity, 2, [&](int n) {
        return stasheff_generic([&](int k) { return C.op(k); }, n, Flavor::coend);
    });
}

Report check_morphism(const AInfMorphism& F, int max_arity)
{
    return make_report(max_arity, 1, [&](int n) { return morphism_residual(F, n); });
}

Report check_morphism(const CoMorphism& G, int max_arity)
{
    return make_report(max_arity, 1, [&](int n) {
        return morphism_generic([&](int k) { return G.op(k); }, [&](int k) { return G.dst->op(k); },
                                [&](int k) { return G.src->op(k); }, n, Flavor::coend);
    });
}

// -------------------------------------------------------------- evaluation

MultiMap evaluate(const op::Term& t, const AInfAlgebra& A)
{
    return eval_term(t, algebra_binder(A), Region::top);
}

MultiMap evaluate(const op::Term& t, const AInfMorphism& F)
{
    return eval_term(t, morphism_binder(F), Region::bottom);
}

MultiMap evaluate(const op::Term& t, const AInfMorphism& G, const AInfMorphism& F)
{
    require(same_algebra(F.dst, G.src), "evaluate: morphisms are not composable");
    Binder b{[&](op::Gen g, int k, Region r) {
                 if (g == op::Gen::f)
                     return F.op(k);
                 if (g == op::Gen::g)
                     return G.op(k);
                 if (r == Region::top)
                     return F.src->op(k);
                 return r == Region::middle ? F.dst->op(k) : G.dst->op(k);
             },
             F.src->V, Flavor::end};
    return eval_term(t, b, Region::bottom);
}

MultiMap coevaluate(const op::Term& t, const AInfCoalgebra& C)
{
    Binder b{[&C](op::Gen g, int k, Region) {
                 if (g != op::Gen::m)
                     throw std::invalid_argument("unbound generator in a coalgebra term");
                 return C.op(k);
             },
             C.V, Flavor::coend};
    return eval_term(t, b, Region::top);
}

MultiMap coevaluate(const op::Term& t, const CoMorphism& G)
{
    Binder b{[&G](op::Gen g, int k, Region r) {
                 if (g == op::Gen::f)
                     return G.op(k);
                 if (g != op::Gen::m)
                     throw std::invalid_argument("unbound generator in a morphism term");
                 return r == Region::top ? G.dst->op(k) : G.src->op(k);
             },
             G.dst->V, Flavor::coend};
    return eval_term(t, b, Region::bottom);
}

MultiMap evaluate(const op::FormalSum& x, const AInfAlgebra& A)
{
    return eval_sum(x, [&](const op::Term& t) { return evaluate(t, A); });
}

MultiMap evaluate(const op::FormalSum& x, const AInfMorphism& F)
{
    return eval_sum(x, [&](const op::Term& t) { return evaluate(t, F); });
}

MultiMap evaluate(const op::FormalSum& x, const AInfMorphism& G, const AInfMorphism& F)
{
    return eval_sum(x, [&](const op::Term& t) { return evaluate(t, G, F); });
}

// ---------------------------------------------------------------- tensors

Cx tensor_complex(const Cx& V, const Cx& W)
{
    auto T = std::make_shared<FinComplex>();
    int m = W->dim();
    for (int i = 0; i < V->dim(); ++i)
        for (int j = 0; j < m; ++j) {
            T->names.push_back(V->names[i] + "|" + W->names[j]);
            T->degrees.push_back(V->degrees[i] + W->degrees[j]);
            std::map<int, long long> d;
            for (auto [k, c] : V->d[i])
                d[k * m + j] += c;
            for (auto [k, c] : W->d[j])
                d[i * m + k] += sgn(V->degrees[i]) * c;
            std::erase_if(d, [](const auto& e) { return e.second == 0; });
            T->d.push_back(std::move(d));
        }
    return T;
}

MultiMap interleave(const MultiMap& F, const MultiMap& G, const Cx& src, const Cx& dst)
{
    require(F.src.size() == G.src.size() && F.dst.size() == 1 && G.dst.size() == 1, "interleave: shape mismatch");
    int n = static_cast<int>(F.src.size());
    int wdim = G.src.empty() ? 0 : G.src[0]->dim();
    int wout = G.dst[0]->dim();
    MultiMap out = zero_map(power(src, n), {dst}, F.degree + G.degree);
    for (const auto& [xs, vf] : F.entries)
        for (const auto& [ys, vg] : G.entries) {
            long long e = 0, xsum = 0;
            Tuple in(n);
            for (int i = 0; i < n; ++i) {
                int xi = F.src[i]->degrees[xs[i]];
                for (int j = 0; j < i; ++j)
                    e += static_cast<long long>(G.src[j]->degrees[ys[j]]) * xi;
                xsum += xi;
                in[i] = xs[i] * wdim + ys[i];
            }
            e += static_cast<long long>(G.degree) * xsum;
            for (const auto& [ox, cf] : vf)
                for (const auto& [oy, cg] : vg)
                    out.add(in, {ox[0] * wout + oy[0]}, sgn(e) * cf * cg);
        }
    return out;
}

Alg tensor_algebra(const Alg& A, const Alg& B, int cap)
{
    if (cap > A->cap || cap > B->cap)
        throw std::out_of_range("tensor_algebra: cap exceeds a factor's cap");
    auto T = std::make_shared<AInfAlgebra>();
    T->V = tensor_complex(A->V, B->V);
    T->cap = cap;
    for (int n = 2; n <= cap; ++n) {
        MultiMap mn = diag_sum(op::Gen::m, n, [&](const op::Term& a, const op::Term& b) {
            return interleave(evaluate(a, *A), evaluate(b, *B), T->V, T->V);
        });
        if (!mn.zero())
            T->m[n] = std::move(mn);
    }
    Report r = check_stasheff(*T, cap);
    if (!r.ok())
        throw std::logic_error("tensor_algebra: " + r.summary());
    return T;
}

AInfMorphism tensor_morphism(const AInfMorphism& F, const AInfMorphism& G, int cap)
{
    if (cap > F.cap || cap > G.cap)
        throw std::out_of_range("tensor_morphism: cap exceeds a factor's cap");
    AInfMorphism T;
    T.src = tensor_algebra(F.src, G.src, cap);
    T.dst = tensor_algebra(F.dst, G.dst, cap);
    T.cap = cap;
    for (int n = 1; n <= cap; ++n) {
        MultiMap fn = diag_sum(op::Gen::f, n, [&](const op::Term& a, const op::Term& b) {
            return interleave(evaluate(a, F), evaluate(b, G), T.src->V, T.dst->V);
        });
        if (!fn.zero())
            T.f[n] = std::move(fn);
    }
    Report r = check_morphism(T, cap);
    if (!r.ok())
        throw std::logic_error("tensor_morphism: " + r.summary());
    return T;
}

AInfMorphism compose_morphisms(const AInfMorphism& G, const AInfMorphism& F)
{
    if (!same_algebra(F.dst, G.src))
        throw std::invalid_argument("compose_morphisms: codomain and domain differ");
    AInfMorphism H;
    H.src = F.src;
    H.dst = G.dst;
    H.cap = std::min(F.cap, G.cap);
    for (int n = 1; n <= H.cap; ++n) {
        MultiMap hn = zero_map(power(F.src->V, n), {G.dst->V}, n - 1);
        for (const auto& is : compositions(n, 1)) {
            std::vector<MultiMap> fs;
            for (int a : is)
                fs.push_back(F.op(a));
            std::vector<const MultiMap*> ptrs;
            for (const auto& x : fs)
                ptrs.push_back(&x);
            hn.add(full(G.op(static_cast<int>(is.size())), ptrs, Flavor::end), sgn(compositions_epsilon(is)));
        }
        if (!hn.zero())
            H.f[n] = std::move(hn);
    }
    Report r = check_morphism(H, H.cap);
    if (!r.ok())
        throw std::logic_error("compose_morphisms: " + r.summary());
    return H;
}

AInfMorphism identity_morphism(const Alg& A)
{
    AInfMorphism F;
    F.src = A;
    F.dst = A;
    F.cap = A->cap;
    F.f[1] = identity(A->V);
    return F;
}

CoMorphism identity_comorphism(const Coalg& C)
{
    CoMorphism G;
    G.src = C;
    G.dst = C;
    G.cap = C->cap;
    G.g[1] = identity(C->V);
    return G;
}

AInfMorphism pushforward(const Alg& A, const MultiMap& f2, int cap)
{
    if (cap > A->cap)
        throw std::out_of_range("pushforward: cap exceeds the source cap");
    if (f2.degree != 1 || f2.src.size() != 2 || !homogeneous(f2))
        throw std::invalid_argument("pushforward: f2 must be a homogeneous binary map of degree 1");
    auto B = std::make_shared<AInfAlgebra>();
    B->V = A->V;
    B->cap = cap;
    AInfMorphism F;
    F.src = A;
    F.dst = B;
    F.cap = cap;
    F.f[1] = identity(A->V);
    if (!f2.zero())
        F.f[2] = f2;
    // With f_1 = id the term m'_n(f_1, ..., f_1) enters the residual with sign +.
    for (int n = 2; n <= cap; ++n) {
        MultiMap r = morphism_residual(F, n);
        if (!r.zero()) {
            MultiMap mn = zero_map(r.src, r.dst, r.degree);
            mn.add(r, -1);
            B->m[n] = std::move(mn);
        }
    }
    Report rb = check_stasheff(*B, cap);
    Report rf = check_morphism(F, cap);
    if (!rb.ok() || !rf.ok())
        throw std::logic_error("pushforward: " + rb.summary() + ", " + rf.summary());
    return F;
}

// ------------------------------------------------------------- convolution

Cx hom_complex(const Cx& C, const Cx& A)
{
    auto H = std::make_shared<FinComplex>();
    int m = A->dim();
    H->names.resize(C->dim() * m);
    H->degrees.resize(C->dim() * m);
    H->d.resize(C->dim() * m);
    for (int c = 0; c < C->dim(); ++c)
        for (int a = 0; a < m; ++a) {
            int i = c * m + a, deg = A->degrees[a] - C->degrees[c];
            H->names[i] = "[" + C->names[c] + ">" + A->names[a] + "]";
            H->degrees[i] = deg;
            // d phi = d_A phi - (-1)^|phi| phi d_C
            for (auto [b, k] : A->d[a])
                H->d[i][c * m + b] += k;
            for (int c2 = 0; c2 < C->dim(); ++c2) {
                auto it = C->d[c2].find(c);
                if (it != C->d[c2].end())
                    H->d[i][c2 * m + a] -= sgn(deg) * it->second;
            }
            std::erase_if(H->d[i], [](const auto& e) { return e.second == 0; });
        }
    return H;
}

Alg convolution(const Coalg& C, const Alg& A, int cap)
{
    if (cap > C->cap || cap > A->cap)
        throw std::out_of_range("convolution: cap exceeds an input cap");
    auto H = std::make_shared<AInfAlgebra>();
    H->V = hom_complex(C->V, A->V);
    H->cap = cap;
    for (int n = 2; n <= cap; ++n) {
        MultiMap mn = diag_sum(op::Gen::m, n, [&](const op::Term& a, const op::Term& b) {
            return convolve(coevaluate(a, *C), evaluate(b, *A), H->V, H->V);
        });
        if (!mn.zero())
            H->m[n] = std::move(mn);
    }
    Report r = check_stasheff(*H, cap);
    if (!r.ok())
        throw std::logic_error("convolution: " + r.summary());
    return H;
}

AInfMorphism convolution_morphism(const CoMorphism& G, const AInfMorphism& F, const Alg& src, const Alg& dst, int cap)
{
    if (cap > G.cap || cap > F.cap || cap > src->cap || cap > dst->cap)
        throw std::out_of_range("convolution_morphism: cap exceeds an input cap");
    AInfMorphism T;
    T.src = src;
    T.dst = dst;
    T.cap = cap;
    for (int n = 1; n <= cap; ++n) {
        MultiMap fn = diag_sum(op::Gen::f, n, [&](const op::Term& a, const op::Term& b) {
            return convolve(coevaluate(a, G), evaluate(b, F), src->V, dst->V);
        });
        if (!fn.zero())
            T.f[n] = std::move(fn);
    }
    Report r = check_morphism(T, cap);
    if (!r.ok())
        throw std::logic_error("convolution_morphism: " + r.summary());
    return T;
}

Vec mc_residual(const AInfAlgebra& A, const Vec& alpha, int cap)
{
    Vec out;
    for (const auto& [t, c] : alpha)
        for (const auto& [u, cd] : d_tuple({A.V}, t))
            add_vec(out, u, c * cd);
    for (int n = 2; n <= cap; ++n)
        for (const auto& [o, c] : apply_vec(A.op(n), power_vec(alpha, n)))
            add_vec(out, o, sgn(n * (n - 1) / 2) * c);
    return out;
}

Vec mc_transport(const AInfMorphism& F, const Vec& alpha, int cap)
{
    Vec out;
    for (int n = 1; n <= cap; ++n)
        for (const auto& [o, c] : apply_vec(F.op(n), power_vec(alpha, n)))
            add_vec(out, o, sgn(n * (n - 1) / 2) * c);
    return out;
}

// ---------------------------------------------------------------- fixtures

Coalg dual_coalgebra(const Alg& A)
{
    const FinComplex& V = *A->V;
    auto D = std::make_shared<FinComplex>();
    D->d.resize(V.dim());
    for (int i = 0; i < V.dim(); ++i) {
        D->names.push_back(V.names[i] + "*");
        D->degrees.push_back(-V.degrees[i]);
    }
    for (int i = 0; i < V.dim(); ++i)
        for (auto [j, c] : V.d[i])
            D->d[j][i] += c;
    D->validate();
    auto C = std::make_shared<AInfCoalgebra>();
    C->V = D;
    C->cap = A->cap;
    for (int n = 2; n <= A->cap; ++n) {
        MultiMap cn = zero_map({D}, power(D, n), n - 2);
        for (const auto& [in, v] : A->op(n).entries)
            for (const auto& [o, c] : v) {
                long long e = 0;
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j)
                        e += static_cast<long long>(V.degrees[in[i]]) * V.degrees[in[j]];
                cn.add(o, in, sgn(e + n * (n - 1) / 2) * c);
            }
        if (!cn.zero())
            C->c[n] = std::move(cn);
    }
    Report r = check_stasheff(*C, C->cap);
    if (!r.ok())
        throw std::logic_error("dual_coalgebra: " + r.summary());
    return C;
}

Alg fixture_algebra()
{
    auto V = std::make_shared<FinComplex>(make_complex({"x", "y", "z"}, {0, 0, 1}));
    V->validate();
    auto A = std::make_shared<AInfAlgebra>();
    A->V = V;
    A->cap = 5;
    A->m[2] = zero_map(power(V, 2), {V}, 0);
    A->m[2].add({0, 0}, {1}, 1);
    A->m[3] = zero_map(power(V, 3), {V}, 1);
    A->m[3].add({0, 0, 0}, {2}, 1);
    Report r = check_stasheff(*A, A->cap);
    if (!r.ok())
        throw std::logic_error("fixture algebra: " + r.summary());
    return A;
}

Alg strict_algebra()
{
    auto V = std::make_shared<FinComplex>(make_complex({"1", "a", "b"}, {0, 1, 0}));
    V->d[1][2] = 1;
    V->validate();
    auto A = std::make_shared<AInfAlgebra>();
    A->V = V;
    A->cap = 5;
    A->m[2] = zero_map(power(V, 2), {V}, 0);
    for (int i = 0; i < 3; ++i) {
        A->m[2].add({0, i}, {i}, 1);
        if (i)
            A->m[2].add({i, 0}, {i}, 1);
    }
    Report r = check_stasheff(*A, A->cap);
    if (!r.ok())
        throw std::logic_error("strict algebra: " + r.summary());
    return A;
}

Coalg fixture_coalgebra() { return dual_coalgebra(fixture_algebra()); }

Alg dual_number_algebra()
{
    auto V = std::make_shared<FinComplex>(make_complex({"1", "t", "w"}, {0, -1, -2}));
    V->d[1][2] = 1;
    V->validate();
    auto A = std::make_shared<AInfAlgebra>();
    A->V = V;
    A->cap = 5;
    A->m[2] = zero_map(power(V, 2), {V}, 0);
    for (int i = 0; i < 3; ++i) {
        A->m[2].add({0, i}, {i}, 1);
        if (i)
            A->m[2].add({i, 0}, {i}, 1);
    }
    A->m[2].add({1, 1}, {2}, 1);
    Report r = check_stasheff(*A, A->cap);
    if (!r.ok())
        throw std::logic_error("dual number algebra: " + r.summary());
    return A;
}

std::pair<AInfMorphism, AInfMorphism> fixture_morphisms()
{
    Alg S = strict_algebra();
    MultiMap f2 = zero_map(power(S->V, 2), {S->V}, 1);
    f2.add({0, 0}, {1}, 1);
    AInfMorphism F = pushforward(S, f2, 4);
    MultiMap g2 = zero_map(power(S->V, 2), {S->V}, 1);
    g2.add({2, 0}, {1}, 1);
    AInfMorphism G = pushforward(F.dst, g2, 4);
    return {F, G};
}

MCFixture mc_fixture(int cap)
{
    MCFixture x;
    x.C = dual_coalgebra(dual_number_algebra());
    x.F = fixture_morphisms().first;
    x.source = convolution(x.C, x.F.src, cap);
    x.target = convolution(x.C, x.F.dst, cap);
    x.transport = convolution_morphism(identity_comorphism(x.C), x.F, x.source, x.target, cap);
    int t = x.C->V->index("t*"), one = x.F.src->V->index("1");
    x.alpha[{t * x.F.src->V->dim() + one}] = -1;
    return x;
}

Witness functoriality_witness(const AInfMorphism& F1, const AInfMorphism& G1, const AInfMorphism& F2,
                              const AInfMorphism& G2, int arity)
{
    Witness w;
    w.arity = arity;
    w.lhs = compose_morphisms(tensor_morphism(G1, G2, arity), tensor_morphism(F1, F2, arity)).op(arity);
    w.rhs = tensor_morphism(compose_morphisms(G1, F1), compose_morphisms(G2, F2), arity).op(arity);
    MultiMap diff = w.lhs;
    diff.add(w.rhs, -1);
    w.differing = diff.support();
    return w;
}

}  // namespace mdiag::alg
