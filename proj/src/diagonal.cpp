#include "mdiag/diagonal.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <stdexcept>
#include <thread>

namespace mdiag {

std::vector<IndexPair> d_pairs(int n)
{
    if (n < 1)
        throw std::invalid_argument("d_pairs: arity must be positive");
    if (n > 30)
        throw std::invalid_argument("d_pairs: arity too large");
    std::vector<IndexPair> out;
    std::uint32_t full = ((1u << (n + 1)) - 1u) & ~1u;
    for (std::uint32_t I = 2; I <= full; I += 2) {
        if ((I & ~full) != 0)
            continue;
        for (std::uint32_t J = 2; J <= full; J += 2) {
            if ((J & ~full) != 0 || (I & J) != 0 || std::popcount(I) != std::popcount(J))
                continue;
            std::uint32_t u = I | J;
            std::uint32_t low = u & (~u + 1u);
            if ((low & I) == 0)
                continue;
            out.push_back({I, J});
        }
    }
    return out;
}

std::vector<std::uint32_t> blue_sets(const Nesting& N)
{
    std::vector<std::uint32_t> out;
    for (const auto& x : N.nests)
        if (x.color == Color::blue)
            out.push_back(x.mask());
    return out;
}

std::vector<std::uint32_t> q_sets(const Nesting& N)
{
    std::uint32_t core = 0;
    std::vector<std::uint32_t> reds;
    for (const auto& x : N.nests) {
        if (x.color == Color::blue || x.color == Color::purple)
            core |= x.mask();
        else if (x.color == Color::red)
            reds.push_back(x.mask());
    }
    std::vector<std::uint32_t> out;
    std::size_t k = reds.size();
    for (std::uint64_t sub = 0; sub < (1ull << k); ++sub) {
        std::uint32_t u = core;
        for (std::size_t a = 0; a < k; ++a)
            if ((sub >> a) & 1u)
                u |= reds[a];
        out.push_back(u);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ImageMasks image_masks(const Nesting& N, const std::vector<IndexPair>& D)
{
    if (static_cast<int>(D.size()) > ImageMasks::words * 64)
        throw std::invalid_argument("arity too large for the image test");
    ImageMasks m;
    auto blues = blue_sets(N);
    auto qs = q_sets(N);
    std::uint32_t top = 1u << N.n;
    for (auto& q : qs)
        q |= top;
    for (std::size_t k = 0; k < D.size(); ++k) {
        const auto [I, J] = D[k];
        bool l = false, r = false;
        for (auto b : blues) {
            int a = std::popcount(b & I), c = std::popcount(b & J);
            l = l || a > c;
            r = r || a < c;
        }
        for (auto q : qs) {
            int a = std::popcount(q & I), c = std::popcount(q & J);
            l = l || a > c;
            r = r || a < c;
        }
        if (l)
            m.left[k >> 6] |= 1ull << (k & 63);
        if (r)
            m.right[k >> 6] |= 1ull << (k & 63);
    }
    return m;
}

bool masks_cover(const ImageMasks& a, const ImageMasks& b, int npairs)
{
    int full = npairs >> 6;
    for (int w = 0; w < full; ++w)
        if ((a.left[w] | b.right[w]) != ~0ull)
            return false;
    int rest = npairs & 63;
    if (rest) {
        std::uint64_t want = (1ull << rest) - 1ull;
        if (((a.left[full] | b.right[full]) & want) != want)
            return false;
    }
    return true;
}

bool in_image_mult(const Nesting& N, const Nesting& M)
{
    if (N.n != M.n || N.kind != Kind::mult || M.kind != Kind::mult)
        throw std::invalid_argument("in_image_mult: need two colored faces of the same arity");
    auto D = d_pairs(N.n);
    return masks_cover(image_masks(N, D), image_masks(M, D), static_cast<int>(D.size()));
}

bool in_image_assoc(const Nesting& N, const Nesting& M, const GoodVector& v)
{
    if (N.n != M.n || N.kind != Kind::assoc || M.kind != Kind::assoc)
        throw std::invalid_argument("in_image_assoc: need two uncolored faces of the same arity");
    Weight w = standard_weight(N.n);
    return tamari_leq(top_vertex(N, w, v), bottom_vertex(M, w, v));
}

bool in_image_assoc(const Nesting& N, const Nesting& M) { return in_image_assoc(N, M, good_vector(N.n - 1)); }

bool in_image(const Nesting& N, const Nesting& M)
{
    return N.kind == Kind::mult ? in_image_mult(N, M) : in_image_assoc(N, M);
}

int polytope_dim(Kind k, int n) { return k == Kind::mult ? n - 1 : n - 2; }

std::vector<std::vector<int>> orientation_rows(const Nesting& N)
{
    // Vertices of the tree bottom to top, left to right: nests by depth,
    // then by position.  A blue nest directly above the cut sits one level
    // higher, over its unary purple vertex.
    auto depth = [&](int j) {
        int d = 0;
        bool above = N.nests[j].color == Color::blue;
        for (const auto& x : N.nests)
            if (x.contains(N.nests[j]) && !x.same_edges(N.nests[j])) {
                ++d;
                above = above && x.color == Color::red;
            }
        return d + (above ? 1 : 0);
    };
    std::vector<int> edges = admissible_edges(N);
    std::stable_sort(edges.begin(), edges.end(), [&](int a, int b) {
        int ja = N.minimal_nest(a), jb = N.minimal_nest(b);
        return std::make_pair(depth(ja), N.nests[ja].lo) < std::make_pair(depth(jb), N.nests[jb].lo);
    });
    std::vector<std::vector<int>> rows;
    for (int e : edges) {
        std::vector<int> r(N.n, 0);
        int j = N.minimal_nest(e);
        if (N.kind == Kind::mult && N.nests[j].color == Color::purple) {
            r[e] = -1;
        }
        else {
            r[N.own_edges(j)[0]] += 1;
            r[e] -= 1;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

int det_sign(std::vector<std::vector<Rational>> a)
{
    int n = static_cast<int>(a.size()), s = 1;
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && a[p][c] == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            s = -s;
        }
        if (a[c][c] < 0)
            s = -s;
        for (int r = c + 1; r < n; ++r) {
            if (a[r][c] == 0)
                continue;
            Rational f = a[r][c] / a[c][c];
            for (int k = c; k < n; ++k)
                a[r][k] -= f * a[c][k];
        }
    }
    return s;
}

}  // namespace

int sign_pair(const Nesting& N, const Nesting& M)
{
    if (N.n != M.n || N.kind != M.kind)
        throw std::invalid_argument("sign_pair: arity or kind mismatch");
    int top = polytope_dim(N.kind, N.n);
    if (N.dim() + M.dim() != top)
        throw std::invalid_argument("sign_pair: dimensions are not complementary");
    // Columns are the edges; for K_n the first coordinate is dropped, which
    // turns the top basis e_1 - e_{j+1} into -e_{j+1}.
    int first = N.kind == Kind::assoc ? 2 : 1;
    std::vector<std::vector<Rational>> a;
    for (const auto* X : {&N, &M})
        for (const auto& r : orientation_rows(*X)) {
            std::vector<Rational> row;
            for (int e = first; e < N.n; ++e)
                row.push_back(r[e]);
            a.push_back(std::move(row));
        }
    int d = det_sign(std::move(a));
    if (d == 0)
        throw std::logic_error("orientation bases of " + to_string(N) + " (x) " + to_string(M)
                               + " are linearly dependent");
    return (top % 2 == 0) ? d : -d;
}

std::optional<int> lemma_sign(const Nesting& N, const Nesting& M)
{
    if (N.n != M.n || N.kind != M.kind)
        throw std::invalid_argument("lemma_sign: arity or kind mismatch");
    int top = polytope_dim(N.kind, N.n);
    if (N.dim() + M.dim() != top)
        throw std::invalid_argument("lemma_sign: dimensions are not complementary");
    bool assoc = N.kind == Kind::assoc;
    struct Edge {
        int e;
        int own_min;
        bool mono;
    };
    auto info = [&](const Nesting& X) {
        std::vector<Edge> out;
        for (int e : admissible_edges(X)) {
            int j = X.minimal_nest(e);
            out.push_back({e, X.own_edges(j)[0], assoc || X.nests[j].color != Color::purple});
        }
        return out;
    };
    auto a = info(N), b = info(M);
    auto find = [](const std::vector<Edge>& xs, int e) -> const Edge* {
        for (const auto& x : xs)
            if (x.e == e)
                return &x;
        return nullptr;
    };
    int shared = 0;
    std::vector<int> sigma;
    // The row sharing its pivot with the other factor moves to the pivot of
    // its own-edge minimum: the larger one when both are monochrome, the
    // monochrome one otherwise.
    auto value = [&](const Edge& x, const Edge* y) {
        int v = x.e;
        if (y) {
            if (x.mono && y->mono) {
                if (x.own_min > y->own_min)
                    v = x.own_min;
            }
            else if (x.mono) {
                v = x.own_min;
            }
        }
        return assoc ? v - 1 : v;
    };
    for (const auto& x : a) {
        const Edge* y = find(b, x.e);
        shared += y != nullptr;
        sigma.push_back(value(x, y));
    }
    for (const auto& x : b)
        sigma.push_back(value(x, find(a, x.e)));
    std::vector<char> seen(top + 1, 0);
    for (int s : sigma) {
        if (s < 1 || s > top || seen[s])
            return std::nullopt;
        seen[s] = 1;
    }
    int inv = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        for (std::size_t j = i + 1; j < sigma.size(); ++j)
            inv += sigma[i] > sigma[j];
    return ((inv + shared) % 2) ? -1 : 1;
}

Filter filter_of_name(const std::string& s)
{
    if (s == "all")
        return Filter::all;
    if (s == "complementary")
        return Filter::complementary;
    if (s == "vertices")
        return Filter::vertices;
    throw std::invalid_argument("unknown filter '" + s + "'");
}

namespace {

// Indices of tp and bm (in the Tamari poset) for every face in the list.
struct Extremes {
    std::vector<int> tp, bm;
};

Extremes extremes(const std::vector<Nesting>& faces, const TamariPoset& P, const GoodVector& v)
{
    Weight w = standard_weight(P.arity());
    const auto& atoms = P.vertices();
    std::vector<Rational> val;
    for (const auto& s : atoms)
        val.push_back(dot(vertex_point(s, w), v));
    Extremes ex;
    for (const auto& F : faces) {
        int t = -1, b = -1;
        bool tie_t = false, tie_b = false;
        for (int i = 0; i < static_cast<int>(atoms.size()); ++i) {
            if (!face_leq(atoms[i], F))
                continue;
            if (t < 0 || val[i] > val[t]) {
                t = i;
                tie_t = false;
            }
            else if (val[i] == val[t]) {
                tie_t = true;
            }
            if (b < 0 || val[i] < val[b]) {
                b = i;
                tie_b = false;
            }
            else if (val[i] == val[b]) {
                tie_b = true;
            }
        }
        if (tie_t || tie_b || t < 0)
            throw std::runtime_error("orientation vector is not generic on face " + to_string(F));
        ex.tp.push_back(t);
        ex.bm.push_back(b);
    }
    return ex;
}

template <class F>
void parallel_for(int count, int jobs, F&& body)
{
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i)
            body(i, 0);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&, t] {
            for (int i = t; i < count; i += jobs)
                body(i, t);
        });
    for (auto& th : pool)
        th.join();
}

}  // namespace

std::vector<SignedPair> diagonal_pairs(Kind k, int n, Filter f, bool signed_pairs, int jobs)
{
    if (signed_pairs && f != Filter::complementary)
        throw std::invalid_argument("signs are defined for complementary pairs only");
    auto faces = enumerate_faces(k, n);
    int top = polytope_dim(k, n);
    int F = static_cast<int>(faces.size());
    std::vector<ImageMasks> masks;
    Extremes ex;
    const TamariPoset* P = nullptr;
    int npairs = 0;
    if (k == Kind::mult) {
        auto D = d_pairs(n);
        npairs = static_cast<int>(D.size());
        masks.resize(F);
        parallel_for(F, jobs, [&](int i, int) { masks[i] = image_masks(faces[i], D); });
    }
    else {
        P = &tamari_poset(k, n);
        ex = extremes(faces, *P, good_vector(n - 1));
    }
    std::vector<std::vector<SignedPair>> rows(F);
    parallel_for(F, jobs, [&](int i, int) {
        for (int j = 0; j < F; ++j) {
            int di = faces[i].dim(), dj = faces[j].dim();
            if (f == Filter::complementary && di + dj != top)
                continue;
            if (f == Filter::vertices && (di != 0 || dj != 0))
                continue;
            bool in = k == Kind::mult ? masks_cover(masks[i], masks[j], npairs) : P->leq(ex.tp[i], ex.bm[j]);
            if (!in)
                continue;
            SignedPair sp{faces[i], faces[j], 0};
            if (signed_pairs)
                sp.sign = sign_pair(faces[i], faces[j]);
            rows[i].push_back(std::move(sp));
        }
    });
    std::vector<SignedPair> out;
    for (auto& r : rows)
        for (auto& sp : r)
            out.push_back(std::move(sp));
    return out;
}

std::vector<SignedPair> tp_bm_pairs(Kind k, int n, const GoodVector& v)
{
    auto faces = enumerate_faces(k, n);
    const auto& P = tamari_poset(k, n);
    auto ex = extremes(faces, P, v);
    int top = polytope_dim(k, n);
    std::vector<SignedPair> out;
    for (std::size_t i = 0; i < faces.size(); ++i)
        for (std::size_t j = 0; j < faces.size(); ++j)
            if (faces[i].dim() + faces[j].dim() == top && P.leq(ex.tp[i], ex.bm[j]))
                out.push_back({faces[i], faces[j], 0});
    return out;
}

std::vector<CountRow> counts(Kind k, int max_dim, int jobs)
{
    std::vector<CountRow> out;
    for (int d = 0; d <= max_dim; ++d) {
        int n = k == Kind::mult ? d + 1 : d + 2;
        auto faces = enumerate_faces(k, n);
        int F = static_cast<int>(faces.size());
        std::vector<std::vector<int>> by_dim(d + 1);
        for (int i = 0; i < F; ++i)
            by_dim[faces[i].dim()].push_back(i);
        std::vector<std::uint64_t> comp(std::max(1, jobs), 0), vert(std::max(1, jobs), 0);
        if (k == Kind::mult) {
            auto D = d_pairs(n);
            int np = static_cast<int>(D.size());
            std::vector<ImageMasks> masks(F);
            parallel_for(F, jobs, [&](int i, int) { masks[i] = image_masks(faces[i], D); });
            parallel_for(F, jobs, [&](int i, int t) {
                int di = faces[i].dim();
                for (int j : by_dim[d - di])
                    comp[t] += masks_cover(masks[i], masks[j], np);
                if (di == 0)
                    for (int j : by_dim[0])
                        vert[t] += masks_cover(masks[i], masks[j], np);
            });
        }
        else {
            const auto& P = tamari_poset(k, n);
            auto ex = extremes(faces, P, good_vector(n - 1));
            parallel_for(F, jobs, [&](int i, int t) {
                int di = faces[i].dim();
                for (int j : by_dim[d - di])
                    comp[t] += P.leq(ex.tp[i], ex.bm[j]);
                if (di == 0)
                    for (int j : by_dim[0])
                        vert[t] += P.leq(ex.tp[i], ex.bm[j]);
            });
        }
        CountRow row;
        row.dim = d;
        for (auto c : comp)
            row.complementary += c;
        for (auto c : vert)
            row.vertex_pairs += c;
        out.push_back(row);
    }
    return out;
}

std::vector<Cell> subdivision(int n)
{
    if (n < 1)
        throw std::invalid_argument("subdivision: arity must be positive");
    Weight w = standard_weight(n);
    std::vector<Cell> out;
    std::map<Nesting, std::vector<RatPoint>> verts;
    auto vertices_of = [&](const Nesting& F) -> const std::vector<RatPoint>& {
        auto it = verts.find(F);
        if (it != verts.end())
            return it->second;
        std::vector<RatPoint> ps;
        for (const auto& s : refinements(F))
            ps.push_back(forcey_loday_point(s, w));
        return verts.emplace(F, std::move(ps)).first->second;
    };
    for (auto& sp : diagonal_pairs(Kind::mult, n, Filter::complementary, true)) {
        Cell c;
        const auto& a = vertices_of(sp.left);
        const auto& b = vertices_of(sp.right);
        for (const auto& u : a)
            for (const auto& v : b) {
                RatPoint m(u.size());
                for (std::size_t i = 0; i < u.size(); ++i)
                    m[i] = (u[i] + v[i]) / 2;
                c.vertices.push_back(std::move(m));
            }
        std::sort(c.vertices.begin(), c.vertices.end());
        c.vertices.erase(std::unique(c.vertices.begin(), c.vertices.end()), c.vertices.end());
        c.pair = std::move(sp);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace mdiag
