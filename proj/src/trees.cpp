#include "mdiag/trees.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>
#include <sstream>

namespace mdiag {

char color_char(Color c)
{
    switch (c) {
    case Color::blue: return 'b';
    case Color::red: return 'r';
    case Color::purple: return 'p';
    default: return '-';
    }
}

Color color_of_char(char c)
{
    switch (c) {
    case 'b': return Color::blue;
    case 'r': return Color::red;
    case 'p': return Color::purple;
    default: throw std::invalid_argument(std::string("unknown color '") + c + "'");
    }
}

std::string kind_name(Kind k) { return k == Kind::assoc ? "assoc" : "mult"; }

Kind kind_of_name(std::string_view s)
{
    if (s == "assoc" || s == "K")
        return Kind::assoc;
    if (s == "mult" || s == "J")
        return Kind::mult;
    throw std::invalid_argument("unknown polytope kind '" + std::string(s) + "'");
}

int Nesting::mono_count() const
{
    int c = 0;
    for (const auto& x : nests)
        c += is_mono(x.color);
    return c;
}

int Nesting::dim() const
{
    if (kind == Kind::mult)
        return (n - 1) - mono_count();
    return (n - 1) - static_cast<int>(nests.size());
}

int Nesting::minimal_nest(int e) const
{
    int best = -1;
    for (int j = 0; j < static_cast<int>(nests.size()); ++j)
        if (nests[j].has_edge(e) && (best < 0 || nests[j].size() < nests[best].size()))
            best = j;
    return best;
}

std::vector<int> Nesting::own_edges(int j) const
{
    std::vector<int> out;
    for (int e = nests[j].lo; e <= nests[j].hi; ++e)
        if (minimal_nest(e) == j)
            out.push_back(e);
    return out;
}

void Nesting::normalize()
{
    std::sort(nests.begin(), nests.end(), [](const Nest& a, const Nest& b) {
        if (a.size() != b.size())
            return a.size() > b.size();
        return a.lo < b.lo;
    });
}

int Tree::leaves() const
{
    if (is_leaf())
        return 1;
    int s = 0;
    for (const auto& c : children)
        s += c.leaves();
    return s;
}

int Tree::internal_count() const
{
    if (is_leaf())
        return 0;
    int s = 1;
    for (const auto& c : children)
        s += c.internal_count();
    return s;
}

Tree Tree::corolla(int k, Color c)
{
    Tree t;
    t.color = c;
    t.children.assign(k, Tree::leaf());
    return t;
}

namespace {

struct TreeParser {
    std::string_view s;
    std::size_t pos = 0;

    void skip()
    {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t'))
            ++pos;
    }

    Tree parse()
    {
        skip();
        if (pos >= s.size())
            throw ParseError("unexpected end of input", pos);
        char c = s[pos];
        if (c == '*') {
            ++pos;
            return Tree::leaf();
        }
        Tree t;
        if (c == 'b' || c == 'r' || c == 'p') {
            t.color = color_of_char(c);
            ++pos;
            skip();
            if (pos >= s.size() || s[pos] != '(')
                throw ParseError("expected '(' after color letter", pos);
        }
        else if (c != '(') {
            throw ParseError(std::string("unexpected character '") + c + "'", pos);
        }
        std::size_t open = pos;
        ++pos;
        for (;;) {
            skip();
            if (pos >= s.size())
                throw ParseError("unbalanced '('", open);
            if (s[pos] == ')') {
                ++pos;
                break;
            }
            t.children.push_back(parse());
        }
        if (t.children.empty())
            throw ParseError("empty node", open);
        return t;
    }
};

void to_string_rec(const Tree& t, std::string& out)
{
    if (t.is_leaf()) {
        out += '*';
        return;
    }
    if (t.color != Color::none)
        out += color_char(t.color);
    out += '(';
    for (const auto& c : t.children)
        to_string_rec(c, out);
    out += ')';
}

void collect_nests(const Tree& t, Kind k, int& next_leaf, std::vector<Nest>& out)
{
    if (t.is_leaf()) {
        ++next_leaf;
        return;
    }
    int first = next_leaf;
    for (const auto& c : t.children)
        collect_nests(c, k, next_leaf, out);
    int last = next_leaf - 1;
    if (last > first)
        out.push_back({first, last - 1, k == Kind::assoc ? Color::none : t.color});
}

// Builds the vertex whose nest is N.nests[j], covering leaves lo..hi.
Tree build_vertex(const Nesting& N, int j, int lo, int hi)
{
    Tree t;
    t.color = N.nests[j].color;
    int leaf = lo;
    while (leaf <= hi) {
        int child = -1;
        for (int c = 0; c < static_cast<int>(N.nests.size()); ++c) {
            const Nest& x = N.nests[c];
            if (c == j || x.lo != leaf || !N.nests[j].contains(x) || x.same_edges(N.nests[j]))
                continue;
            if (child < 0 || x.size() > N.nests[child].size())
                child = c;
        }
        if (child < 0) {
            t.children.push_back(Tree::leaf());
            ++leaf;
        }
        else {
            t.children.push_back(build_vertex(N, child, leaf, N.nests[child].hi + 1));
            leaf = N.nests[child].hi + 2;
        }
    }
    return t;
}

void validate_mult_rec(const Tree& t, bool blue_only, const Tree& root)
{
    if (t.is_leaf())
        return;
    if (t.children.size() < 2)
        throw std::invalid_argument("vertex of arity 1 in " + to_string(t));
    if (t.color == Color::none)
        throw std::invalid_argument("uncolored vertex in colored tree " + to_string(t));
    if (blue_only && t.color != Color::blue)
        throw std::invalid_argument(std::string(t.color == Color::red ? "red" : "purple")
                                    + " vertex above the cut violates the cut axioms in " + to_string(t)
                                    + " of " + to_string(root));
    bool next = blue_only || t.color != Color::red;
    for (const auto& c : t.children)
        validate_mult_rec(c, next, root);
}

void validate_assoc_rec(const Tree& t)
{
    if (t.is_leaf())
        return;
    if (t.children.size() < 2)
        throw std::invalid_argument("vertex of arity 1 in " + to_string(t));
    if (t.color != Color::none)
        throw std::invalid_argument("colored vertex in planar tree " + to_string(t));
    for (const auto& c : t.children)
        validate_assoc_rec(c);
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

std::vector<Tree> colorings(const Tree& t, bool blue_only)
{
    if (t.is_leaf())
        return {t};
    std::vector<Color> choices;
    if (blue_only)
        choices = {Color::blue};
    else
        choices = {Color::red, Color::purple, Color::blue};
    std::vector<Tree> out;
    for (Color c : choices) {
        bool next = c != Color::red;
        std::vector<Tree> acc(1);
        acc[0].color = c;
        for (const auto& ch : t.children) {
            auto opts = colorings(ch, next);
            std::vector<Tree> nacc;
            for (const auto& a : acc)
                for (const auto& o : opts) {
                    Tree x = a;
                    x.children.push_back(o);
                    nacc.push_back(std::move(x));
                }
            acc = std::move(nacc);
        }
        for (auto& a : acc)
            out.push_back(std::move(a));
    }
    return out;
}

void sort_faces(std::vector<Nesting>& fs)
{
    std::vector<std::pair<std::pair<int, std::string>, Nesting>> keyed;
    keyed.reserve(fs.size());
    for (auto& f : fs)
        keyed.push_back({{f.dim(), to_string(f)}, std::move(f)});
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    fs.clear();
    for (auto& k : keyed)
        fs.push_back(std::move(k.second));
}

void tamari_moves(const Tree& t, bool below_red, Kind k, std::vector<Tree>& out)
{
    if (t.is_leaf())
        return;
    const Tree& l = t.children[0];
    if (!l.is_leaf() && l.color == t.color && (k == Kind::assoc || t.color != Color::purple)) {
        Tree inner;
        inner.color = t.color;
        inner.children = {l.children[1], t.children[1]};
        Tree rot;
        rot.color = t.color;
        rot.children = {l.children[0], inner};
        out.push_back(rot);
    }
    if (k == Kind::mult && t.color == Color::blue && below_red) {
        Tree x = t;
        x.color = Color::red;
        out.push_back(x);
    }
    for (std::size_t c = 0; c < t.children.size(); ++c) {
        std::vector<Tree> sub;
        tamari_moves(t.children[c], t.color == Color::red, k, sub);
        for (auto& s : sub) {
            Tree x = t;
            x.children[c] = std::move(s);
            out.push_back(std::move(x));
        }
    }
}

bool replace_leaf(Tree& t, int& counter, int target, const Tree& v)
{
    if (t.is_leaf()) {
        if (++counter == target) {
            t = v;
            return true;
        }
        return false;
    }
    for (auto& c : t.children)
        if (replace_leaf(c, counter, target, v))
            return true;
    return false;
}

Tree paint(const Tree& t, Color c)
{
    Tree x = t;
    std::function<void(Tree&)> rec = [&](Tree& y) {
        if (y.is_leaf())
            return;
        if (y.color == Color::none)
            y.color = c;
        for (auto& ch : y.children)
            rec(ch);
    };
    rec(x);
    return x;
}

}  // namespace

Tree parse_tree(std::string_view s)
{
    TreeParser p{s};
    Tree t = p.parse();
    p.skip();
    if (p.pos != s.size())
        throw ParseError("trailing characters", p.pos);
    return t;
}

std::string to_string(const Tree& t)
{
    std::string out;
    to_string_rec(t, out);
    return out;
}

std::string to_string(const Nesting& N) { return to_string(tree_of_nesting(N)); }

void validate_tree(const Tree& t, Kind k)
{
    if (k == Kind::assoc) {
        if (t.is_leaf())
            throw std::invalid_argument("associahedron faces need arity at least 2");
        validate_assoc_rec(t);
        return;
    }
    if (t.is_leaf())
        throw std::invalid_argument("bare leaf is not a face; the arity-1 face is p(*)");
    if (t.children.size() == 1) {
        if (t.color == Color::purple && t.children[0].is_leaf())
            return;
        throw std::invalid_argument("vertex of arity 1 in " + to_string(t));
    }
    validate_mult_rec(t, false, t);
}

void validate_nesting(const Nesting& N)
{
    if (N.n < 1 || (N.kind == Kind::assoc && N.n < 2))
        throw std::invalid_argument("arity out of range");
    if (N.n > 31)
        throw std::invalid_argument("arity above 31 is not supported");
    bool trivial = false;
    for (std::size_t a = 0; a < N.nests.size(); ++a) {
        const Nest& x = N.nests[a];
        if (x.lo < 1 || x.hi > N.n - 1 || x.lo > x.hi)
            throw std::invalid_argument("nest edges out of range");
        if (x.lo == 1 && x.hi == N.n - 1)
            trivial = true;
        if (N.kind == Kind::assoc && x.color != Color::none)
            throw std::invalid_argument("colored nest in an uncolored nesting");
        if (N.kind == Kind::mult && x.color == Color::none)
            throw std::invalid_argument("uncolored nest in a colored nesting");
        for (std::size_t b = a + 1; b < N.nests.size(); ++b) {
            const Nest& y = N.nests[b];
            auto name = [&](const Nest& z) {
                return "{" + std::to_string(z.lo) + ".." + std::to_string(z.hi) + "}";
            };
            if (x.same_edges(y))
                throw std::invalid_argument("repeated nest " + name(x));
            bool nested = x.contains(y) || y.contains(x);
            bool apart = x.hi + 1 < y.lo || y.hi + 1 < x.lo;
            if (!nested && !apart)
                throw std::invalid_argument("incompatible nests " + name(x) + " and " + name(y));
            if (N.kind == Kind::mult && nested) {
                const Nest& big = x.contains(y) ? x : y;
                const Nest& small = x.contains(y) ? y : x;
                if (big.color != Color::red && small.color != Color::blue)
                    throw std::invalid_argument("nest " + name(small) + " inside " + name(big)
                                                + " must be blue");
                if (small.color != Color::blue && big.color != Color::red)
                    throw std::invalid_argument("nest " + name(big) + " containing " + name(small)
                                                + " must be red");
            }
        }
    }
    if (N.n >= 2 && !trivial)
        throw std::invalid_argument("missing trivial nest");
}

Nesting nesting_of_tree(const Tree& t, Kind k)
{
    validate_tree(t, k);
    Nesting N;
    N.kind = k;
    N.n = t.leaves();
    int next = 1;
    collect_nests(t, k, next, N.nests);
    N.normalize();
    return N;
}

Tree tree_of_nesting(const Nesting& N)
{
    if (N.n == 1) {
        Tree t;
        t.color = Color::purple;
        t.children = {Tree::leaf()};
        return t;
    }
    int trivial = -1;
    for (int j = 0; j < static_cast<int>(N.nests.size()); ++j)
        if (N.nests[j].lo == 1 && N.nests[j].hi == N.n - 1)
            trivial = j;
    if (trivial < 0)
        throw std::invalid_argument("missing trivial nest");
    return build_vertex(N, trivial, 1, N.n);
}

Nesting parse_face(std::string_view s)
{
    Tree t = parse_tree(s);
    bool colored = false;
    std::function<void(const Tree&)> scan = [&](const Tree& x) {
        if (!x.is_leaf() && x.color != Color::none)
            colored = true;
        for (const auto& c : x.children)
            scan(c);
    };
    scan(t);
    return nesting_of_tree(t, colored ? Kind::mult : Kind::assoc);
}

Nesting parse_face(std::string_view s, Kind k) { return nesting_of_tree(parse_tree(s), k); }

std::vector<Tree> planar_trees(int n)
{
    if (n < 1)
        throw std::invalid_argument("arity must be positive");
    std::vector<std::vector<Tree>> memo(n + 1);
    memo[1] = {Tree::leaf()};
    for (int m = 2; m <= n; ++m) {
        std::vector<std::vector<int>> comps;
        std::vector<int> cur;
        compositions(m, 2, cur, comps);
        for (const auto& comp : comps) {
            std::vector<Tree> acc(1);
            for (int part : comp) {
                std::vector<Tree> nacc;
                for (const auto& a : acc)
                    for (const auto& o : memo[part]) {
                        Tree x = a;
                        x.children.push_back(o);
                        nacc.push_back(std::move(x));
                    }
                acc = std::move(nacc);
            }
            for (auto& a : acc)
                memo[m].push_back(std::move(a));
        }
    }
    return memo[n];
}

std::vector<Nesting> enumerate_faces(Kind k, int n)
{
    if (n < 1 || (k == Kind::assoc && n < 2))
        throw std::invalid_argument("arity out of range for " + kind_name(k));
    std::vector<Nesting> out;
    if (k == Kind::mult && n == 1) {
        out.push_back(Nesting{Kind::mult, 1, {}});
        return out;
    }
    for (const auto& t : planar_trees(n)) {
        if (k == Kind::assoc) {
            out.push_back(nesting_of_tree(t, k));
            continue;
        }
        for (const auto& c : colorings(t, false))
            out.push_back(nesting_of_tree(c, k));
    }
    sort_faces(out);
    return out;
}

std::vector<Nesting> enumerate_atomic(Kind k, int n)
{
    auto all = enumerate_faces(k, n);
    std::vector<Nesting> out;
    for (auto& f : all)
        if (f.dim() == 0)
            out.push_back(std::move(f));
    return out;
}

bool face_leq(const Nesting& s, const Nesting& t)
{
    if (s.n != t.n || s.kind != t.kind)
        throw std::invalid_argument("face_leq: arity or kind mismatch");
    for (const auto& x : t.nests) {
        bool found = false;
        for (const auto& y : s.nests)
            if (y.same_edges(x)) {
                found = true;
                break;
            }
        if (!found)
            return false;
    }
    if (s.kind == Kind::assoc)
        return true;
    for (const auto& y : s.nests) {
        int best = -1;
        for (int j = 0; j < static_cast<int>(t.nests.size()); ++j)
            if (t.nests[j].contains(y) && (best < 0 || t.nests[j].size() < t.nests[best].size()))
                best = j;
        if (best < 0)
            return false;
        Color c = t.nests[best].color;
        if (is_mono(c) && y.color != c)
            return false;
    }
    return true;
}

std::vector<Nesting> refinements(const Nesting& F)
{
    std::vector<Nesting> out;
    for (auto& s : enumerate_atomic(F.kind, F.n))
        if (face_leq(s, F))
            out.push_back(std::move(s));
    return out;
}

std::vector<int> admissible_edges(const Nesting& N)
{
    std::vector<int> out;
    for (int j = 0; j < static_cast<int>(N.nests.size()); ++j) {
        auto own = N.own_edges(j);
        bool all = N.kind == Kind::mult && N.nests[j].color == Color::purple;
        for (std::size_t a = all ? 0 : 1; a < own.size(); ++a)
            out.push_back(own[a]);
    }
    return out;
}

std::vector<Nesting> tamari_covers(const Nesting& s)
{
    if (!s.atomic())
        throw std::invalid_argument("tamari order is defined on atomic faces only");
    std::vector<Tree> moved;
    tamari_moves(tree_of_nesting(s), true, s.kind, moved);
    std::vector<Nesting> out;
    for (const auto& t : moved)
        out.push_back(nesting_of_tree(t, s.kind));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TamariPoset::TamariPoset(Kind k, int n) : kind_(k), n_(n), verts_(enumerate_atomic(k, n))
{
    int V = static_cast<int>(verts_.size());
    for (int i = 0; i < V; ++i)
        index_[verts_[i]] = i;
    covers_.resize(V);
    for (int i = 0; i < V; ++i)
        for (const auto& c : tamari_covers(verts_[i]))
            covers_[i].push_back(index_.at(c));
    int W = (V + 63) / 64;
    reach_.assign(V, std::vector<std::uint64_t>(W, 0));
    std::vector<char> done(V, 0);
    std::function<void(int)> visit = [&](int v) {
        if (done[v])
            return;
        reach_[v][v >> 6] |= 1ull << (v & 63);
        for (int w : covers_[v]) {
            visit(w);
            for (int x = 0; x < W; ++x)
                reach_[v][x] |= reach_[w][x];
        }
        done[v] = 1;
    };
    for (int v = 0; v < V; ++v)
        visit(v);
}

int TamariPoset::index_of(const Nesting& s) const
{
    auto it = index_.find(s);
    if (it == index_.end())
        throw std::invalid_argument("not an atomic face of this polytope: " + to_string(s));
    return it->second;
}

bool TamariPoset::leq(const Nesting& s, const Nesting& t) const { return leq(index_of(s), index_of(t)); }

const TamariPoset& tamari_poset(Kind k, int n)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<TamariPoset>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{static_cast<int>(k), n}];
    if (!slot)
        slot = std::make_unique<TamariPoset>(k, n);
    return *slot;
}

bool tamari_leq(const Nesting& s, const Nesting& t)
{
    if (s.n != t.n || s.kind != t.kind)
        throw std::invalid_argument("tamari_leq: arity or kind mismatch");
    if (!s.atomic() || !t.atomic())
        throw std::invalid_argument("tamari order is defined on atomic faces only");
    return tamari_poset(s.kind, s.n).leq(s, t);
}

Tree graft(const Tree& u, int i, const Tree& v)
{
    int n = u.leaves();
    if (i < 1 || i > n)
        throw std::out_of_range("graft position out of range");
    Tree blue = paint(v, Color::blue);
    if (u.children.size() == 1 && u.color == Color::purple)
        return blue;
    for (const auto& c : std::vector<const Tree*>{&v}) {
        std::function<void(const Tree&)> chk = [&](const Tree& x) {
            if (!x.is_leaf() && x.color != Color::none && x.color != Color::blue)
                throw std::invalid_argument("graft: only blue trees can be grafted above");
            for (const auto& ch : x.children)
                chk(ch);
        };
        chk(*c);
    }
    Tree out = u;
    int counter = 0;
    replace_leaf(out, counter, i, blue);
    validate_tree(out, Kind::mult);
    return out;
}

Tree graft_level(const Tree& u, const std::vector<Tree>& vs)
{
    int n = u.leaves();
    if (static_cast<int>(vs.size()) != n)
        throw std::invalid_argument("graft_level: need one tree per leaf");
    std::function<void(const Tree&)> chk = [&](const Tree& x) {
        if (!x.is_leaf() && x.color != Color::none && x.color != Color::red)
            throw std::invalid_argument("graft_level: the base tree must be red");
        for (const auto& ch : x.children)
            chk(ch);
    };
    chk(u);
    Tree out = paint(u, Color::red);
    for (int j = n; j >= 1; --j) {
        Tree v = vs[j - 1];
        if (v.children.size() == 1 && v.color == Color::purple)
            v = Tree::leaf();
        int counter = 0;
        replace_leaf(out, counter, j, v);
    }
    validate_tree(out, Kind::mult);
    return out;
}

std::vector<Corolla> ll_decomposition(const Tree& t)
{
    std::vector<Corolla> out;
    std::deque<const Tree*> queue;
    std::vector<const Tree*> slots{&t};
    queue.push_back(&t);
    while (!queue.empty()) {
        const Tree* v = queue.front();
        queue.pop_front();
        if (v->is_leaf())
            continue;
        auto it = std::find(slots.begin(), slots.end(), v);
        int pos = static_cast<int>(it - slots.begin());
        out.push_back({v->color, static_cast<int>(v->children.size()), out.empty() ? 0 : pos + 1});
        it = slots.erase(it);
        std::vector<const Tree*> kids;
        for (const auto& c : v->children) {
            kids.push_back(&c);
            queue.push_back(&c);
        }
        slots.insert(slots.begin() + pos, kids.begin(), kids.end());
    }
    return out;
}

Tree ll_regraft(const std::vector<Corolla>& cs)
{
    if (cs.empty())
        return Tree::leaf();
    Tree t = Tree::corolla(cs[0].arity, cs[0].color);
    for (std::size_t a = 1; a < cs.size(); ++a) {
        int counter = 0;
        if (!replace_leaf(t, counter, cs[a].position, Tree::corolla(cs[a].arity, cs[a].color)))
            throw std::out_of_range("regraft position out of range");
    }
    return t;
}

}  // namespace mdiag
