#include "mdiag/operad.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <tuple>

#include "mdiag/diagonal.hpp"

namespace mdiag::op {

namespace {

unsigned char byte_of(Gen g, int arity) { return static_cast<unsigned char>((arity << 2) | static_cast<int>(g)); }
Gen kind_of_byte(unsigned char b) { return static_cast<Gen>(b & 3); }
int arity_of_byte(unsigned char b) { return b >> 2; }

int decode_rec(const std::string& code, std::size_t& pos, TTree& t)
{
    if (pos >= code.size())
        throw std::invalid_argument("truncated term code");
    unsigned char b = static_cast<unsigned char>(code[pos++]);
    int id = static_cast<int>(t.nodes.size());
    t.nodes.push_back({kind_of_byte(b), {}, -1});
    int k = arity_of_byte(b);
    for (int c = 0; c < k; ++c) {
        int child = decode_rec(code, pos, t);
        t.nodes[id].ch.push_back(child);
    }
    return id;
}

void encode_rec(const TTree& t, int v, std::string& out)
{
    const Node& n = t.nodes[v];
    out.push_back(static_cast<char>(byte_of(n.kind, static_cast<int>(n.ch.size()))));
    for (int c : n.ch)
        encode_rec(t, c, out);
}

int leaves_rec(const TTree& t, int v)
{
    if (t.nodes[v].kind == Gen::leaf)
        return 1;
    int s = 0;
    for (int c : t.nodes[v].ch)
        s += leaves_rec(t, c);
    return s;
}

int degree_of_tree(const TTree& t)
{
    int d = 0;
    for (const auto& n : t.nodes)
        if (n.kind != Gen::leaf)
            d += gen_degree(n.kind, static_cast<int>(n.ch.size()));
    return d;
}

// Leaves of the tree in left-to-right order.
void leaf_order(const TTree& t, int v, std::vector<int>& out)
{
    if (t.nodes[v].kind == Gen::leaf) {
        out.push_back(v);
        return;
    }
    for (int c : t.nodes[v].ch)
        leaf_order(t, c, out);
}

// A replacement tree for one generator, with local left-levelwise tags.
struct Rep {
    TTree tree;
    int offset = 0;
};

TTree corolla_tree(Gen g, int k)
{
    TTree t;
    t.nodes.push_back({g, {}, 0});
    for (int c = 0; c < k; ++c) {
        t.nodes[0].ch.push_back(static_cast<int>(t.nodes.size()));
        t.nodes.push_back({Gen::leaf, {}, -1});
    }
    return t;
}

TTree tagged(const Term& t)
{
    TTree x = decode(t);
    auto ll = ll_order(x);
    for (std::size_t j = 0; j < ll.size(); ++j)
        x.nodes[ll[j]].tag = static_cast<int>(j);
    return x;
}

// Replaces generator node ll[j] of t by reps[j], grafting the children of
// the node on the leaves of its replacement.
TTree assemble(const TTree& t, const std::vector<int>& ll, const std::vector<Rep>& reps)
{
    std::vector<int> pos(t.nodes.size(), -1);
    for (std::size_t j = 0; j < ll.size(); ++j)
        pos[ll[j]] = static_cast<int>(j);
    TTree out;
    std::function<int(int)> build = [&](int v) -> int {
        if (t.nodes[v].kind == Gen::leaf) {
            int id = static_cast<int>(out.nodes.size());
            out.nodes.push_back({Gen::leaf, {}, -1});
            return id;
        }
        const Rep& r = reps[pos[v]];
        std::vector<int> rl;
        leaf_order(r.tree, r.tree.root, rl);
        if (rl.size() != t.nodes[v].ch.size())
            throw std::logic_error("replacement arity mismatch");
        std::function<int(int)> copy = [&](int u) -> int {
            const Node& rn = r.tree.nodes[u];
            if (rn.kind == Gen::leaf) {
                auto it = std::find(rl.begin(), rl.end(), u);
                return build(t.nodes[v].ch[it - rl.begin()]);
            }
            int id = static_cast<int>(out.nodes.size());
            out.nodes.push_back({rn.kind, {}, r.offset + rn.tag});
            std::vector<int> kids;
            for (int c : rn.ch)
                kids.push_back(copy(c));
            out.nodes[id].ch = kids;
            return id;
        };
        return copy(r.tree.root);
    };
    out.root = build(t.root);
    return out;
}

std::vector<int> tree_degrees_ll(const TTree& t)
{
    std::vector<int> d;
    for (int v : ll_order(t))
        d.push_back(gen_degree(t.nodes[v].kind, static_cast<int>(t.nodes[v].ch.size())));
    return d;
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

int epsilon(const std::vector<int>& is)
{
    int k = static_cast<int>(is.size()), e = 0;
    for (int u = 1; u <= k; ++u)
        e += (k - u) * (1 - is[u - 1]);
    return e;
}

int parity_sign(long long e) { return (e % 2 == 0) ? 1 : -1; }

// Two-level tree: root generator with the given children generators
// (arity 0 means leaf).
Term two_level(Gen root, const std::vector<std::pair<Gen, int>>& kids)
{
    TTree t;
    t.nodes.push_back({root, {}, -1});
    for (auto [g, a] : kids) {
        int id = static_cast<int>(t.nodes.size());
        t.nodes[0].ch.push_back(id);
        if (a == 0) {
            t.nodes.push_back({Gen::leaf, {}, -1});
            continue;
        }
        t.nodes.push_back({g, {}, -1});
        for (int c = 0; c < a; ++c) {
            t.nodes[id].ch.push_back(static_cast<int>(t.nodes.size()));
            t.nodes.push_back({Gen::leaf, {}, -1});
        }
    }
    return encode(t);
}

Term partial(Gen outer, int outer_arity, int pos, Gen inner, int inner_arity)
{
    std::vector<std::pair<Gen, int>> kids(outer_arity, {Gen::leaf, 0});
    kids[pos] = {inner, inner_arity};
    return two_level(outer, kids);
}

}  // namespace

int gen_degree(Gen g, int arity)
{
    switch (g) {
    case Gen::m: return arity - 2;
    case Gen::f:
    case Gen::g: return arity - 1;
    default: return 0;
    }
}

Term leaf_term() { return Term{std::string(1, static_cast<char>(byte_of(Gen::leaf, 0)))}; }

Term generator(Gen g, int arity)
{
    if (g == Gen::m && arity < 2)
        throw std::invalid_argument("m needs arity at least 2");
    if (arity < 1)
        throw std::invalid_argument("generators need positive arity");
    return encode(corolla_tree(g, arity));
}

TTree decode(const Term& t)
{
    TTree x;
    std::size_t pos = 0;
    x.root = decode_rec(t.code, pos, x);
    if (pos != t.code.size())
        throw std::invalid_argument("trailing bytes in term code");
    return x;
}

Term encode(const TTree& t)
{
    Term out;
    encode_rec(t, t.root, out.code);
    return out;
}

std::vector<int> ll_order(const TTree& t)
{
    std::vector<int> out;
    std::deque<int> q{t.root};
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        if (t.nodes[v].kind == Gen::leaf)
            continue;
        out.push_back(v);
        for (int c : t.nodes[v].ch)
            q.push_back(c);
    }
    return out;
}

std::vector<int> preorder(const TTree& t)
{
    std::vector<int> out;
    std::function<void(int)> rec = [&](int v) {
        if (t.nodes[v].kind == Gen::leaf)
            return;
        out.push_back(v);
        for (int c : t.nodes[v].ch)
            rec(c);
    };
    rec(t.root);
    return out;
}

int tree_arity(const TTree& t) { return leaves_rec(t, t.root); }

int koszul_to_ll(const TTree& t, const std::vector<int>& degs)
{
    std::vector<int> seq;
    for (int v : ll_order(t)) {
        int tag = t.nodes[v].tag;
        if (tag < 0 || tag >= static_cast<int>(degs.size()))
            throw std::logic_error("untagged generator");
        if (degs[tag] & 1)
            seq.push_back(tag);
    }
    long long inv = 0;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            inv += seq[i] > seq[j];
    return parity_sign(inv);
}

int arity(const Term& t) { return tree_arity(decode(t)); }
int degree(const Term& t) { return degree_of_tree(decode(t)); }

int degree(const Monomial& m)
{
    int d = 0;
    for (const auto& t : m)
        d += degree(t);
    return d;
}

Sort sort_of(const Term& t)
{
    bool f = false, g = false;
    for (char c : t.code) {
        Gen k = kind_of_byte(static_cast<unsigned char>(c));
        f = f || k == Gen::f;
        g = g || k == Gen::g;
    }
    if (g)
        return Sort::MM;
    return f ? Sort::M : Sort::A;
}

void FormalSum::add(const Monomial& m, long long c)
{
    if (c == 0)
        return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second == 0)
        terms_.erase(it);
}

void FormalSum::add(const FormalSum& o, long long scale)
{
    for (const auto& [m, c] : o.terms_)
        add(m, c * scale);
}

FormalSum FormalSum::operator+(const FormalSum& o) const
{
    FormalSum r = *this;
    r.add(o, 1);
    return r;
}

FormalSum FormalSum::operator-(const FormalSum& o) const
{
    FormalSum r = *this;
    r.add(o, -1);
    return r;
}

FormalSum FormalSum::operator*(long long c) const
{
    FormalSum r;
    r.add(*this, c);
    return r;
}

long long FormalSum::coef(const Monomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
}

// ---------------------------------------------------------------- printing

namespace {

enum class Region { above_f, between, below };

void print_rec(const TTree& t, int v, Sort s, Region reg, std::string& out)
{
    const Node& n = t.nodes[v];
    if (n.kind == Gen::leaf) {
        out += '*';
        return;
    }
    int k = static_cast<int>(n.ch.size());
    Region next = reg;
    if (s == Sort::A) {
        out += '(';
    }
    else if (s == Sort::M) {
        if (n.kind == Gen::f) {
            next = Region::above_f;
            if (k == 1) {
                const Node& c = t.nodes[n.ch[0]];
                if (c.kind == Gen::leaf && v == t.root) {
                    out += "p(*)";
                    return;
                }
                print_rec(t, n.ch[0], s, next, out);
                return;
            }
            out += "p(";
        }
        else {
            out += reg == Region::above_f ? "b(" : "r(";
        }
    }
    else {
        char c = 'b';
        if (n.kind == Gen::f) {
            c = 'f';
            next = Region::above_f;
        }
        else if (n.kind == Gen::g) {
            c = 'h';
            next = Region::between;
        }
        else if (reg == Region::below) {
            c = 'r';
        }
        else if (reg == Region::between) {
            c = 'g';
        }
        out += c;
        out += '(';
    }
    for (int c : n.ch)
        print_rec(t, c, s, next, out);
    out += ')';
}

struct MMParser {
    std::string_view s;
    std::size_t pos = 0;

    void skip()
    {
        while (pos < s.size() && s[pos] == ' ')
            ++pos;
    }

    int parse(TTree& t, Region reg)
    {
        skip();
        if (pos >= s.size())
            throw ParseError("unexpected end of input", pos);
        char c = s[pos];
        int id = static_cast<int>(t.nodes.size());
        if (c == '*') {
            ++pos;
            if (reg != Region::above_f)
                throw ParseError("leaf below the f layer", pos - 1);
            t.nodes.push_back({Gen::leaf, {}, -1});
            return id;
        }
        Gen kind = Gen::m;
        Region next = reg;
        switch (c) {
        case 'b':
            if (reg != Region::above_f)
                throw ParseError("blue vertex below the f layer", pos);
            break;
        case 'g':
            if (reg != Region::between)
                throw ParseError("green vertex outside the middle layer", pos);
            break;
        case 'r':
            if (reg != Region::below)
                throw ParseError("red vertex above the h layer", pos);
            break;
        case 'f':
            if (reg != Region::between)
                throw ParseError("f vertex outside the middle layer", pos);
            kind = Gen::f;
            next = Region::above_f;
            break;
        case 'h':
            if (reg != Region::below)
                throw ParseError("h vertex above another h", pos);
            kind = Gen::g;
            next = Region::between;
            break;
        default: throw ParseError(std::string("unexpected character '") + c + "'", pos);
        }
        ++pos;
        skip();
        if (pos >= s.size() || s[pos] != '(')
            throw ParseError("expected '('", pos);
        std::size_t open = pos++;
        t.nodes.push_back({kind, {}, -1});
        for (;;) {
            skip();
            if (pos >= s.size())
                throw ParseError("unbalanced '('", open);
            if (s[pos] == ')') {
                ++pos;
                break;
            }
            int child = parse(t, next);
            t.nodes[id].ch.push_back(child);
        }
        int k = static_cast<int>(t.nodes[id].ch.size());
        if (k == 0 || (kind == Gen::m && k < 2))
            throw ParseError("vertex arity too small", open);
        return id;
    }
};

Term term_of_tree(const Tree& t, bool mult, Gen top)
{
    TTree out;
    std::function<int(const Tree&, bool)> conv = [&](const Tree& x, bool above) -> int {
        int id = static_cast<int>(out.nodes.size());
        if (!mult || above) {
            if (x.is_leaf()) {
                out.nodes.push_back({Gen::leaf, {}, -1});
                return id;
            }
            out.nodes.push_back({Gen::m, {}, -1});
            std::vector<int> kids;
            for (const auto& c : x.children)
                kids.push_back(conv(c, above));
            out.nodes[id].ch = kids;
            return id;
        }
        if (x.is_leaf() || x.color == Color::blue) {
            out.nodes.push_back({top, {}, -1});
            int c = conv(x, true);
            out.nodes[id].ch = {c};
            return id;
        }
        out.nodes.push_back({x.color == Color::purple ? top : Gen::m, {}, -1});
        bool next = x.color == Color::purple;
        std::vector<int> kids;
        for (const auto& c : x.children)
            kids.push_back(conv(c, next));
        out.nodes[id].ch = kids;
        return id;
    };
    out.root = conv(t, false);
    return encode(out);
}

}  // namespace

std::string to_string(const Term& t)
{
    TTree x = decode(t);
    if (x.nodes[x.root].kind == Gen::leaf)
        return "*";
    std::string out;
    print_rec(x, x.root, sort_of(t), Region::below, out);
    return out;
}

std::string to_string(const Monomial& m)
{
    std::string out;
    for (std::size_t j = 0; j < m.size(); ++j) {
        if (j)
            out += " (x) ";
        out += to_string(m[j]);
    }
    return out;
}

std::string to_string(const FormalSum& x)
{
    if (x.empty())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : x.terms()) {
        long long a = c < 0 ? -c : c;
        if (first)
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        if (a != 1)
            out += std::to_string(a) + " ";
        out += to_string(m);
        first = false;
    }
    return out;
}

Term parse_term(std::string_view s, Sort sort)
{
    if (sort == Sort::MM) {
        MMParser p{s};
        TTree t;
        t.root = p.parse(t, Region::below);
        p.skip();
        if (p.pos != s.size())
            throw ParseError("trailing input", p.pos);
        return encode(t);
    }
    Nesting N = parse_face(s, sort == Sort::A ? Kind::assoc : Kind::mult);
    return term_of_face(N);
}

Term parse_term(std::string_view s)
{
    std::size_t a = s.find_first_not_of(' '), b = s.find_last_not_of(' ');
    if (a != std::string_view::npos && a == b && s[a] == '*')
        return leaf_term();
    for (char c : s)
        if (c == 'f' || c == 'h' || c == 'g')
            return parse_term(s, Sort::MM);
    for (char c : s)
        if (c == 'b' || c == 'r' || c == 'p')
            return parse_term(s, Sort::M);
    return parse_term(s, Sort::A);
}

Monomial parse_monomial(std::string_view s)
{
    static constexpr std::string_view seps[] = {"(x)", "⊗", "|"};
    auto trim = [](std::string_view x) {
        while (!x.empty() && x.front() == ' ')
            x.remove_prefix(1);
        while (!x.empty() && x.back() == ' ')
            x.remove_suffix(1);
        return x;
    };
    Monomial out;
    std::size_t start = 0;
    for (;;) {
        std::size_t cut = std::string_view::npos, len = 0;
        for (auto sep : seps)
            if (std::size_t at = s.find(sep, start); at < cut) {
                cut = at;
                len = sep.size();
            }
        out.push_back(parse_term(trim(s.substr(start, cut == std::string_view::npos ? s.size() - start : cut - start))));
        if (cut == std::string_view::npos)
            break;
        start = cut + len;
    }
    return out;
}

Term term_of_face(const Nesting& N, Gen top)
{
    return term_of_tree(tree_of_nesting(N), N.kind == Kind::mult, top);
}

Nesting face_of_term(const Term& t)
{
    TTree x = decode(t);
    Sort s = sort_of(t);
    if (s == Sort::MM)
        throw std::invalid_argument("three-layer terms are not faces");
    std::function<Tree(int, bool)> conv = [&](int v, bool above) -> Tree {
        const Node& n = x.nodes[v];
        if (n.kind == Gen::leaf)
            return Tree::leaf();
        Tree out;
        if (s == Sort::A || above) {
            out.color = s == Sort::A ? Color::none : Color::blue;
            for (int c : n.ch)
                out.children.push_back(conv(c, above));
            return out;
        }
        if (n.kind == Gen::m) {
            out.color = Color::red;
            for (int c : n.ch)
                out.children.push_back(conv(c, false));
            return out;
        }
        if (n.ch.size() == 1) {
            if (v == x.root && x.nodes[n.ch[0]].kind == Gen::leaf) {
                out.color = Color::purple;
                out.children = {Tree::leaf()};
                return out;
            }
            return conv(n.ch[0], true);
        }
        out.color = Color::purple;
        for (int c : n.ch)
            out.children.push_back(conv(c, true));
        return out;
    };
    return nesting_of_tree(conv(x.root, false), s == Sort::A ? Kind::assoc : Kind::mult);
}

// -------------------------------------------------------------- differential

FormalSum d_generator(Gen g, int n)
{
    FormalSum out;
    if (g == Gen::m) {
        for (int q = 2; q <= n - 1; ++q)
            for (int p = 0; p + q <= n; ++p) {
                int r = n - p - q;
                out.add({partial(Gen::m, p + 1 + r, p, Gen::m, q)}, -parity_sign(p + q * r));
            }
        return out;
    }
    if (g != Gen::f && g != Gen::g)
        throw std::invalid_argument("no differential on a leaf");
    for (int q = 2; q <= n; ++q)
        for (int p = 0; p + q <= n; ++p) {
            int r = n - p - q;
            out.add({partial(g, p + 1 + r, p, Gen::m, q)}, parity_sign(p + q * r));
        }
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(n, 2, cur, comps);
    for (const auto& is : comps) {
        std::vector<std::pair<Gen, int>> kids;
        for (int a : is)
            kids.push_back({g, a});
        out.add({two_level(Gen::m, kids)}, -parity_sign(epsilon(is)));
    }
    return out;
}

namespace {

std::vector<int> degrees_of_reps(const std::vector<Rep>& reps)
{
    std::vector<int> d;
    for (const auto& r : reps)
        for (int v : ll_order(r.tree))
            d.push_back(gen_degree(r.tree.nodes[v].kind, static_cast<int>(r.tree.nodes[v].ch.size())));
    return d;
}

void relayout(std::vector<Rep>& reps)
{
    int off = 0;
    for (auto& r : reps) {
        r.offset = off;
        off += static_cast<int>(ll_order(r.tree).size());
    }
}

Rep corolla_rep(const TTree& t, int v)
{
    return Rep{corolla_tree(t.nodes[v].kind, static_cast<int>(t.nodes[v].ch.size())), 0};
}

}  // namespace

FormalSum differential(const Term& t)
{
    TTree x = decode(t);
    auto ll = ll_order(x);
    FormalSum out;
    int before = 0;
    for (std::size_t j = 0; j < ll.size(); ++j) {
        const Node& n = x.nodes[ll[j]];
        int k = static_cast<int>(n.ch.size());
        FormalSum dg = d_generator(n.kind, k);
        for (const auto& [m, c] : dg.terms()) {
            std::vector<Rep> reps;
            for (std::size_t l = 0; l < ll.size(); ++l)
                reps.push_back(l == j ? Rep{tagged(m[0]), 0} : corolla_rep(x, ll[l]));
            relayout(reps);
            TTree y = assemble(x, ll, reps);
            int s = koszul_to_ll(y, degrees_of_reps(reps));
            out.add({encode(y)}, c * s * parity_sign(before));
        }
        before += gen_degree(n.kind, k);
    }
    return out;
}

FormalSum differential(const FormalSum& x)
{
    FormalSum out;
    for (const auto& [m, c] : x.terms()) {
        int before = 0;
        for (std::size_t j = 0; j < m.size(); ++j) {
            FormalSum d = differential(m[j]);
            for (const auto& [dm, dc] : d.terms()) {
                Monomial y = m;
                y[j] = dm[0];
                out.add(y, c * dc * parity_sign(before));
            }
            before += degree(m[j]);
        }
    }
    return out;
}

// --------------------------------------------------------------- composition

std::pair<int, Term> compose_multi(const Term& x, const std::vector<int>& positions, const std::vector<Term>& ys)
{
    if (positions.size() != ys.size())
        throw std::invalid_argument("positions and terms differ in length");
    TTree a = tagged(x);
    std::vector<int> leaves;
    leaf_order(a, a.root, leaves);
    std::vector<int> degs = tree_degrees_ll(a);
    TTree out = a;
    std::vector<int> order(positions.size());
    for (std::size_t j = 0; j < order.size(); ++j)
        order[j] = static_cast<int>(j);
    int offset = static_cast<int>(degs.size());
    std::vector<int> offsets(ys.size());
    for (std::size_t j = 0; j < ys.size(); ++j) {
        offsets[j] = offset;
        TTree b = decode(ys[j]);
        auto d = tree_degrees_ll(b);
        degs.insert(degs.end(), d.begin(), d.end());
        offset += static_cast<int>(d.size());
    }
    for (std::size_t j = 0; j < ys.size(); ++j) {
        int pos = positions[j];
        if (pos < 1 || pos > static_cast<int>(leaves.size()))
            throw std::out_of_range("composition position out of range");
        TTree b = tagged(ys[j]);
        int base = static_cast<int>(out.nodes.size());
        for (auto nd : b.nodes) {
            for (int& c : nd.ch)
                c += base;
            if (nd.tag >= 0)
                nd.tag += offsets[j];
            out.nodes.push_back(nd);
        }
        // Replace the leaf node by a copy of b's root.
        int leafnode = leaves[pos - 1];
        if (out.nodes[leafnode].kind != Gen::leaf)
            throw std::invalid_argument("leaf grafted twice");
        out.nodes[leafnode] = out.nodes[base + b.root];
        out.nodes[base + b.root] = Node{Gen::leaf, {}, -1};
    }
    int s = koszul_to_ll(out, degs);
    return {s, encode(out)};
}

std::pair<int, Term> compose(const Term& x, int i, const Term& y) { return compose_multi(x, {i}, {y}); }

// ------------------------------------------------------------------ diagonal

namespace {

Term relabel(const Term& t, Gen from, Gen to)
{
    Term out = t;
    for (char& c : out.code) {
        auto b = static_cast<unsigned char>(c);
        if (kind_of_byte(b) == from)
            c = static_cast<char>(byte_of(to, arity_of_byte(b)));
    }
    return out;
}

std::vector<DiagTerm> compute_gen_diag(Gen g, int n)
{
    std::vector<DiagTerm> out;
    if (g == Gen::m) {
        for (const auto& sp : diagonal_pairs(Kind::assoc, n, Filter::complementary, true))
            out.push_back({sp.sign, term_of_face(sp.left), term_of_face(sp.right)});
        return out;
    }
    if (g != Gen::f && g != Gen::g)
        throw std::invalid_argument("no diagonal on a leaf");
    for (const auto& sp : diagonal_pairs(Kind::mult, n, Filter::complementary, true))
        out.push_back({sp.sign, term_of_face(sp.left, g), term_of_face(sp.right, g)});
    return out;
}

struct Partial {
    long long coef = 1;
    std::vector<Rep> a;
    std::vector<Rep> b;
};

int rep_degree(const Rep& r) { return degree_of_tree(r.tree); }

// All ways of applying gd to the tagged tree x.
std::vector<std::tuple<long long, Term, Term>> diag_term(const Term& t, const GenDiag& gd)
{
    TTree x = decode(t);
    auto ll = ll_order(x);
    std::vector<std::tuple<long long, Term, Term>> out;
    if (ll.empty()) {
        out.emplace_back(1, t, t);
        return out;
    }
    std::vector<std::vector<DiagTerm>> opts;
    for (int v : ll)
        opts.push_back(gd(x.nodes[v].kind, static_cast<int>(x.nodes[v].ch.size())));
    Partial cur;
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
        if (j == ll.size()) {
            std::vector<Rep> a = cur.a, b = cur.b;
            relayout(a);
            relayout(b);
            TTree A = assemble(x, ll, a), B = assemble(x, ll, b);
            long long s = koszul_to_ll(A, degrees_of_reps(a)) * koszul_to_ll(B, degrees_of_reps(b));
            long long e = 0;
            for (std::size_t p = 0; p < b.size(); ++p)
                for (std::size_t q = p + 1; q < a.size(); ++q)
                    e += static_cast<long long>(rep_degree(b[p])) * rep_degree(a[q]);
            out.emplace_back(cur.coef * s * parity_sign(e), encode(A), encode(B));
            return;
        }
        for (const auto& o : opts[j]) {
            long long saved = cur.coef;
            cur.coef *= o.coef;
            cur.a.push_back({tagged(o.left), 0});
            cur.b.push_back({tagged(o.right), 0});
            rec(j + 1);
            cur.a.pop_back();
            cur.b.pop_back();
            cur.coef = saved;
        }
    };
    rec(0);
    return out;
}

}  // namespace

const std::vector<DiagTerm>& standard_gen_diag(Gen g, int n)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::vector<DiagTerm>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(static_cast<int>(g), n);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, compute_gen_diag(g, n)).first;
    return it->second;
}

GenDiag standard_diag()
{
    return [](Gen g, int n) { return standard_gen_diag(g, n); };
}

FormalSum diag(const FormalSum& x, const GenDiag& gd, std::size_t factor)
{
    FormalSum out;
    for (const auto& [m, c] : x.terms()) {
        if (factor >= m.size())
            throw std::out_of_range("diagonal factor out of range");
        for (const auto& [s, A, B] : diag_term(m[factor], gd)) {
            Monomial y(m.begin(), m.begin() + factor);
            y.push_back(A);
            y.push_back(B);
            y.insert(y.end(), m.begin() + factor + 1, m.end());
            out.add(y, c * s);
        }
    }
    return out;
}

FormalSum diag(const FormalSum& x, std::size_t factor) { return diag(x, standard_diag(), factor); }

FormalSum tau(const FormalSum& x)
{
    FormalSum out;
    for (const auto& [m, c] : x.terms()) {
        if (m.size() != 2)
            throw std::invalid_argument("tau needs two tensor factors");
        out.add({m[1], m[0]}, c * parity_sign(static_cast<long long>(degree(m[0])) * degree(m[1])));
    }
    return out;
}

// ------------------------------------------------------------ composition map

FormalSum comp_generator(int n)
{
    FormalSum out;
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(n, 1, cur, comps);
    for (const auto& is : comps) {
        std::vector<std::pair<Gen, int>> kids;
        for (int a : is)
            kids.push_back({Gen::f, a});
        out.add({two_level(Gen::g, kids)}, parity_sign(epsilon(is)));
    }
    return out;
}

namespace {

FormalSum comp_term(const Term& t)
{
    TTree x = decode(t);
    auto ll = ll_order(x);
    FormalSum out;
    if (ll.empty()) {
        out.add({t}, 1);
        return out;
    }
    std::vector<std::vector<std::pair<long long, Term>>> opts;
    for (int v : ll) {
        const Node& n = x.nodes[v];
        int k = static_cast<int>(n.ch.size());
        if (n.kind == Gen::g)
            throw std::invalid_argument("composition map applied to a three-layer term");
        std::vector<std::pair<long long, Term>> o;
        if (n.kind == Gen::m)
            o.push_back({1, generator(Gen::m, k)});
        else {
            FormalSum cg = comp_generator(k);
            for (const auto& [m, c] : cg.terms())
                o.push_back({c, m[0]});
        }
        opts.push_back(o);
    }
    std::vector<Rep> reps(ll.size());
    std::function<void(std::size_t, long long)> rec = [&](std::size_t j, long long coef) {
        if (j == ll.size()) {
            std::vector<Rep> r = reps;
            relayout(r);
            TTree y = assemble(x, ll, r);
            out.add({encode(y)}, coef * koszul_to_ll(y, degrees_of_reps(r)));
            return;
        }
        for (const auto& [c, term] : opts[j]) {
            reps[j] = {tagged(term), 0};
            rec(j + 1, coef * c);
        }
    };
    rec(0, 1);
    return out;
}

}  // namespace

FormalSum comp(const FormalSum& x)
{
    FormalSum out;
    for (const auto& [m, c] : x.terms()) {
        std::vector<FormalSum> parts;
        for (const auto& t : m)
            parts.push_back(comp_term(t));
        std::function<void(std::size_t, Monomial&, long long)> rec = [&](std::size_t j, Monomial& cur, long long coef) {
            if (j == parts.size()) {
                out.add(cur, coef);
                return;
            }
            for (const auto& [pm, pc] : parts[j].terms()) {
                cur.push_back(pm[0]);
                rec(j + 1, cur, coef * pc);
                cur.pop_back();
            }
        };
        Monomial cur;
        rec(0, cur, c);
    }
    return out;
}

// ------------------------------------------------------------------- defects

DefectKind defect_kind_of_name(const std::string& s)
{
    if (s == "coassoc_K")
        return DefectKind::coassoc_K;
    if (s == "coassoc_J")
        return DefectKind::coassoc_J;
    if (s == "cocomm_K")
        return DefectKind::cocomm_K;
    if (s == "cocomm_J")
        return DefectKind::cocomm_J;
    if (s == "comp_compat")
        return DefectKind::comp_compat;
    throw std::invalid_argument("unknown defect '" + s + "'");
}

std::string defect_name(DefectKind k)
{
    switch (k) {
    case DefectKind::coassoc_K: return "coassoc_K";
    case DefectKind::coassoc_J: return "coassoc_J";
    case DefectKind::cocomm_K: return "cocomm_K";
    case DefectKind::cocomm_J: return "cocomm_J";
    case DefectKind::comp_compat: return "comp_compat";
    }
    return "?";
}

FormalSum comp_compat_defect(const GenDiag& gd, int n)
{
    FormalSum f = FormalSum::of(generator(Gen::f, n));
    return comp(diag(f, gd)) - diag(comp(f), gd);
}

FormalSum defect(DefectKind k, int n)
{
    switch (k) {
    case DefectKind::coassoc_K:
    case DefectKind::coassoc_J: {
        FormalSum x = diag(FormalSum::of(generator(k == DefectKind::coassoc_K ? Gen::m : Gen::f, n)));
        return diag(x, 1) - diag(x, 0);
    }
    case DefectKind::cocomm_K:
    case DefectKind::cocomm_J: {
        FormalSum x = diag(FormalSum::of(generator(k == DefectKind::cocomm_K ? Gen::m : Gen::f, n)));
        return x - tau(x);
    }
    case DefectKind::comp_compat: return comp_compat_defect(standard_diag(), n);
    }
    return {};
}

// ---------------------------------------------------------------------- basis

namespace {

enum class Layer { a, m_below, mm_below, mm_between, above };

const std::vector<std::string>& layer_codes(Layer l, int n);

void products(Gen g, int k, const std::vector<int>& is, Layer child, std::vector<std::string>& out)
{
    std::string head(1, static_cast<char>(byte_of(g, k)));
    std::function<void(std::size_t, std::string)> rec = [&](std::size_t j, std::string acc) {
        if (j == is.size()) {
            out.push_back(acc);
            return;
        }
        for (const auto& c : layer_codes(child, is[j]))
            rec(j + 1, acc + c);
    };
    rec(0, head);
}

std::vector<std::string> compute_layer(Layer l, int n)
{
    std::vector<std::string> out;
    if (l == Layer::above || l == Layer::a) {
        if (n == 1)
            out.push_back(leaf_term().code);
    }
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(n, 1, cur, comps);
    for (const auto& is : comps) {
        int k = static_cast<int>(is.size());
        switch (l) {
        case Layer::a:
        case Layer::above:
            if (k >= 2)
                products(Gen::m, k, is, l, out);
            break;
        case Layer::m_below:
            products(Gen::f, k, is, Layer::above, out);
            if (k >= 2)
                products(Gen::m, k, is, Layer::m_below, out);
            break;
        case Layer::mm_between:
            products(Gen::f, k, is, Layer::above, out);
            if (k >= 2)
                products(Gen::m, k, is, Layer::mm_between, out);
            break;
        case Layer::mm_below:
            products(Gen::g, k, is, Layer::mm_between, out);
            if (k >= 2)
                products(Gen::m, k, is, Layer::mm_below, out);
            break;
        }
    }
    return out;
}

const std::vector<std::string>& layer_codes(Layer l, int n)
{
    static std::map<std::pair<int, int>, std::vector<std::string>> cache;
    auto key = std::make_pair(static_cast<int>(l), n);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, compute_layer(l, n)).first;
    return it->second;
}

}  // namespace

std::vector<Term> basis(Sort s, int n)
{
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    if (n < 1)
        throw std::invalid_argument("arity must be positive");
    Layer l = s == Sort::A ? Layer::a : s == Sort::M ? Layer::m_below : Layer::mm_below;
    std::vector<Term> out;
    for (const auto& c : layer_codes(l, n))
        out.push_back(Term{c});
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- primitives

namespace {

using QVec = std::map<int, Rational>;

void axpy(QVec& y, const Rational& a, const QVec& x)
{
    for (const auto& [k, v] : x) {
        Rational& r = y[k];
        r += a * v;
        if (r == 0)
            y.erase(k);
    }
}

// Incremental column echelon form: solves A z = y over the rationals.
class ColumnSolver {
public:
    void add_column(int id, QVec col)
    {
        QVec combo{{id, Rational(1)}};
        reduce(col, combo);
        if (col.empty())
            return;
        int piv = col.begin()->first;
        Rational inv = 1 / col.begin()->second;
        QVec c2, k2;
        axpy(c2, inv, col);
        axpy(k2, inv, combo);
        basis_.push_back({piv, std::move(c2), std::move(k2)});
    }

    std::optional<QVec> solve(QVec y) const
    {
        QVec combo;
        reduce(y, combo);
        if (!y.empty())
            return std::nullopt;
        QVec z;
        axpy(z, Rational(-1), combo);
        return z;
    }

private:
    struct Entry {
        int pivot;
        QVec col;
        QVec combo;
    };
    std::vector<Entry> basis_;

    void reduce(QVec& v, QVec& combo) const
    {
        for (const auto& e : basis_) {
            auto it = v.find(e.pivot);
            if (it == v.end())
                continue;
            Rational a = -it->second;
            axpy(v, a, e.col);
            axpy(combo, a, e.combo);
        }
    }
};

// Contraction of the complex basis(s, n) onto the class of one degree-0
// vertex v0: i p + d h + h d = 1.
struct Contraction {
    std::vector<Term> basis;
    std::map<Term, int> index;
    std::vector<int> deg;
    int v0 = -1;
    std::vector<QVec> h;
    std::vector<Rational> p;
};

QVec to_qvec(const FormalSum& x, const Contraction& c)
{
    QVec out;
    for (const auto& [m, k] : x.terms())
        out[c.index.at(m[0])] = Rational(static_cast<long>(k));
    return out;
}

Contraction build_contraction(Sort s, int n)
{
    Contraction c;
    c.basis = basis(s, n);
    int N = static_cast<int>(c.basis.size());
    int top = 0;
    for (int e = 0; e < N; ++e) {
        c.index[c.basis[e]] = e;
        c.deg.push_back(degree(c.basis[e]));
        top = std::max(top, c.deg.back());
    }
    std::vector<QVec> d(N);
    for (int e = 0; e < N; ++e)
        d[e] = to_qvec(differential(c.basis[e]), c);
    for (int e = 0; e < N && c.v0 < 0; ++e)
        if (c.deg[e] == 0)
            c.v0 = e;
    if (c.v0 < 0)
        throw std::logic_error("complex without degree-0 part");
    c.h.assign(N, {});
    c.p.assign(N, Rational(0));
    for (int k = 0; k <= top; ++k) {
        ColumnSolver solver;
        for (int e = 0; e < N; ++e)
            if (c.deg[e] == k + 1)
                solver.add_column(e, d[e]);
        if (k == 0)
            solver.add_column(-1, QVec{{c.v0, Rational(1)}});
        for (int e = 0; e < N; ++e) {
            if (c.deg[e] != k)
                continue;
            QVec y{{e, Rational(1)}};
            for (const auto& [f, a] : d[e])
                axpy(y, -a, c.h[f]);
            auto z = solver.solve(y);
            if (!z)
                throw std::logic_error("complex is not contractible in degree " + std::to_string(k));
            if (k == 0) {
                auto it = z->find(-1);
                if (it != z->end()) {
                    c.p[e] = it->second;
                    z->erase(it);
                }
            }
            c.h[e] = *z;
        }
    }
    return c;
}

const Contraction& contraction(Sort s, int n)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<Contraction>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(static_cast<int>(s), n);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<Contraction>(build_contraction(s, n))).first;
    return *it->second;
}

void add_q(RationalSum& y, const Monomial& m, const Rational& a)
{
    if (a == 0)
        return;
    Rational& r = y[m];
    r += a;
    if (r == 0)
        y.erase(m);
}

// Tensor homotopy h(t1 ⊗ rest) = h1(t1) ⊗ rest + i p(t1) ⊗ h(rest).
RationalSum homotopy(const Monomial& m, std::size_t j, const std::vector<const Contraction*>& cs)
{
    RationalSum out;
    const Contraction& c = *cs[j];
    int e = c.index.at(m[j]);
    Monomial rest(m.begin() + j + 1, m.end());
    for (const auto& [f, a] : c.h[e]) {
        Monomial y{c.basis[f]};
        y.insert(y.end(), rest.begin(), rest.end());
        add_q(out, y, a);
    }
    if (j + 1 < m.size() && c.deg[e] == 0 && c.p[e] != 0)
        for (const auto& [y, a] : homotopy(m, j + 1, cs)) {
            Monomial z{c.basis[c.v0]};
            z.insert(z.end(), y.begin(), y.end());
            add_q(out, z, c.p[e] * a);
        }
    return out;
}

}  // namespace

FormalSum Primitive::integer_value() const
{
    FormalSum out;
    for (const auto& [m, a] : value) {
        if (a.get_den() != 1)
            throw std::domain_error("primitive has non-integral coefficients");
        out.add(m, a.get_num().get_si());
    }
    return out;
}

std::optional<Primitive> is_boundary(const FormalSum& x)
{
    Primitive prim;
    if (x.empty())
        return prim;
    const Monomial& first = x.terms().begin()->first;
    std::vector<const Contraction*> cs;
    for (const auto& t : first)
        cs.push_back(&contraction(sort_of(t), arity(t)));
    int d0 = degree(first);
    for (const auto& [m, c] : x.terms()) {
        if (m.size() != first.size())
            throw std::invalid_argument("mixed tensor lengths");
        for (std::size_t j = 0; j < m.size(); ++j)
            if (!cs[j]->index.count(m[j]))
                throw std::invalid_argument("mixed sorts or arities in factor " + std::to_string(j));
        if (degree(m) != d0)
            throw std::invalid_argument("inhomogeneous sum");
    }
    if (!differential(x).empty())
        return std::nullopt;
    if (d0 == 0) {
        Rational total = 0;
        for (const auto& [m, c] : x.terms()) {
            Rational prod = static_cast<long>(c);
            for (std::size_t j = 0; j < m.size(); ++j)
                prod *= cs[j]->p[cs[j]->index.at(m[j])];
            total += prod;
        }
        if (total != 0)
            return std::nullopt;
    }
    for (const auto& [m, c] : x.terms())
        for (const auto& [y, a] : homotopy(m, 0, cs))
            add_q(prim.value, y, a * static_cast<long>(c));
    // d h = x (the correction terms vanish on cycles off the class of v0).
    RationalSum check;
    for (const auto& [y, a] : prim.value) {
        FormalSum dy = differential(FormalSum(y, 1));
        for (const auto& [z, k] : dy.terms())
            add_q(check, z, a * static_cast<long>(k));
    }
    for (const auto& [m, c] : x.terms())
        add_q(check, m, Rational(-static_cast<long>(c)));
    if (!check.empty())
        throw std::logic_error("homotopy check failed");
    for (const auto& [y, a] : prim.value)
        if (a.get_den() != 1)
            prim.integral = false;
    return prim;
}

// ------------------------------------------------------------------ no-go

GenDiag alpha_diag(long long alpha)
{
    return [alpha](Gen g, int n) -> std::vector<DiagTerm> {
        if (g == Gen::m)
            return standard_gen_diag(g, n);
        if (n == 1)
            return {{1, generator(g, 1), generator(g, 1)}};
        if (n != 2)
            throw std::invalid_argument("alpha family is defined up to arity 2");
        auto t = [g](const char* s) { return relabel(parse_term(s, Sort::M), Gen::f, g); };
        return {{alpha, t("b(**)"), t("p(**)")},
                {alpha, t("p(**)"), t("r(**)")},
                {1 - alpha, t("r(**)"), t("p(**)")},
                {1 - alpha, t("p(**)"), t("b(**)")}};
    };
}

NoGoReport alpha_no_go()
{
    NoGoReport rep;
    FormalSum e0 = comp_compat_defect(alpha_diag(0), 2);
    FormalSum e1 = comp_compat_defect(alpha_diag(1), 2);
    std::set<Monomial> keys;
    for (const auto& [m, c] : e0.terms())
        keys.insert(m);
    for (const auto& [m, c] : e1.terms())
        keys.insert(m);
    std::set<Rational> forced;
    for (const auto& m : keys) {
        long long c0 = e0.coef(m), c1 = e1.coef(m) - c0;
        std::string line = to_string(m) + ": " + std::to_string(c0) + (c1 < 0 ? " - " : " + ")
                           + std::to_string(c1 < 0 ? -c1 : c1) + "*alpha = 0";
        rep.constraints.push_back(line);
        if (c1 != 0)
            forced.insert(Rational(static_cast<long>(-c0)) / Rational(static_cast<long>(c1)));
        else if (c0 != 0)
            rep.inconsistent_constant = true;
    }
    rep.forced.assign(forced.begin(), forced.end());
    if (rep.inconsistent_constant || rep.forced.size() > 1)
        rep.integer_solution = false;
    else if (rep.forced.empty())
        rep.integer_solution = true;
    else
        rep.integer_solution = rep.forced[0].get_den() == 1;
    return rep;
}

}  // namespace mdiag::op
