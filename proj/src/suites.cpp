#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mdiag/algebra.hpp"
#include "mdiag/cli.hpp"
#include "mdiag/diagonal.hpp"
#include "mdiag/geometry.hpp"
#include "mdiag/io.hpp"
#include "mdiag/operad.hpp"
#include "mdiag/trees.hpp"

namespace mdiag::cli {

namespace {

using Lines = std::vector<CheckLine>;

void add(Lines& out, std::string name, bool pass, std::string detail)
{
    out.push_back({std::move(name), pass, std::move(detail)});
}

// Runs one check; an exception is a failure with its message as detail.
void guarded(Lines& out, const std::string& name, const std::function<void(Lines&)>& body)
{
    try {
        body(out);
    } catch (const std::exception& e) {
        add(out, name, false, std::string("exception: ") + e.what());
    }
}

std::string join(const std::vector<std::string>& xs, const std::string& sep = ", ")
{
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i)
        s += (i ? sep : "") + xs[i];
    return s;
}

std::string show(const op::FormalSum& x) { return x.empty() ? "0" : op::to_string(x); }

// ------------------------------------------------------------------- trees

std::uint64_t catalan(int n)
{
    std::uint64_t c = 1;
    for (int i = 0; i < n; ++i)
        c = c * 2 * (2 * i + 1) / (i + 2);
    return c;
}

Lines trees_suite(const SuiteOptions&)
{
    Lines out;
    guarded(out, "trees.atomic_counts", [](Lines& o) {
        std::vector<std::uint64_t> a(8, 0);
        std::vector<std::string> bad;
        for (int n = 1; n <= 6; ++n) {
            a[n] = catalan(n - 1);
            for (int i = 1; i < n; ++i)
                a[n] += a[i] * a[n - i];
            std::size_t got = enumerate_atomic(Kind::mult, n).size();
            if (got != a[n])
                bad.push_back("J_" + std::to_string(n) + ": " + std::to_string(got) + " != " + std::to_string(a[n]));
            if (n >= 2 && enumerate_atomic(Kind::assoc, n).size() != catalan(n - 1))
                bad.push_back("K_" + std::to_string(n));
        }
        add(o, "trees.atomic_counts", bad.empty(), bad.empty() ? "vertex counts of K_n and J_n, n <= 6" : join(bad));
    });
    guarded(out, "trees.face_counts", [](Lines& o) {
        const std::uint64_t schroeder[] = {0, 1, 1, 3, 11, 45, 197};
        std::vector<std::string> bad;
        for (int n = 2; n <= 6; ++n)
            if (enumerate_faces(Kind::assoc, n).size() != schroeder[n])
                bad.push_back("K_" + std::to_string(n));
        add(o, "trees.face_counts", bad.empty(), bad.empty() ? "faces of K_n are counted by the super-Catalan numbers" : join(bad));
    });
    guarded(out, "trees.roundtrip", [](Lines& o) {
        std::size_t total = 0, bad = 0;
        std::string first;
        for (Kind k : {Kind::assoc, Kind::mult})
            for (int n = k == Kind::mult ? 1 : 2; n <= (k == Kind::mult ? 5 : 6); ++n)
                for (const Nesting& F : enumerate_faces(k, n)) {
                    ++total;
                    std::string s = to_string(F);
                    Nesting G = parse_face(s, k);
                    if (G != F || to_string(G) != s || nesting_of_tree(tree_of_nesting(F), k) != F) {
                        if (!bad++)
                            first = s;
                    }
                }
        add(o, "trees.roundtrip", bad == 0,
            std::to_string(total) + " faces of K_n (n <= 6) and J_n (n <= 5)" + (bad ? ", first failure " + first : ""));
    });
    guarded(out, "trees.cut_axioms", [](Lines& o) {
        bool rejected = false;
        try {
            parse_face("b(r(**)*)", Kind::mult);
        } catch (const std::exception&) {
            rejected = true;
        }
        Nesting F = parse_face("p(b(**)*)", Kind::mult);
        int blue = 0, purple = 0;
        for (const Nest& t : F.nests) {
            blue += t.color == Color::blue;
            purple += t.color == Color::purple;
        }
        bool ok = rejected && blue == 1 && purple == 1 && F.dim() == 1;
        add(o, "trees.cut_axioms", ok, "b(r(**)*) rejected, p(b(**)*) has one blue and one purple nest");
    });
    guarded(out, "trees.refinements", [](Lines& o) {
        Nesting top = parse_face("p(****)", Kind::mult);
        auto vs = refinements(top);
        bool atomic = std::all_of(vs.begin(), vs.end(), [](const Nesting& v) { return v.atomic(); });
        std::size_t bad = 0;
        for (const Nesting& F : enumerate_faces(Kind::mult, 4)) {
            auto r = refinements(F);
            std::set<Nesting> rs(r.begin(), r.end());
            for (const Nesting& v : vs)
                if (face_leq(v, F) != (rs.count(v) > 0))
                    ++bad;
        }
        add(o, "trees.refinements", vs.size() == 21 && atomic && bad == 0,
            std::to_string(vs.size()) + " vertices below the top cell of J_4, face order agrees on every face");
    });
    guarded(out, "trees.tamari", [](Lines& o) {
        std::vector<std::string> bad;
        for (Kind k : {Kind::assoc, Kind::mult})
            for (int n = k == Kind::mult ? 1 : 2; n <= 5; ++n) {
                const TamariPoset& P = tamari_poset(k, n);
                int N = static_cast<int>(P.vertices().size());
                int bottoms = 0, tops = 0;
                for (int a = 0; a < N; ++a) {
                    bool lo = true, hi = true;
                    for (int b = 0; b < N; ++b) {
                        lo = lo && P.leq(a, b);
                        hi = hi && P.leq(b, a);
                    }
                    bottoms += lo;
                    tops += hi;
                }
                if (bottoms != 1 || tops != 1)
                    bad.push_back(kind_name(k) + " " + std::to_string(n));
            }
        add(o, "trees.tamari", bad.empty(), bad.empty() ? "unique minimum and maximum for n <= 5" : join(bad));
    });
    return out;
}

// ---------------------------------------------------------------- geometry

Tree strip_colors(const Tree& t)
{
    if (t.children.size() == 1)
        return strip_colors(t.children[0]);
    Tree s;
    for (const Tree& c : t.children)
        s.children.push_back(strip_colors(c));
    return s;
}

// Loday point of the underlying binary tree with the blue coordinates
// halved, doubled back.
RatPoint half_lift_oracle(const Nesting& t, const Weight& w)
{
    Nesting u = nesting_of_tree(strip_colors(tree_of_nesting(t)), Kind::assoc);
    RatPoint K = loday_point(u, w);
    RatPoint out(K.size());
    for (int e = 1; e < t.n; ++e) {
        Color c = Color::none;
        for (int j = 0; j < static_cast<int>(t.nests.size()); ++j) {
            auto own = t.own_edges(j);
            if (is_mono(t.nests[j].color) && std::find(own.begin(), own.end(), e) != own.end())
                c = t.nests[j].color;
        }
        if (c == Color::none)
            throw std::logic_error("vertex without a colored binary node at gap " + std::to_string(e));
        Rational half = c == Color::blue ? Rational(1, 2) : Rational(1);
        out[e - 1] = 2 * (half * K[e - 1]);
    }
    return out;
}

Weight random_weight(int n, std::mt19937& rng)
{
    std::uniform_int_distribution<int> num(1, 9), den(1, 5);
    Weight w;
    for (int i = 0; i < n; ++i) {
        Rational q(num(rng), den(rng));
        q.canonicalize();
        w.push_back(q);
    }
    return w;
}

Lines geometry_suite(const SuiteOptions& opt)
{
    Lines out;
    guarded(out, "geometry.figure_coords", [](Lines& o) {
        std::vector<std::string> bad;
        for (int n = 2; n <= 4; ++n) {
            std::set<RatPoint> printed, ours;
            for (const auto& v : io::printed_data().at("J" + std::to_string(n) + "_vertices")) {
                RatPoint p;
                for (const auto& x : v)
                    p.push_back(parse_rational(x.get<std::string>()));
                printed.insert(p);
            }
            Weight w = standard_weight(n);
            for (const Nesting& t : enumerate_atomic(Kind::mult, n))
                ours.insert(forcey_loday_point(t, w));
            if (ours != printed)
                bad.push_back("J_" + std::to_string(n));
        }
        add(o, "geometry.figure_coords", bad.empty(), bad.empty() ? "J_2, J_3, J_4 vertex sets match the figures" : join(bad));
    });
    guarded(out, "geometry.facets", [](Lines& o) {
        std::size_t checked = 0;
        std::vector<std::string> bad;
        for (Kind k : {Kind::assoc, Kind::mult})
            for (int n = 2; n <= 6; ++n) {
                Weight w = standard_weight(n);
                auto hs = facet_halfspaces(k, n, w);
                for (const Nesting& t : enumerate_atomic(k, n)) {
                    RatPoint x = vertex_point(t, w);
                    for (const HalfSpace& h : hs) {
                        ++checked;
                        bool tight_expected = h.sense == HalfSpace::Sense::eq || face_leq(t, h.face);
                        if (!h.satisfied(x) || h.tight(x) != tight_expected) {
                            bad.push_back(kind_name(k) + " " + to_string(t) + " " + h.label);
                            break;
                        }
                    }
                }
            }
        if (bad.size() > 3)
            bad.resize(3);
        add(o, "geometry.facets", bad.empty(),
            std::to_string(checked) + " vertex/facet incidences for n <= 6" + (bad.empty() ? "" : ": " + join(bad)));
    });
    guarded(out, "geometry.lift", [&](Lines& o) {
        std::mt19937 rng(opt.seed);
        std::vector<std::string> bad;
        std::size_t checked = 0;
        for (int n = 2; n <= 6; ++n) {
            std::vector<Weight> ws = {standard_weight(n), random_weight(n, rng), random_weight(n, rng)};
            for (const Weight& w : ws)
                for (const Nesting& t : enumerate_atomic(Kind::mult, n)) {
                    ++checked;
                    RatPoint fl = forcey_loday_point(t, w);
                    if (half_lift_oracle(t, w) != fl || project(lift_vertex(t, w)) != fl) {
                        bad.push_back(to_string(t));
                        break;
                    }
                }
        }
        add(o, "geometry.lift", bad.empty(),
            std::to_string(checked) + " atomic trees, standard and two random weights" + (bad.empty() ? "" : ": " + join(bad)));
    });
    return out;
}

// ---------------------------------------------------------------- diagonal

op::FormalSum sum_of_pairs(const std::vector<SignedPair>& ps)
{
    op::FormalSum s;
    for (const auto& p : ps)
        s.add({op::term_of_face(p.left), op::term_of_face(p.right)}, p.sign);
    return s;
}

std::string pair_string(const SignedPair& p) { return to_string(p.left) + " (x) " + to_string(p.right); }

std::pair<Nesting, Nesting> parse_pair(const std::string& s)
{
    auto at = s.find(" (x) ");
    if (at == std::string::npos)
        throw std::invalid_argument("not a pair: " + s);
    return {parse_face(s.substr(0, at), Kind::mult), parse_face(s.substr(at + 5), Kind::mult)};
}

Lines counts_lines(int max_dim, int jobs)
{
    Lines out;
    for (Kind k : {Kind::assoc, Kind::mult}) {
        std::string name = "diagonal.counts." + kind_name(k);
        guarded(out, name, [&](Lines& o) {
            const auto& ex = io::expected_counts().at(kind_name(k));
            auto rows = counts(k, max_dim, jobs);
            std::vector<std::string> got;
            bool ok = static_cast<int>(rows.size()) == max_dim + 1;
            for (const CountRow& r : rows) {
                got.push_back(std::to_string(r.complementary) + "/" + std::to_string(r.vertex_pairs));
                ok = ok && r.complementary == ex.at("complementary").at(r.dim).get<std::uint64_t>() &&
                     r.vertex_pairs == ex.at("vertex_pairs").at(r.dim).get<std::uint64_t>();
            }
            add(o, name, ok, "dims 0.." + std::to_string(max_dim) + ": " + join(got, " "));
        });
    }
    return out;
}

Lines diagonal_suite(const SuiteOptions& opt)
{
    Lines out = counts_lines(std::min(opt.max_arity, 6), opt.jobs);
    const auto& pd = io::printed_data();
    for (int n = 2; n <= 4; ++n) {
        std::string name = "diagonal.delta_K(" + std::to_string(n) + ")";
        guarded(out, name, [&](Lines& o) {
            op::FormalSum ours = sum_of_pairs(diagonal_pairs(Kind::assoc, n, Filter::complementary, true, opt.jobs));
            op::FormalSum printed = io::formal_sum_from_json(pd.at("delta_K").at(std::to_string(n)));
            add(o, name, ours == printed, std::to_string(ours.size()) + " signed terms" +
                                              (ours == printed ? "" : ", difference " + show(ours - printed)));
        });
    }
    for (int n = 1; n <= 3; ++n) {
        std::string name = "diagonal.delta_J(" + std::to_string(n) + ")";
        guarded(out, name, [&](Lines& o) {
            op::FormalSum ours;
            for (const auto& p : diagonal_pairs(Kind::mult, n, Filter::complementary, true, opt.jobs))
                ours.add({op::term_of_face(p.left), op::term_of_face(p.right)}, p.sign);
            op::FormalSum printed = io::formal_sum_from_json(pd.at("delta_J").at(std::to_string(n)));
            add(o, name, ours == printed, std::to_string(ours.size()) + " signed terms" +
                                              (ours == printed ? "" : ", difference " + show(ours - printed)));
        });
    }
    guarded(out, "diagonal.pairs_J4", [&](Lines& o) {
        std::set<std::string> ours, printed;
        for (const auto& p : diagonal_pairs(Kind::mult, 4, Filter::complementary, false, opt.jobs))
            ours.insert(pair_string(p));
        for (const auto& s : pd.at("delta_J4_pairs")) {
            auto [l, r] = parse_pair(s.get<std::string>());
            printed.insert(to_string(l) + " (x) " + to_string(r));
        }
        add(o, "diagonal.pairs_J4", ours == printed,
            std::to_string(ours.size()) + " pairs against " + std::to_string(printed.size()) + " printed");
    });
    guarded(out, "diagonal.image_examples", [&](Lines& o) {
        int in = 0, out_ = 0;
        for (const auto& s : pd.at("included_pairs")) {
            auto [l, r] = parse_pair(s.get<std::string>());
            in += in_image(l, r);
        }
        for (const auto& s : pd.at("excluded_pairs")) {
            auto [l, r] = parse_pair(s.get<std::string>());
            out_ += !in_image(l, r);
        }
        add(o, "diagonal.image_examples", in == 4 && out_ == 4,
            std::to_string(in) + "/4 included pairs in the image, " + std::to_string(out_) + "/4 excluded pairs outside");
    });
    guarded(out, "diagonal.tp_bm", [&](Lines& o) {
        auto ps = tp_bm_pairs(Kind::mult, 4, good_vector(3));
        std::set<std::string> got, want;
        for (const auto& p : ps)
            got.insert(pair_string(p));
        for (const auto& p : diagonal_pairs(Kind::mult, 4, Filter::complementary, false, opt.jobs))
            want.insert(pair_string(p));
        for (const auto& s : pd.at("excluded_pairs")) {
            auto [l, r] = parse_pair(s.get<std::string>());
            want.insert(to_string(l) + " (x) " + to_string(r));
        }
        std::size_t expected = pd.at("tp_bm_count_J4").get<std::size_t>();
        add(o, "diagonal.tp_bm", ps.size() == expected && got == want,
            std::to_string(ps.size()) + " pairs with tp <= bm, the image plus the excluded four");
    });
    guarded(out, "diagonal.signs", [&](Lines& o) {
        std::size_t agree = 0, total = 0, undefined = 0;
        for (int n = 2; n <= std::min(opt.max_arity, 5); ++n)
            for (const auto& p : diagonal_pairs(Kind::mult, n, Filter::complementary, true, opt.jobs)) {
                ++total;
                auto s = lemma_sign(p.left, p.right);
                if (!s)
                    ++undefined;
                else
                    agree += *s == p.sign;
            }
        add(o, "diagonal.signs", agree + undefined == total,
            std::to_string(total) + " signed pairs, permutation rule agrees where defined (" + std::to_string(undefined) +
                " without a bijection)");
    });
    return out;
}

// ---------------------------------------------------------------- chainmap

struct Sweep {
    std::size_t checked = 0;
    std::string first_failure;
    void fail(const op::Term& t)
    {
        if (first_failure.empty())
            first_failure = op::to_string(t);
    }
    std::string detail(const std::string& what) const
    {
        return what + " on " + std::to_string(checked) + " basis elements" +
               (first_failure.empty() ? "" : ", first failure " + first_failure);
    }
};

Lines d2_lines(int max_arity)
{
    Lines out;
    for (op::Sort s : {op::Sort::A, op::Sort::M, op::Sort::MM}) {
        std::string sname = s == op::Sort::A ? "A" : s == op::Sort::M ? "M" : "MM";
        std::string name = "chainmap.d2." + sname;
        guarded(out, name, [&](Lines& o) {
            Sweep w;
            int lo = s == op::Sort::A ? 2 : 1;
            int hi = max_arity;
            for (int n = lo; n <= hi; ++n)
                for (const op::Term& t : op::basis(s, n)) {
                    ++w.checked;
                    if (!op::differential(op::differential(t)).empty())
                        w.fail(t);
                }
            add(o, name, w.first_failure.empty(), w.detail("d^2 = 0 to arity " + std::to_string(hi)));
        });
    }
    return out;
}

Lines chainmap_lines(const std::string& which, int max_arity)
{
    Lines out;
    if (which == "all" || which == "K")
        guarded(out, "chainmap.K", [&](Lines& o) {
            Sweep w;
            for (int n = 2; n <= max_arity; ++n)
                for (const op::Term& t : op::basis(op::Sort::A, n)) {
                    ++w.checked;
                    auto x = op::FormalSum::of(t);
                    if (op::diag(op::differential(x)) != op::differential(op::diag(x)))
                        w.fail(t);
                }
            add(o, "chainmap.K", w.first_failure.empty(), w.detail("K diagonal commutes with d"));
        });
    if (which == "all" || which == "J")
        guarded(out, "chainmap.J", [&](Lines& o) {
            Sweep w;
            for (int n = 1; n <= max_arity; ++n)
                for (const op::Term& t : op::basis(op::Sort::M, n)) {
                    ++w.checked;
                    auto x = op::FormalSum::of(t);
                    if (op::diag(op::differential(x)) != op::differential(op::diag(x)))
                        w.fail(t);
                }
            add(o, "chainmap.J", w.first_failure.empty(), w.detail("J diagonal commutes with d"));
        });
    if (which == "all" || which == "comp")
        guarded(out, "chainmap.comp", [&](Lines& o) {
            Sweep w;
            for (int n = 1; n <= max_arity; ++n)
                for (const op::Term& t : op::basis(op::Sort::M, n)) {
                    ++w.checked;
                    auto x = op::FormalSum::of(t);
                    if (op::comp(op::differential(x)) != op::differential(op::comp(x)))
                        w.fail(t);
                }
            add(o, "chainmap.comp", w.first_failure.empty(), w.detail("comp commutes with d"));
        });
    return out;
}

// Delta(x(y_1, ..., y_k)) against the grafts of the factors of Delta x and
// Delta y_j.
op::FormalSum graft_of_diagonals(const op::Term& x, const std::vector<int>& pos, const std::vector<op::Term>& ys)
{
    std::vector<op::FormalSum> dys;
    for (const auto& y : ys)
        dys.push_back(op::diag(op::FormalSum::of(y)));
    op::FormalSum out;
    std::function<void(std::size_t, long long, const op::Monomial&, std::vector<op::Term>&, std::vector<op::Term>&)> rec;
    rec = [&](std::size_t j, long long c, const op::Monomial& xm, std::vector<op::Term>& as, std::vector<op::Term>& bs) {
        if (j == ys.size()) {
            int e = 0;
            int bx = op::degree(xm[1]);
            for (std::size_t i = 0; i < as.size(); ++i) {
                e += bx * op::degree(as[i]);
                for (std::size_t k = i + 1; k < as.size(); ++k)
                    e += op::degree(bs[i]) * op::degree(as[k]);
            }
            auto [sl, L] = op::compose_multi(xm[0], pos, as);
            auto [sr, R] = op::compose_multi(xm[1], pos, bs);
            out.add({L, R}, c * sl * sr * (e % 2 ? -1 : 1));
            return;
        }
        for (const auto& [m, cy] : dys[j].terms()) {
            as.push_back(m[0]);
            bs.push_back(m[1]);
            rec(j + 1, c * cy, xm, as, bs);
            as.pop_back();
            bs.pop_back();
        }
    };
    op::FormalSum dx = op::diag(op::FormalSum::of(x));
    for (const auto& [m, c] : dx.terms()) {
        std::vector<op::Term> as, bs;
        rec(0, c, m, as, bs);
    }
    return out;
}

Lines decomposition_lines(unsigned seed)
{
    Lines out;
    guarded(out, "chainmap.decomposition", [&](Lines& o) {
        std::mt19937 rng(seed);
        auto pick = [&](op::Sort s, int n) {
            auto b = op::basis(s, n);
            return b[std::uniform_int_distribution<std::size_t>(0, b.size() - 1)(rng)];
        };
        auto range = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
        int bad = 0;
        std::string first;
        for (int trial = 0; trial < 100; ++trial) {
            op::Term x;
            std::vector<int> pos;
            std::vector<op::Term> ys;
            switch (trial % 3) {
            case 0:  // A o_i A
                x = pick(op::Sort::A, range(2, 3));
                pos = {range(1, op::arity(x))};
                ys = {pick(op::Sort::A, range(2, 3))};
                break;
            case 1:  // M o_i A
                x = pick(op::Sort::M, range(1, 3));
                pos = {range(1, op::arity(x))};
                ys = {pick(op::Sort::A, range(2, 3))};
                break;
            default:  // A(M, ..., M)
                x = pick(op::Sort::A, range(2, 3));
                for (int i = 1; i <= op::arity(x); ++i) {
                    pos.push_back(i);
                    ys.push_back(pick(op::Sort::M, range(1, 2)));
                }
            }
            auto [s, t] = op::compose_multi(x, pos, ys);
            op::FormalSum lhs = op::diag(op::FormalSum::of(t, s));
            if (lhs != graft_of_diagonals(x, pos, ys) && !bad++)
                first = op::to_string(t);
        }
        add(o, "chainmap.decomposition", bad == 0,
            "diagonal of 100 random composites agrees with the graft of the factor diagonals" +
                (bad ? ", " + std::to_string(bad) + " failures, first " + first : ""));
    });
    return out;
}

Lines chainmap_suite(const SuiteOptions& opt)
{
    Lines out;
    if (opt.which == "all") {
        auto d2 = d2_lines(opt.max_arity);
        out.insert(out.end(), d2.begin(), d2.end());
    }
    auto cm = chainmap_lines(opt.which, opt.max_arity);
    out.insert(out.end(), cm.begin(), cm.end());
    if (opt.which == "all") {
        auto dec = decomposition_lines(opt.seed);
        out.insert(out.end(), dec.begin(), dec.end());
    }
    return out;
}

// ----------------------------------------------------------------- defects

Lines defects_suite(const SuiteOptions& opt)
{
    Lines out;
    for (const auto& [key, value] : io::printed_data().at("defect_primitives").items()) {
        std::string name = "defects." + key;
        guarded(out, name, [&](Lines& o) {
            auto open = key.find('(');
            op::DefectKind k = op::defect_kind_of_name(key.substr(0, open));
            int n = std::stoi(key.substr(open + 1));
            op::FormalSum d = op::defect(k, n);
            op::FormalSum printed = io::formal_sum_from_json(value);
            op::FormalSum dp = op::differential(printed);
            auto prim = op::is_boundary(d);
            std::ostringstream s;
            s << "defect " << show(d) << "; primitive found "
              << (prim ? (prim->integral ? show(prim->integer_value()) : std::string("(non-integral)")) : "none")
              << "; printed " << show(printed);
            if (dp == d * -1)
                s << "; d(printed) is the negated defect";
            else if (dp != d)
                s << "; d(printed) = " << show(dp);
            add(o, name, dp == d, s.str());
        });
        guarded(out, name + ".lower", [&](Lines& o) {
            auto open = key.find('(');
            op::DefectKind k = op::defect_kind_of_name(key.substr(0, open));
            int n = std::stoi(key.substr(open + 1));
            bool assoc = key.find("_K") != std::string::npos;
            std::vector<std::string> nonzero;
            for (int a = assoc ? 2 : 1; a < n; ++a)
                if (!op::defect(k, a).empty())
                    nonzero.push_back(std::to_string(a));
            add(o, name + ".lower", nonzero.empty(),
                nonzero.empty() ? "defect vanishes below arity " + std::to_string(n) : "nonzero at " + join(nonzero));
        });
    }
    guarded(out, "defects.comp_compat(2)", [&](Lines& o) {
        op::FormalSum d = op::defect(op::DefectKind::comp_compat, 2);
        auto prim = op::is_boundary(d);
        bool ok = !d.empty() && prim.has_value();
        if (ok)
            ok = op::differential(prim->integer_value()) == d || !prim->integral;
        add(o, "defects.comp_compat(2)", ok,
            std::to_string(d.size()) + "-term defect, primitive " +
                (prim ? (prim->integral ? show(prim->integer_value()) : std::string("(non-integral)")) : "none"));
    });
    (void)opt;
    return out;
}

Lines nogo_suite(const SuiteOptions&)
{
    Lines out;
    guarded(out, "nogo.alpha", [](Lines& o) {
        op::NoGoReport r = op::alpha_no_go();
        std::vector<std::string> forced;
        for (const auto& q : r.forced)
            forced.push_back(to_string(q));
        std::sort(forced.begin(), forced.end());
        forced.erase(std::unique(forced.begin(), forced.end()), forced.end());
        std::string detail = std::to_string(r.constraints.size()) + " coefficient equations, forced alpha in {" +
                             join(forced) + "}" + (r.inconsistent_constant ? ", inconsistent constant equation" : "");
        add(o, "nogo.alpha", !r.integer_solution, detail);
    });
    return out;
}

// ------------------------------------------------------------------- apply

std::string report_detail(const alg::Report& r) { return r.ok() ? "ok to arity " + std::to_string(r.max_arity) : r.summary(); }

Lines apply_suite(const SuiteOptions&)
{
    Lines out;
    using namespace alg;
    guarded(out, "apply.fixtures", [](Lines& o) {
        std::vector<std::string> bad;
        if (!check_stasheff(*fixture_algebra(), 5).ok())
            bad.push_back("A");
        if (!check_stasheff(*strict_algebra(), 5).ok())
            bad.push_back("S");
        if (!check_stasheff(*dual_number_algebra(), 4).ok())
            bad.push_back("N");
        if (!check_stasheff(*fixture_coalgebra(), 5).ok())
            bad.push_back("dual of A");
        auto [F, G] = fixture_morphisms();
        if (!check_morphism(F, F.cap).ok() || !check_morphism(G, G.cap).ok())
            bad.push_back("morphisms");
        add(o, "apply.fixtures", bad.empty(), bad.empty() ? "fixture structures and morphisms validate" : join(bad));
    });
    guarded(out, "apply.tensor", [](Lines& o) {
        Alg A = fixture_algebra(), S = strict_algebra();
        Alg AS = tensor_algebra(A, S, 4), AA = tensor_algebra(A, A, 4);
        Report r1 = check_stasheff(*AS, 4), r2 = check_stasheff(*AA, 4);
        add(o, "apply.tensor", r1.ok() && r2.ok() && !AS->op(3).zero(),
            "A (x) S: " + report_detail(r1) + " (m3 has " + std::to_string(AS->op(3).support()) +
                " entries); A (x) A: " + report_detail(r2));
    });
    guarded(out, "apply.tensor_strict", [](Lines& o) {
        Alg S = strict_algebra(), N = dual_number_algebra();
        Alg T = tensor_algebra(S, N, 4);
        bool higher_zero = true;
        for (int n = 3; n <= 4; ++n)
            higher_zero = higher_zero && T->op(n).zero();
        Report r = check_stasheff(*T, 4);
        add(o, "apply.tensor_strict", higher_zero && r.ok(), "S (x) N: m3 = m4 = 0, " + report_detail(r));
    });
    guarded(out, "apply.tensor_morphism", [](Lines& o) {
        auto [F, G] = fixture_morphisms();
        AInfMorphism H = tensor_morphism(F, G, 3);
        AInfMorphism I = tensor_morphism(F, identity_morphism(fixture_algebra()), 3);
        Report r1 = check_morphism(H, 3), r2 = check_morphism(I, 3);
        add(o, "apply.tensor_morphism", r1.ok() && r2.ok(), "F (x) G: " + report_detail(r1) + "; F (x) id_A: " + report_detail(r2));
    });
    guarded(out, "apply.compose", [](Lines& o) {
        auto [F, G] = fixture_morphisms();
        AInfMorphism GF = compose_morphisms(G, F);
        AInfMorphism H = identity_morphism(G.dst);
        AInfMorphism a = compose_morphisms(H, GF), b = compose_morphisms(compose_morphisms(H, G), F);
        bool assoc = true;
        for (int n = 1; n <= GF.cap; ++n)
            assoc = assoc && a.op(n) == b.op(n) && a.op(n) == GF.op(n);
        Report r = check_morphism(GF, GF.cap);
        add(o, "apply.compose", r.ok() && assoc, "G o F: " + report_detail(r) + ", composition associative and unital");
    });
    guarded(out, "apply.evaluate", [](Lines& o) {
        Alg A = tensor_algebra(tensor_algebra(fixture_algebra(), fixture_algebra(), 4), strict_algebra(), 4);
        auto [F, G] = fixture_morphisms();
        std::size_t checked = 0, bad = 0;
        for (int n = 2; n <= 4; ++n)
            for (const op::Term& t : op::basis(op::Sort::A, n)) {
                ++checked;
                op::FormalSum dt = op::differential(t);
                alg::MultiMap lhs = bracket(evaluate(t, *A));
                bad += dt.empty() ? !lhs.zero() : evaluate(dt, *A) != lhs;
            }
        for (int n = 1; n <= 3; ++n)
            for (const op::Term& t : op::basis(op::Sort::M, n)) {
                ++checked;
                op::FormalSum dt = op::differential(t);
                alg::MultiMap lhs = bracket(evaluate(t, F));
                bad += dt.empty() ? !lhs.zero() : evaluate(dt, F) != lhs;
            }
        add(o, "apply.evaluate", bad == 0,
            "evaluation commutes with d on " + std::to_string(checked) + " terms" +
                (bad ? ", " + std::to_string(bad) + " failures" : ""));
    });
    guarded(out, "apply.convolution", [](Lines& o) {
        Alg H = convolution(fixture_coalgebra(), strict_algebra(), 4);
        Report r = check_stasheff(*H, 4);
        Coalg D = dual_coalgebra(tensor_algebra(fixture_algebra(), strict_algebra(), 4));
        Alg H2 = convolution(D, tensor_algebra(fixture_algebra(), strict_algebra(), 4), 4);
        Report r2 = check_stasheff(*H2, 4);
        add(o, "apply.convolution", r.ok() && r2.ok(),
            "Hom(C, S): " + report_detail(r) + " (m3 has " + std::to_string(H->op(3).support()) +
                " entries); Hom(dual(A (x) S), A (x) S): " + report_detail(r2));
    });
    guarded(out, "apply.mc", [](Lines& o) {
        MCFixture m = mc_fixture(3);
        Report r = check_morphism(m.transport, 3);
        Vec src = mc_residual(*m.source, m.alpha, 3);
        Vec img = mc_transport(m.transport, m.alpha, 3);
        Vec dst = mc_residual(*m.target, img, 3);
        add(o, "apply.mc", r.ok() && src.empty() && dst.empty() && !img.empty(),
            "Hom(C, F): " + report_detail(r) + ", MC element transported to an MC element with " +
                std::to_string(img.size()) + " terms");
    });
    guarded(out, "apply.witness", [](Lines& o) {
        auto [F, G] = fixture_morphisms();
        Witness w = functoriality_witness(F, G, F, G, 2);
        Witness id = functoriality_witness(identity_morphism(F.src), identity_morphism(F.src), F, G, 2);
        add(o, "apply.witness", w.differing > 0 && id.differing == 0,
            "(G (x) G) o (F (x) F) and (G o F) (x) (G o F) differ in " + std::to_string(w.differing) +
                " entries at arity 2; with identities they agree");
    });
    return out;
}

}  // namespace

std::vector<CheckLine> run_suite(const std::string& name, const SuiteOptions& opt)
{
    static const std::vector<std::pair<std::string, std::function<Lines(const SuiteOptions&)>>> suites = {
        {"trees", trees_suite},       {"geometry", geometry_suite}, {"diagonal", diagonal_suite},
        {"chainmap", chainmap_suite}, {"defects", defects_suite},   {"nogo", nogo_suite},
        {"apply", apply_suite},
    };
    if (name == "all") {
        Lines out;
        SuiteOptions o = opt;
        o.which = "all";
        for (const auto& [n, f] : suites) {
            auto l = f(o);
            out.insert(out.end(), l.begin(), l.end());
        }
        return out;
    }
    for (const auto& [n, f] : suites)
        if (n == name)
            return f(opt);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

void print_lines(const std::vector<CheckLine>& lines, std::ostream& out)
{
    for (const auto& l : lines)
        out << (l.pass ? "PASS " : "FAIL ") << l.name << ": " << l.detail << "\n";
}

}  // namespace mdiag::cli
