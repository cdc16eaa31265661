#include "mdiag/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "mdiag/algebra.hpp"
#include "mdiag/diagonal.hpp"
#include "mdiag/geometry.hpp"
#include "mdiag/io.hpp"
#include "mdiag/trees.hpp"

namespace mdiag::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr int max_counts_dim = 6;
constexpr int max_mult_n = 7;
constexpr int max_assoc_n = 8;

std::string default_format(const std::string& fallback)
{
    if (const char* f = std::getenv("MDIAG_FORMAT"); f && *f)
        return f;
    return fallback;
}

void require_format(const std::string& f, std::initializer_list<const char*> allowed)
{
    for (const char* a : allowed)
        if (f == a)
            return;
    std::string list;
    for (const char* a : allowed)
        list += std::string(list.empty() ? "" : ", ") + a;
    throw UsageError("unsupported format '" + f + "' (expected one of " + list + ")");
}

Kind polytope_kind(const std::string& s)
{
    if (s == "assoc")
        return Kind::assoc;
    if (s == "mult")
        return Kind::mult;
    throw UsageError("unknown polytope '" + s + "' (expected assoc or mult)");
}

void require_arity(int n)
{
    if (n < 1)
        throw UsageError("--n must be positive");
}

Weight weights_of(const std::string& s, int n)
{
    if (s.empty())
        return standard_weight(n);
    Weight w;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ','))
        w.push_back(parse_rational(tok));
    check_weight(w, n);
    return w;
}

std::vector<Nesting> sorted_faces(Kind k, int n)
{
    auto fs = enumerate_faces(k, n);
    std::stable_sort(fs.begin(), fs.end(), [](const Nesting& a, const Nesting& b) {
        if (a.dim() != b.dim())
            return a.dim() < b.dim();
        return to_string(a) < to_string(b);
    });
    return fs;
}

std::string csv_point(const RatPoint& p)
{
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i)
        s += (i ? "," : "") + to_string(p[i]);
    return s;
}

std::string sign_char(int s) { return s > 0 ? "+" : "-"; }

// ---------------------------------------------------------------- commands

struct FacesArgs {
    std::string polytope = "mult";
    int n = 3;
    std::string format;
};

int cmd_faces(const FacesArgs& a, std::ostream& out)
{
    Kind k = polytope_kind(a.polytope);
    require_arity(a.n);
    require_format(a.format, {"text", "json"});
    auto fs = sorted_faces(k, a.n);
    if (a.format == "json") {
        io::Json faces = io::Json::array();
        for (const Nesting& F : fs)
            faces.push_back({{"tree", to_string(F)}, {"dim", F.dim()}, {"nesting", io::to_json(F)}});
        out << io::Json{{"polytope", a.polytope}, {"n", a.n}, {"faces", faces}}.dump(1) << "\n";
    } else {
        for (const Nesting& F : fs)
            out << F.dim() << " " << to_string(F) << "\n";
    }
    return 0;
}

struct VerticesArgs {
    std::string polytope = "mult";
    int n = 3;
    std::string weights;
    std::string format;
};

int cmd_vertices(const VerticesArgs& a, std::ostream& out)
{
    Kind k = polytope_kind(a.polytope);
    require_arity(a.n);
    require_format(a.format, {"json", "csv"});
    Weight w = weights_of(a.weights, a.n);
    auto vs = enumerate_atomic(k, a.n);
    std::sort(vs.begin(), vs.end(), [](const Nesting& x, const Nesting& y) { return to_string(x) < to_string(y); });
    if (a.format == "csv") {
        out << "face,coords\n";
        for (const Nesting& v : vs)
            out << to_string(v) << ",\"" << csv_point(vertex_point(v, w)) << "\"\n";
        return 0;
    }
    io::Json verts = io::Json::array();
    for (const Nesting& v : vs)
        verts.push_back({{"face", io::to_json(v)}, {"tree", to_string(v)}, {"coords", io::to_json(vertex_point(v, w))}});
    out << io::Json{{"polytope", a.polytope}, {"n", a.n}, {"weights", io::to_json(w)}, {"vertices", verts}}.dump(1)
        << "\n";
    return 0;
}

struct DiagonalArgs {
    std::string polytope = "mult";
    int n = 2;
    std::string filter = "complementary";
    bool signs = false;
    std::string format;
    int jobs = 1;
    bool force = false;
};

int cmd_diagonal(const DiagonalArgs& a, std::ostream& out)
{
    Kind k = polytope_kind(a.polytope);
    require_arity(a.n);
    require_format(a.format, {"text", "json", "csv"});
    Filter f;
    try {
        f = filter_of_name(a.filter);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    int limit = k == Kind::mult ? max_mult_n : max_assoc_n;
    if (a.n > limit && !a.force)
        throw UsageError("diagonal of " + a.polytope + " beyond n = " + std::to_string(limit) + " requires --force");
    if (a.signs && f != Filter::complementary)
        throw UsageError("--signs needs --filter complementary");
    auto ps = diagonal_pairs(k, a.n, f, a.signs, a.jobs);
    if (a.format == "json") {
        io::Json pairs = io::Json::array();
        for (const auto& p : ps)
            pairs.push_back(io::to_json(p, a.signs));
        out << io::Json{{"polytope", a.polytope}, {"n", a.n}, {"filter", a.filter}, {"signs", a.signs}, {"pairs", pairs}}
                   .dump(1)
            << "\n";
    } else if (a.format == "csv") {
        out << (a.signs ? "sign,left,right\n" : "left,right\n");
        for (const auto& p : ps)
            out << (a.signs ? sign_char(p.sign) + "," : "") << to_string(p.left) << "," << to_string(p.right) << "\n";
    } else {
        for (const auto& p : ps)
            out << (a.signs ? sign_char(p.sign) + " " : "") << to_string(p.left) << " (x) " << to_string(p.right) << "\n";
    }
    return 0;
}

struct CountsArgs {
    std::string polytope = "both";
    int max_dim = 4;
    bool expect = false;
    std::string expect_file;
    std::string format;
    int jobs = 1;
    bool force = false;
};

int cmd_counts(const CountsArgs& a, std::ostream& out, std::ostream& err)
{
    std::vector<Kind> kinds;
    if (a.polytope == "both")
        kinds = {Kind::assoc, Kind::mult};
    else
        kinds = {polytope_kind(a.polytope)};
    require_format(a.format, {"text", "json", "csv"});
    if (a.max_dim < 0)
        throw UsageError("--max-dim must be non-negative");
    if (a.max_dim > max_counts_dim && !a.force)
        throw UsageError("counts beyond dimension " + std::to_string(max_counts_dim) + " require --force");
    io::Json expected;
    if (a.expect)
        expected = a.expect_file.empty() ? io::expected_counts() : io::read_json_file(a.expect_file);
    io::Json j = io::Json::object();
    bool ok = true;
    std::vector<std::string> mismatches;
    if (a.format == "text")
        out << "polytope dim complementary vertex_pairs\n";
    if (a.format == "csv")
        out << "polytope,dim,complementary,vertex_pairs\n";
    for (Kind k : kinds) {
        std::string name = kind_name(k);
        auto rows = counts(k, a.max_dim, a.jobs);
        io::Json jr = io::Json::array();
        for (const CountRow& r : rows) {
            jr.push_back({{"dim", r.dim}, {"complementary", r.complementary}, {"vertex_pairs", r.vertex_pairs}});
            if (a.format == "text")
                out << name << " " << r.dim << " " << r.complementary << " " << r.vertex_pairs << "\n";
            if (a.format == "csv")
                out << name << "," << r.dim << "," << r.complementary << "," << r.vertex_pairs << "\n";
            if (a.expect) {
                const auto& e = expected.at(name);
                if (r.dim >= static_cast<int>(e.at("complementary").size()))
                    continue;
                if (e.at("complementary").at(r.dim).get<std::uint64_t>() != r.complementary ||
                    e.at("vertex_pairs").at(r.dim).get<std::uint64_t>() != r.vertex_pairs) {
                    ok = false;
                    mismatches.push_back(name + " dim " + std::to_string(r.dim));
                }
            }
        }
        j[name] = jr;
    }
    if (a.format == "json") {
        if (a.expect)
            j["expect"] = ok ? "PASS" : "FAIL";
        out << j.dump(1) << "\n";
    } else if (a.expect) {
        err << (ok ? "PASS counts match the expected table" : "FAIL counts differ from the expected table:");
        for (const auto& m : mismatches)
            err << " " << m;
        err << "\n";
    }
    return ok ? 0 : 1;
}

int cmd_subdivision(int n, std::ostream& out)
{
    require_arity(n);
    if (n > max_mult_n)
        throw UsageError("subdivision beyond n = " + std::to_string(max_mult_n) + " is not supported");
    io::Json cells = io::Json::array();
    for (const Cell& c : subdivision(n)) {
        io::Json vs = io::Json::array();
        for (const auto& v : c.vertices)
            vs.push_back(io::to_json(v));
        io::Json cell = io::to_json(c.pair, true);
        cell["vertices"] = vs;
        cells.push_back(cell);
    }
    out << io::Json{{"polytope", "mult"}, {"n", n}, {"cells", cells}}.dump(1) << "\n";
    return 0;
}

int cmd_check(const std::string& suite, const SuiteOptions& opt, std::ostream& out)
{
    if (opt.max_arity < 1 || opt.max_arity > 7)
        throw UsageError("--max-arity must be between 1 and 7");
    if (opt.which != "all" && opt.which != "K" && opt.which != "J" && opt.which != "comp")
        throw UsageError("--which expects K, J or comp");
    auto lines = run_suite(suite, opt);
    print_lines(lines, out);
    for (const auto& l : lines)
        if (!l.pass)
            return 1;
    return 0;
}

alg::Alg load_structure(const std::string& s)
{
    if (s == "fixture:A")
        return alg::fixture_algebra();
    if (s == "fixture:S")
        return alg::strict_algebra();
    if (s == "fixture:N")
        return alg::dual_number_algebra();
    return io::algebra_from_json(io::read_json_file(s));
}

struct TensorArgs {
    std::string a, b;
    int cap = 4;
    std::string report;
};

int cmd_tensor(const TensorArgs& t, std::ostream& out)
{
    require_format(t.report, {"json", "text"});
    if (t.cap < 2 || t.cap > 6)
        throw UsageError("--cap must be between 2 and 6");
    alg::Alg A = load_structure(t.a), B = load_structure(t.b);
    alg::Alg T = alg::tensor_algebra(A, B, t.cap);
    alg::Report r = alg::check_stasheff(*T, t.cap);
    if (t.report == "text") {
        out << "dim " << T->V->dim() << "\n";
        for (int n = 2; n <= t.cap; ++n)
            out << "m" << n << " " << T->op(n).support() << " entries\n";
        out << (r.ok() ? "PASS" : "FAIL") << " stasheff: " << (r.ok() ? "ok" : r.summary()) << "\n";
    } else {
        io::Json j = io::to_json(*T);
        j["stasheff"] = {{"max_arity", t.cap}, {"ok", r.ok()}};
        out << j.dump(1) << "\n";
    }
    return r.ok() ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Diagonals of associahedra and multiplihedra, and tensor products of A-infinity structures"};
    app.name("mdiag");
    app.require_subcommand(1);

    FacesArgs fa;
    fa.format = default_format("text");
    auto* faces = app.add_subcommand("faces", "List the faces of K_n or J_n");
    faces->add_option("--polytope", fa.polytope, "assoc or mult")->capture_default_str();
    faces->add_option("--n", fa.n, "arity")->capture_default_str();
    faces->add_option("--format", fa.format, "text or json")->capture_default_str();

    VerticesArgs va;
    va.format = default_format("json");
    auto* vertices = app.add_subcommand("vertices", "Vertex coordinates of K_n or J_n");
    vertices->add_option("--polytope", va.polytope, "assoc or mult")->capture_default_str();
    vertices->add_option("--n", va.n, "arity")->capture_default_str();
    vertices->add_option("--weights", va.weights, "comma separated positive rationals");
    vertices->add_option("--format", va.format, "json or csv")->capture_default_str();

    DiagonalArgs da;
    da.format = default_format("text");
    auto* diagonal = app.add_subcommand("diagonal", "Pairs of faces in the cellular diagonal");
    diagonal->add_option("--polytope", da.polytope, "assoc or mult")->capture_default_str();
    diagonal->add_option("--n", da.n, "arity")->capture_default_str();
    diagonal->add_option("--filter", da.filter, "all, complementary or vertices")->capture_default_str();
    diagonal->add_flag("--signs", da.signs, "print signs");
    diagonal->add_option("--format", da.format, "text, json or csv")->capture_default_str();
    diagonal->add_option("--jobs", da.jobs, "worker threads")->capture_default_str();
    diagonal->add_flag("--force", da.force, "lift the size guard");

    CountsArgs ca;
    ca.format = default_format("text");
    auto* countsc = app.add_subcommand("counts", "Numbers of pairs in the diagonals by dimension");
    countsc->add_option("--polytope", ca.polytope, "assoc, mult or both")->capture_default_str();
    countsc->add_option("--max-dim", ca.max_dim, "largest dimension")->capture_default_str();
    auto* expect = countsc->add_option("--expect", ca.expect_file, "compare with a table (bundled one without a file)")
                       ->expected(0, 1);
    countsc->add_option("--format", ca.format, "text, json or csv")->capture_default_str();
    countsc->add_option("--jobs", ca.jobs, "worker threads")->capture_default_str();
    countsc->add_flag("--force", ca.force, "lift the size guard");

    int sub_n = 3;
    auto* subdiv = app.add_subcommand("subdivision", "Cells of the subdivision of J_n as JSON");
    subdiv->add_option("--n", sub_n, "arity")->capture_default_str();

    SuiteOptions so;
    std::string suite;
    auto* check = app.add_subcommand("check", "Run a check suite");
    check->add_option("suite", suite, "trees, geometry, diagonal, chainmap, defects, nogo, apply or all")
        ->required()
        ->check(CLI::IsMember({"trees", "geometry", "diagonal", "chainmap", "defects", "nogo", "apply", "all"}));
    check->add_option("--max-arity", so.max_arity, "largest arity")->capture_default_str();
    check->add_option("--jobs", so.jobs, "worker threads")->capture_default_str();
    check->add_option("--which", so.which, "chainmap: K, J or comp")->capture_default_str();
    check->add_option("--seed", so.seed, "seed of the random checks")->capture_default_str();

    TensorArgs ta;
    ta.report = default_format("json");
    auto* tensor = app.add_subcommand("tensor", "Tensor product of two A-infinity algebras");
    tensor->add_option("--a", ta.a, "structure JSON file, or fixture:A, fixture:S, fixture:N")->required();
    tensor->add_option("--b", ta.b, "structure JSON file, or fixture:A, fixture:S, fixture:N")->required();
    tensor->add_option("--cap", ta.cap, "largest arity")->capture_default_str();
    tensor->add_option("--report", ta.report, "json or text")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*faces)
            return cmd_faces(fa, out);
        if (*vertices)
            return cmd_vertices(va, out);
        if (*diagonal)
            return cmd_diagonal(da, out);
        if (*countsc) {
            ca.expect = expect->count() > 0;
            return cmd_counts(ca, out, err);
        }
        if (*subdiv)
            return cmd_subdivision(sub_n, out);
        if (*check)
            return cmd_check(suite, so, out);
        if (*tensor)
            return cmd_tensor(ta, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace mdiag::cli
