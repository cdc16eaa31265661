#include "mdiag/io.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

#ifndef MDIAG_DEFAULT_DATA_DIR
#define MDIAG_DEFAULT_DATA_DIR "data"
#endif

namespace mdiag::io {

Json to_json(const Nesting& N)
{
    Json j;
    j["n"] = N.n;
    Json nests = Json::array();
    for (const Nest& t : N.nests) {
        Json e;
        Json edges = Json::array();
        for (int i = t.lo; i <= t.hi; ++i)
            edges.push_back(i);
        e["edges"] = edges;
        if (t.color != Color::none)
            e["color"] = std::string(1, color_char(t.color));
        nests.push_back(e);
    }
    j["nests"] = nests;
    return j;
}

Nesting nesting_from_json(const Json& j, Kind k)
{
    Nesting N;
    N.kind = k;
    N.n = j.at("n").get<int>();
    for (const auto& e : j.at("nests")) {
        auto edges = e.at("edges").get<std::vector<int>>();
        if (edges.empty())
            throw std::invalid_argument("nest without edges");
        for (std::size_t i = 1; i < edges.size(); ++i)
            if (edges[i] != edges[i - 1] + 1)
                throw std::invalid_argument("nest edges must be an interval");
        Nest t{edges.front(), edges.back(), Color::none};
        if (e.contains("color"))
            t.color = color_of_char(e.at("color").get<std::string>().at(0));
        N.nests.push_back(t);
    }
    N.normalize();
    validate_nesting(N);
    return N;
}

Json to_json(const SignedPair& p, bool with_sign)
{
    Json j;
    if (with_sign)
        j["sign"] = p.sign;
    j["left"] = to_string(p.left);
    j["right"] = to_string(p.right);
    j["left_nesting"] = to_json(p.left);
    j["right_nesting"] = to_json(p.right);
    return j;
}

Json to_json(const RatPoint& p)
{
    Json j = Json::array();
    for (const auto& q : p)
        j.push_back(to_string(q));
    return j;
}

Json to_json(const op::FormalSum& x)
{
    Json j = Json::array();
    for (const auto& [m, c] : x.terms())
        j.push_back({{"coef", c}, {"term", op::to_string(m)}});
    return j;
}

op::FormalSum formal_sum_from_json(const Json& j)
{
    op::FormalSum x;
    for (const auto& e : j)
        x.add(op::parse_monomial(e.at("term").get<std::string>()), e.at("coef").get<long long>());
    return x;
}

namespace {

int basis_ref(const alg::FinComplex& V, const Json& r)
{
    if (r.is_number_integer()) {
        int i = r.get<int>();
        if (i < 0 || i >= V.dim())
            throw std::invalid_argument("basis index out of range");
        return i;
    }
    return V.index(r.get<std::string>());
}

alg::MultiMap map_from_rows(const Json& rows, const alg::Cx& V, int arity, int degree, bool co)
{
    std::vector<alg::Cx> many(arity, V);
    alg::MultiMap F = co ? alg::zero_map({V}, many, degree) : alg::zero_map(many, {V}, degree);
    for (const auto& row : rows) {
        if (!row.is_array() || static_cast<int>(row.size()) != arity + 2)
            throw std::invalid_argument("operation rows are [coef, in..., out]");
        alg::Tuple in, out;
        for (int i = 0; i < arity; ++i)
            in.push_back(basis_ref(*V, row[1 + i]));
        out.push_back(basis_ref(*V, row[arity + 1]));
        F.add(in, out, row[0].get<long long>());
    }
    if (!alg::homogeneous(F))
        throw std::invalid_argument("operation of arity " + std::to_string(arity) + " is not of degree " +
                                    std::to_string(degree));
    return F;
}

}  // namespace

Json to_json(const alg::AInfAlgebra& A)
{
    const alg::FinComplex& V = *A.V;
    Json basis = Json::array(), d = Json::array();
    for (int i = 0; i < V.dim(); ++i)
        basis.push_back({{"name", V.names[i]}, {"degree", V.degrees[i]}});
    for (int i = 0; i < V.dim(); ++i)
        for (auto [k, c] : V.d[i])
            d.push_back(Json::array({c, V.names[i], V.names[k]}));
    Json ops = Json::object();
    for (const auto& [n, F] : A.m) {
        Json rows = Json::array();
        for (const auto& [in, v] : F.entries)
            for (const auto& [out, c] : v) {
                Json row = Json::array({c});
                for (int x : in)
                    row.push_back(V.names[x]);
                row.push_back(V.names[out[0]]);
                rows.push_back(row);
            }
        ops["m" + std::to_string(n)] = rows;
    }
    return {{"complex", {{"basis", basis}, {"d", d}}}, {"ops", ops}, {"cap", A.cap}};
}

alg::Alg algebra_from_json(const Json& j)
{
    auto V = std::make_shared<alg::FinComplex>();
    for (const auto& b : j.at("complex").at("basis")) {
        V->names.push_back(b.at("name").get<std::string>());
        V->degrees.push_back(b.at("degree").get<int>());
    }
    V->d.resize(V->names.size());
    if (j.at("complex").contains("d"))
        for (const auto& row : j.at("complex").at("d")) {
            if (!row.is_array() || row.size() != 3)
                throw std::invalid_argument("differential rows are [coef, from, to]");
            V->d[basis_ref(*V, row[1])][basis_ref(*V, row[2])] += row[0].get<long long>();
        }
    for (auto& m : V->d)
        std::erase_if(m, [](const auto& e) { return e.second == 0; });
    V->validate();
    auto A = std::make_shared<alg::AInfAlgebra>();
    A->V = V;
    A->cap = j.value("cap", 4);
    if (j.contains("ops"))
        for (const auto& [key, rows] : j.at("ops").items()) {
            if (key.size() < 2 || key[0] != 'm')
                throw std::invalid_argument("unknown operation '" + key + "'");
            int n = std::stoi(key.substr(1));
            if (n < 2)
                throw std::invalid_argument("operations start at m2");
            if (n > A->cap)
                A->cap = n;
            alg::MultiMap F = map_from_rows(rows, V, n, n - 2, false);
            if (!F.zero())
                A->m[n] = std::move(F);
        }
    alg::Report r = alg::check_stasheff(*A, A->cap);
    if (!r.ok())
        throw std::invalid_argument("structure fails the Stasheff identities: " + r.summary());
    return A;
}

Json to_json(const alg::MultiMap& F)
{
    Json rows = Json::array();
    for (const auto& [in, v] : F.entries)
        for (const auto& [out, c] : v) {
            Json row = Json::array({c});
            for (std::size_t i = 0; i < in.size(); ++i)
                row.push_back(F.src[i]->names[in[i]]);
            for (std::size_t i = 0; i < out.size(); ++i)
                row.push_back(F.dst[i]->names[out[i]]);
            rows.push_back(row);
        }
    return rows;
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

std::string data_dir()
{
    if (const char* env = std::getenv("MDIAG_DATA_DIR"); env && *env)
        return env;
    return MDIAG_DEFAULT_DATA_DIR;
}

const Json& printed_data()
{
    static const Json j = read_json_file(data_dir() + "/printed.json");
    return j;
}

const Json& expected_counts()
{
    static const Json j = read_json_file(data_dir() + "/counts_expected.json");
    return j;
}

}  // namespace mdiag::io
