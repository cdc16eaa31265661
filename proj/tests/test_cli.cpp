#include <doctest.h>

#include <sstream>

#include "mdiag/cli.hpp"

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<const char*> args)
{
    args.insert(args.begin(), "mdiag");
    std::ostringstream out, err;
    int code = mdiag::cli::run(static_cast<int>(args.size()), args.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("diagonal text output")
{
    Result r = run({"diagonal", "--polytope", "mult", "--n", "2", "--signs"});
    CHECK(r.code == 0);
    CHECK(r.out == "+ b(**) (x) p(**)\n+ p(**) (x) r(**)\n");
}

TEST_CASE("counts table")
{
    Result r = run({"counts", "--polytope", "mult", "--max-dim", "3"});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "polytope dim complementary vertex_pairs\nmult 0 1 1\nmult 1 2 3\nmult 2 8 17\nmult 3 42 122\n");
    Result e = run({"counts", "--max-dim", "4", "--expect"});
    CHECK(e.code == 0);
    CHECK(e.err.find("PASS") != std::string::npos);
}

TEST_CASE("output is deterministic")
{
    for (std::vector<const char*> args : {std::vector<const char*>{"diagonal", "--n", "4", "--signs", "--format", "json"},
                                          {"vertices", "--polytope", "mult", "--n", "4"},
                                          {"faces", "--polytope", "assoc", "--n", "5", "--format", "json"},
                                          {"subdivision", "--n", "3"}}) {
        Result a = run(args), b = run(args);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        CHECK_FALSE(a.out.empty());
    }
}

TEST_CASE("vertices JSON carries rational strings")
{
    Result r = run({"vertices", "--polytope", "mult", "--n", "3", "--weights", "1,1/2,2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"weights\"") != std::string::npos);
    CHECK(r.out.find("\"1/2\"") != std::string::npos);
}

TEST_CASE("usage errors exit with 2")
{
    CHECK(run({"diagonal", "--n", "3", "--bogus"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"diagonal", "--polytope", "cube"}).code == 2);
    CHECK(run({"diagonal", "--format", "xml"}).code == 2);
    CHECK(run({"check", "nothing"}).code == 2);
    CHECK(run({"vertices", "--n", "3", "--weights", "1,0,1"}).code == 2);
}

TEST_CASE("size guards need --force")
{
    Result r = run({"diagonal", "--polytope", "mult", "--n", "8"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--force") != std::string::npos);
    CHECK(run({"diagonal", "--polytope", "assoc", "--n", "9"}).code == 2);
    CHECK(run({"counts", "--max-dim", "7"}).code == 2);
}

TEST_CASE("check suites print one line per check")
{
    Result r = run({"check", "nogo"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("PASS nogo.alpha: ", 0) == 0);
    Result c = run({"check", "chainmap", "--which", "K", "--max-arity", "3"});
    CHECK(c.code == 0);
    CHECK(c.out.rfind("PASS chainmap.K", 0) == 0);
}

TEST_CASE("tensor of fixtures")
{
    Result r = run({"tensor", "--a", "fixture:A", "--b", "fixture:S", "--cap", "4", "--report", "text"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS stasheff") != std::string::npos);
    CHECK(run({"tensor", "--a", "/nonexistent.json", "--b", "fixture:S"}).code != 0);
}
