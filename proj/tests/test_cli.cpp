#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hornset/cli.hpp"
#include "hornset/syntax.hpp"

using namespace hornset;

namespace {

std::string fixture(const std::string& name) { return std::string(HORNSET_FIXTURES) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

bool has_line(const std::string& text, const std::string& line) {
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        if (l == line) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("validate") {
    auto ok = run({"validate", fixture("succ_pairs.hn")});
    CHECK(ok.code == kExitTrue);

    auto m = run({"--format", "machine", "validate", fixture("succ_pairs.hn")});
    CHECK(has_line(m.out, "result=valid"));
    CHECK(has_line(m.out, "clauses=4"));
    CHECK(has_line(m.out, "predicates=2"));

    auto missing = run({"validate", fixture("no_such_file.hn")});
    CHECK(missing.code == kExitDiagnostics);
}

TEST_CASE("syntax errors exit with 2 and report the location") {
    const auto path = std::filesystem::temp_directory_path() / "hornset_cli_bad.hn";
    std::ofstream(path) << "p(X:0).\nq(s(X) <- q(X).\n";
    auto r = run({"--format", "machine", "validate", path.string()});
    CHECK(r.code == kExitDiagnostics);
    CHECK(has_line(r.out, "result=error"));
    CHECK(has_line(r.out, "diagnostic.1.code=syntax"));
    CHECK(has_line(r.out, "diagnostic.1.line=2"));
    CHECK(has_line(r.out, "diagnostic.1.column=8"));
    std::filesystem::remove(path);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == kExitDiagnostics);
    CHECK(run({"frobnicate"}).code == kExitDiagnostics);
    CHECK(run({"--format", "xml", "repr", "X"}).code == kExitDiagnostics);
    CHECK(run({"sat", fixture("succ_pairs.hn")}).code == kExitDiagnostics);  // --goal missing
    CHECK(run({"sat", fixture("succ_pairs.hn"), "--goal", "nope(X)"}).code == kExitDiagnostics);
    CHECK(run({"--help"}).code == kExitTrue);
}

TEST_CASE("sat machine output matches the frozen golden file") {
    auto r = run({"--format", "machine", "sat", fixture("succ_pairs_conj.hn"), "--goal", "pq(s(s(X)):s(s(X)))",
                  "--trace", "--witness"});
    CHECK(r.code == kExitFalse);
    CHECK(r.out == slurp(fixture("sat_machine.golden")));
}

TEST_CASE("sat finds a witness") {
    auto r = run({"--format", "machine", "sat", fixture("succ_pairs_conj.hn"), "--goal", "pq(X:Y)", "--witness"});
    CHECK(r.code == kExitTrue);
    CHECK(has_line(r.out, "result=true"));
    CHECK(has_line(r.out, "witness=0:0"));

    auto pretty = run({"sat", fixture("succ_pairs_conj.hn"), "--goal", "pq(X:Y)", "--witness"});
    CHECK(has_line(pretty.out, "satisfiable"));
    CHECK(has_line(pretty.out, "witness: 0:0"));
}

TEST_CASE("intersect") {
    auto r = run({"--format", "machine", "intersect", fixture("succ_pairs.hn"), "--left", "p", "--right", "q"});
    CHECK(r.code == kExitTrue);
    CHECK(has_line(r.out, "predicate=p_q"));
    CHECK(has_line(r.out, "added.n=2"));
    CHECK(has_line(r.out, "added.1=p_q(s(s(X1)):s(s(X1))) <- p_q(s(X1):s(X1))."));
    CHECK(has_line(r.out, "added.2=p_q(0:0)."));

    const auto path = std::filesystem::temp_directory_path() / "hornset_cli_out.hn";
    auto w = run({"intersect", fixture("succ_pairs.hn"), "--left", "p", "--right", "q", "--out", path.string()});
    CHECK(w.code == kExitTrue);
    auto parsed = parse_program(slurp(path.string()));
    REQUIRE(parsed.ok());
    CHECK(parsed.program->clauses.size() == 6);
    CHECK(run({"validate", path.string()}).code == kExitTrue);
    std::filesystem::remove(path);
}

TEST_CASE("repr") {
    auto r = run({"repr", "s(X):s(X)"});
    CHECK(r.code == kExitTrue);
    CHECK(r.out.find("{:.1, :.2}") != std::string::npos);
    auto m = run({"--format", "machine", "repr", "s(X):s(X)"});
    CHECK(has_line(m.out, "paths.n=5"));
    CHECK(has_line(m.out, "class.1={:.1, :.2}"));
}

TEST_CASE("order") {
    auto r = run({"order", "s(X):Y", "s(s(X)):s(Y)", "--global", fixture("succ_pairs.hn")});
    CHECK(r.code == kExitTrue);
    CHECK(r.out.find(":.1 <- :.1.s.1, :.2 <- :.2.s.1") != std::string::npos);

    auto no = run({"--format", "machine", "order", "X:0", "s(s(X)):s(Y)", "--global", fixture("succ_pairs.hn")});
    CHECK(no.code == kExitFalse);
    CHECK(has_line(no.out, "leq_star=false"));

    auto capped = run({"--format", "machine", "--max-states", "1", "order", "X:0", "s(s(s(X))):s(s(Y))", "--global",
                       fixture("succ_pairs.hn")});
    CHECK(capped.code == kExitExhausted);
    CHECK(has_line(capped.out, "result=resource-exhausted"));
}

TEST_CASE("enum and bound") {
    auto r = run({"--format", "machine", "enum", fixture("succ_pairs.hn"), "--pred", "q", "--depth", "3"});
    CHECK(r.code == kExitTrue);
    CHECK(has_line(r.out, "count=4"));

    auto none = run({"enum", fixture("succ_pairs_conj.hn"), "--pred", "pq", "--depth", "1"});
    CHECK(none.code == kExitFalse);

    auto b = run({"--format", "machine", "bound", fixture("succ_pairs.hn"), "--goal", "q(s(s(X)):s(s(X)))"});
    CHECK(b.code == kExitTrue);
    CHECK(has_line(b.out, "count=10"));
    CHECK(b.out.find("=s(s(X1)):s(s(X1))\n") != std::string::npos);
    CHECK(b.out.find("=s(X1):s(X1)\n") != std::string::npos);
}
