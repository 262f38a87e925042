#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "hornset/engine.hpp"
#include "hornset/syntax.hpp"
#include "support/oracle.hpp"

using namespace hornset;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

HornProgram load(const std::string& name) {
    auto r = parse_program(slurp(std::string(HORNSET_FIXTURES) + "/" + name));
    REQUIRE(r.ok());
    return *r.program;
}

HornProgram program(const char* text) {
    auto r = parse_program(text);
    REQUIRE(r.ok());
    return *r.program;
}

Term T(const char* text) { return parse_term(text); }

bool member(const std::vector<Term>& set, const Term& t) {
    for (const auto& u : set) {
        if (alpha_eq(u, t)) return true;
    }
    return false;
}

bool has_code(const std::vector<Diagnostic>& ds, std::string_view code) {
    for (const auto& d : ds) {
        if (d.code == code) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("validate_program") {
    CHECK(validate_program(load("succ_pairs.hn")).empty());
    CHECK(validate_program(load("succ_pairs_conj.hn")).empty());

    auto grow = validate_program(program("p(X) <- p(s(X)).\np(0)."));
    CHECK(has_code(grow, codes::kNotDecreasing));

    auto two = validate_program(program("p(X:Y) <- p(X), p(Y).\np(0)."));
    CHECK(has_code(two, codes::kBodyCount));

    auto shared = validate_program(program("p(s(X):s(X)).\n"));
    CHECK(has_code(shared, codes::kMissingCongruence));
}

TEST_CASE("inh on the successor-pair conjunction") {
    const HornProgram prog = load("succ_pairs_conj.hn");

    auto no = inh(prog, {"pq", T("s(s(X)):s(s(X))")});
    CHECK_FALSE(no.satisfiable);
    REQUIRE(no.trace.size() == 4);
    using R = TraceStep::Rule;
    CHECK(no.trace[0].rule == R::Expand);
    CHECK(no.trace[1].rule == R::Descend);
    CHECK(no.trace[2].rule == R::Expand);
    CHECK(no.trace[3].rule == R::Occurs);
    CHECK(alpha_eq(no.trace[1].term, T("s(X):s(X)")));
    CHECK(alpha_eq(no.trace[3].term, T("s(s(X)):s(s(X))")));

    auto yes = inh(prog, {"pq", T("X:Y")});
    CHECK(yes.satisfiable);
    REQUIRE(yes.witness);
    CHECK(*yes.witness == T("0:0"));
}

TEST_CASE("inh prunes pure loops and rejects unknown predicates") {
    const HornProgram loop = program("p(X) <- p(X).");
    CHECK_FALSE(inh(loop, {"p", T("X")}).satisfiable);
    CHECK_THROWS_AS(inh(loop, {"nope", T("X")}), EngineError);
}

TEST_CASE("inh never expands an exponent twice on one branch") {
    // A call that repeats an ancestor call on its branch is cut by the occurs
    // rule right away and never descends.
    auto check_run = [](const HornProgram& prog, const Atom& goal) {
        auto r = inh(prog, goal);
        std::vector<std::pair<std::size_t, std::string>> branch;  // (depth, pred + key) of open calls
        for (std::size_t i = 0; i < r.trace.size(); ++i) {
            const auto& step = r.trace[i];
            if (step.rule != TraceStep::Rule::Expand) continue;
            while (!branch.empty() && branch.back().first >= step.depth) branch.pop_back();
            const std::string key = step.pred + " " + canonical_key(step.term);
            bool repeated = false;
            for (const auto& [_, k] : branch) repeated |= k == key;
            if (repeated) {
                REQUIRE(i + 1 < r.trace.size());
                CHECK(r.trace[i + 1].rule == TraceStep::Rule::Occurs);
            }
            branch.emplace_back(step.depth, key);
        }
    };
    const HornProgram prog = load("succ_pairs_conj.hn");
    for (const char* goal : {"s(s(X)):s(Y)", "X:Y", "s(X):s(X)", "0:X", "s(s(X)):s(s(X))"}) {
        for (const char* pred : {"p", "q", "pq"}) check_run(prog, {pred, T(goal)});
    }
}

TEST_CASE("inh witnesses are in the ground extension") {
    const HornProgram prog = load("succ_pairs.hn");
    for (const char* goal : {"s(s(X)):s(Y)", "X:Y", "s(X):s(X)", "0:X", "s(s(s(X))):Y"}) {
        for (const char* pred : {"p", "q"}) {
            auto r = inh(prog, {pred, T(goal)});
            if (!r.satisfiable) continue;
            REQUIRE(r.witness);
            CHECK(is_ground(*r.witness));
            CHECK(oracle::find_match(T(goal), *r.witness).has_value());
            const auto ext = enumerate_extension(prog, pred, term_depth(*r.witness));
            CHECK(std::find(ext.begin(), ext.end(), *r.witness) != ext.end());
        }
    }
}

TEST_CASE("intersect on the successor-pair program") {
    const HornProgram prog = load("succ_pairs.hn");
    auto r = intersect(prog, "p", "q");
    CHECK(r.predicate == "p_q");
    REQUIRE(r.added.size() == 2);
    CHECK(r.diagnostics.empty());
    const Clause& rule = r.added[0].is_fact() ? r.added[1] : r.added[0];
    const Clause& fact = r.added[0].is_fact() ? r.added[0] : r.added[1];
    CHECK(alpha_eq(rule.head.term, T("s(s(X)):s(s(X))")));
    REQUIRE(rule.body.size() == 1);
    CHECK(rule.body[0].pred == "p_q");
    CHECK(alpha_eq(rule.body[0].term, T("s(X):s(X)")));
    CHECK(fact.head.term == T("0:0"));
    CHECK(validate_program(r.program).empty());
}

TEST_CASE("intersect of a predicate with itself keeps its extension") {
    const HornProgram prog = load("succ_pairs.hn");
    for (const char* p : {"p", "q"}) {
        auto r = intersect(prog, p, p);
        for (std::size_t d = 1; d <= 4; ++d) {
            auto m = enumerate_model(r.program, d);
            CHECK(m.at(r.predicate) == m.at(p));
        }
    }
}

TEST_CASE("intersect without unifiable heads yields an empty predicate") {
    const HornProgram prog = program("constructors 0/0, s/1.\np(0).\nq(s(X)) <- q(X).\nq(s(0)).");
    auto r = intersect(prog, "p", "q");
    CHECK(r.added.empty());
    CHECK(r.program.clauses_of(r.predicate).empty());
    CHECK_FALSE(inh(r.program, {r.predicate, T("X")}).satisfiable);
    // The empty predicate survives rendering.
    auto again = parse_program(render_program(r.program));
    REQUIRE(again.ok());
    CHECK(same_program(*again.program, r.program));
}

TEST_CASE("intersect names are deduplicated") {
    const HornProgram prog = program("p(0).\nq(0).\np_q(0).");
    auto r = intersect(prog, "p", "q");
    CHECK(r.predicate == "p_q_1");
}

TEST_CASE("bound_set") {
    const HornProgram prog = load("succ_pairs.hn");
    const auto bs = bound_set(prog, T("s(s(X)):s(s(X))"));
    CHECK(member(bs, T("s(s(X)):s(s(X))")));
    CHECK(member(bs, T("s(X):s(X)")));
    CHECK(member(bound_set(prog, T("X")), T("X")));

    // Closed under pairwise lci.
    for (const auto& a : bs) {
        for (const auto& b : bs) {
            if (auto l = lci(a, b)) CHECK(member(bs, *l));
        }
    }
}

TEST_CASE("inh exponents stay inside the bound set") {
    const HornProgram prog = load("succ_pairs_conj.hn");
    for (const char* goal : {"s(s(X)):s(s(X))", "X:Y"}) {
        auto r = inh(prog, {"pq", T(goal)});
        const auto bs = bound_set(prog, T(goal));
        for (const auto& e : r.exponents) CHECK(member(bs, e));
    }
}
