#include <doctest.h>

#include <random>

#include "hornset/deletion.hpp"
#include "hornset/syntax.hpp"
#include "support/oracle.hpp"

using namespace hornset;

namespace {

const Signature kSig{{"0", 0}, {"s", 1}, {":", 2}, {"f", 3}, {"g1", 1}, {"g2", 1}, {"g3", 1}};

Term T(const char* text) { return parse_term(text); }
Path P(const char* text) { return parse_path(text, kSig); }
Deletion D(const char* text) { return parse_deletion(text, kSig); }

DeletionSequence S(std::initializer_list<const char*> texts) {
    DeletionSequence out;
    for (const char* t : texts) out.push_back(D(t));
    return out;
}

// The global congruence generated by :.1 ~ :.2 over the successor-pair terms.
GlobalCongruence succ_global(std::vector<Term> extra = {}) {
    std::vector<Term> terms{T("s(s(X)):s(Y)"), T("X:0"), T("s(X):s(X)"), T("0:X"), T("s(X):Y"), T("X:X")};
    terms.insert(terms.end(), extra.begin(), extra.end());
    return GlobalCongruence({{P(":.1"), P(":.2")}}, universe_of(terms));
}

}  // namespace

TEST_CASE("deletion literals") {
    const Deletion d = D(":.1 <- :.1.s.1");
    CHECK(d.anchor == P(":.1"));
    CHECK(d.segment == P("s.1"));
    CHECK(d.target() == P(":.1.s.1"));
    CHECK(to_string(d) == ":.1 <- :.1.s.1");
    CHECK(to_string(S({":.1 <- :.1.s.1", ":.2 <- :.2.s.1"})) == ":.1 <- :.1.s.1, :.2 <- :.2.s.1");
}

TEST_CASE("del_path") {
    const Deletion d = D(":.1 <- :.1.s.1");
    CHECK(*del_path(d, P(":.2")) == P(":.2"));
    CHECK_FALSE(del_path(d, P(":.1")));
    CHECK(*del_path(d, P(":.1.s.1.s.1")) == P(":.1.s.1"));
}

TEST_CASE("del_seq") {
    const PathSet ps = paths(T("s(s(X)):s(Y)"));
    auto id = del_seq({}, ps);
    CHECK(id.paths == ps);
    for (const auto& [to, from] : id.origin) CHECK(to == from);

    auto r = del_seq(S({":.1 <- :.1.s.1", ":.2 <- :.2.s.1"}), ps);
    CHECK(r.paths == paths(T("s(X):Y")));
    CHECK(r.origin.at(P(":.1.s.1")) == P(":.1.s.1.s.1"));

    auto fig = del_seq(S({"f.3 <- f.3.g3.1"}), paths(T("f(g1(X1), X2, g3(X2))")));
    CHECK(fig.paths == paths(T("f(g1(X1), X2, X2)")));
}

TEST_CASE("seq_compatible") {
    const auto r = repr_of(T("s(X):s(X)"));
    CHECK(seq_compatible({}, r.eq, r.paths));
    CHECK(seq_compatible(S({":.1 <- :.1.s.1", ":.2 <- :.2.s.1"}), r.eq, r.paths));
    CHECK_FALSE(seq_compatible(S({":.1 <- :.1.s.1"}), r.eq, r.paths));
}

TEST_CASE("del_cong") {
    const auto r = repr_of(T("s(X):s(X)"));
    CHECK(del_cong({}, r.eq, r.paths) == r.eq);
    const auto both = del_cong(S({":.1 <- :.1.s.1", ":.2 <- :.2.s.1"}), r.eq, r.paths);
    CHECK(both == repr_of(T("X:X")).eq);
    CHECK_THROWS_AS(del_cong(S({":.1 <- :.1.s.1"}), r.eq, r.paths), Incompatible);

    const auto mid = repr_of(T("f(g1(X1), g2(g1(X1)), g3(g2(g1(X1))))"));
    CHECK(del_cong(S({"f.3 <- f.3.g3.1"}), mid.eq, mid.paths) == repr_of(T("f(g1(X1), g2(g1(X1)), g2(g1(X1)))")).eq);
}

TEST_CASE("del_term") {
    CHECK(del_term(S({"f.3 <- f.3.g3.1"}), T("f(g1(X1), X2, g3(X2))")) == T("f(g1(X1), X2, X2)"));
    CHECK(del_term(S({":.1 <- :.1.s.1", ":.2 <- :.2.s.1"}), T("s(s(X)):s(Y)")) == T("s(X):Y"));
    // The segment end is absent: the whole subtree would vanish.
    CHECK_THROWS_AS(del_term(S({"f.3 <- f.3.g3.1"}), T("f(X3, g2(X3), X4)")), InvalidResult);
}

TEST_CASE("single deletions agree with subterm replacement") {
    std::mt19937_64 rng(31);
    oracle::TermGen gen{oracle::mixed_signature(), 5, 4, 0.3};
    int checked = 0;
    for (int i = 0; i < 4000 && checked < 300; ++i) {
        const Term t = oracle::random_term(rng, gen);
        const auto ps = oracle::positions(t);
        const auto& q = ps[std::uniform_int_distribution<std::size_t>(0, ps.size() - 1)(rng)];
        const Term sub = oracle::at(t, q);
        if (sub.arity() == 0) continue;
        auto below = oracle::positions(sub);
        const auto& rest = below[std::uniform_int_distribution<std::size_t>(1, below.size() - 1)(rng)];
        const Path anchor = oracle::path_of(t, q);
        const Path segment = oracle::path_of(sub, rest);
        const Term expected = oracle::replace_at(t, q, oracle::at(sub, rest));
        try {
            const Term got = del_term({Deletion{anchor, segment}}, t);
            ++checked;
            CHECK(oracle::alpha_equivalent(got, expected));
            CHECK(paths(got).size() < paths(t).size());
        } catch (const Incompatible&) {
        }
    }
    CHECK(checked == 300);
}

TEST_CASE("cong_member") {
    const auto gc = succ_global();
    CHECK(cong_member(gc, P(":.1"), P(":.1")));
    CHECK(cong_member(gc, P(":.1.s.1"), P(":.2.s.1")));
    CHECK_FALSE(cong_member(gc, P(":.1"), P(":.1.s.1")));
    CHECK_THROWS_AS(cong_member(gc, P(":.1.s.1.s.1.s.1"), P(":.1")), OutOfUniverse);
}

TEST_CASE("cong_member is an equivalence containing the generators") {
    const auto gc = succ_global();
    std::vector<Path> u(gc.universe().begin(), gc.universe().end());
    for (const auto& [a, b] : gc.generators()) CHECK(gc.member(a, b));
    for (const auto& a : u) {
        CHECK(gc.member(a, a));
        for (const auto& b : u) {
            CHECK(gc.member(a, b) == gc.member(b, a));
            if (!gc.member(a, b)) continue;
            for (const auto& c : u) {
                if (gc.member(b, c)) CHECK(gc.member(a, c));
            }
        }
    }
    CHECK_FALSE(gc.maximality_gap());
}

TEST_CASE("leq_star") {
    const auto gc = succ_global();
    const Term t = T("s(s(X)):s(Y)");
    auto refl = leq_star(t, t, gc);
    REQUIRE(refl.witness);
    CHECK(refl.witness->empty());

    auto r = leq_star(T("s(X):Y"), t, gc);
    REQUIRE(r.witness);
    CHECK(to_string(*r.witness) == ":.1 <- :.1.s.1, :.2 <- :.2.s.1");

    CHECK_FALSE(leq_star(T("X:0"), t, gc).witness);
    CHECK_FALSE(leq(T("s(X)"), T("X")).witness);
}

TEST_CASE("leq_star respects the state cap") {
    const auto gc = succ_global({T("s(s(s(X))):s(s(Y))")});
    CHECK_THROWS_AS(leq_star(T("X:0"), T("s(s(s(X))):s(s(Y))"), gc, SearchLimits{2}), ResourceExhausted);
}

TEST_CASE("less_set") {
    const auto gc = succ_global();
    CHECK(less_set(T("X"), gc) == std::vector<Term>{T("X1")});

    const auto ls = less_set(T("s(s(X)):s(Y)"), gc);
    auto contains = [&](const Term& t) {
        for (const auto& u : ls) {
            if (alpha_eq(u, t)) return true;
        }
        return false;
    };
    CHECK(contains(T("s(s(X)):s(Y)")));
    CHECK(contains(T("s(X):Y")));

    // Idempotent: the less sets of the members add nothing.
    for (const auto& u : ls) {
        for (const auto& w : less_set(u, gc)) {
            bool found = false;
            for (const auto& x : ls) found |= alpha_eq(x, w);
            CHECK(found);
        }
    }
}

TEST_CASE("leq witnesses are embeddings and strictly shrink") {
    std::mt19937_64 rng(37);
    oracle::TermGen gen{oracle::mixed_signature(), 4, 3, 0.3};
    for (int i = 0; i < 60; ++i) {
        const Term t = oracle::random_term(rng, gen);
        for (const auto& u : less_set_plain(t)) {
            auto r = leq(u, t);
            REQUIRE(r.witness);
            const Term got = del_term(*r.witness, t);
            CHECK(alpha_eq(got, u));
            CHECK(oracle::embeds(got, t));
            if (!r.witness->empty()) CHECK(paths(got).size() < paths(t).size());
        }
    }
}

TEST_CASE("check_global") {
    const auto gc = succ_global();
    CHECK(check_global(gc, {T("s(s(X)):s(Y)"), T("X:0"), T("s(X):s(X)"), T("0:X")}).empty());
    auto bad = check_global(GlobalCongruence(), {T("s(X):s(X)")});
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].code == codes::kNotIncluded);
    CHECK(check_global(gc, {T("X:Y")}).empty());
}

TEST_CASE("monitor") {
    Monitor collect(GlobalCongruence(), Monitor::Mode::Collect);
    CHECK(collect.check(T("X:Y"), "test"));
    CHECK_FALSE(collect.check(T("X:X"), "test"));
    CHECK(collect.diagnostics().size() == 1);
    CHECK(collect.checks() == 2);

    Monitor strict(GlobalCongruence(), Monitor::Mode::Throw);
    CHECK_THROWS_AS(strict.check(T("s(X):s(X)"), "test"), MonitorViolation);
}
