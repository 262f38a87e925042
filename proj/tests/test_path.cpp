#include <doctest.h>

#include <random>

#include "hornset/path.hpp"
#include "hornset/syntax.hpp"
#include "support/oracle.hpp"

using namespace hornset;

namespace {

const Signature kSig{{"0", 0}, {"s", 1}, {":", 2}, {"f", 3}, {"g1", 1}, {"g2", 1}, {"g3", 1}};

Term T(const char* text) { return parse_term(text); }
Path P(const char* text) { return parse_path(text, kSig); }

PathSet PS(std::initializer_list<const char*> texts) {
    PathSet out;
    for (const char* t : texts) out.insert(P(t));
    return out;
}

Congruence C(const PathSet& universe, std::initializer_list<std::initializer_list<const char*>> classes) {
    std::vector<std::vector<Path>> cls;
    for (const auto& k : classes) {
        std::vector<Path> members;
        for (const char* t : k) members.push_back(P(t));
        cls.push_back(members);
    }
    return Congruence(universe, cls);
}

bool has_condition(const std::vector<Violation>& vs, int n) {
    for (const auto& v : vs) {
        if (v.number() == n) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("path literals and ordering") {
    CHECK(to_string(Path()) == "eps");
    CHECK(to_string(P(":.1.s.1")) == ":.1.s.1");
    CHECK(to_string(P(":.2.0")) == ":.2.0");
    CHECK(P(":.2.0").ends_in_marker());
    CHECK(P(":.1") < P(":.2"));
    CHECK(P(":.2") < P(":.1.s.1"));  // shorter first
    CHECK(P(":.1").is_prefix_of(P(":.1.s.1")));
    CHECK_FALSE(P(":.2").is_prefix_of(P(":.1.s.1")));
}

TEST_CASE("paths") {
    CHECK(paths(T("X")) == PS({"eps"}));
    CHECK(paths(T("0")) == PS({"eps", "0"}));
    CHECK(paths(T("s(X):Y")) == PS({"eps", ":.1", ":.1.s.1", ":.2"}));
}

TEST_CASE("subterm_at") {
    const Term t = T("s(X):0");
    CHECK(subterm_at(t, Path()) == t);
    CHECK(subterm_at(t, P(":.1.s.1")) == T("X"));
    CHECK_THROWS_AS(subterm_at(t, P(":.2.0")), UndefinedPath);
    CHECK_THROWS_AS(subterm_at(t, P(":.1.s.1.s.1")), UndefinedPath);
}

TEST_CASE("repr_of") {
    CHECK(repr_of(T("X:Y")).eq.nontrivial_classes().empty());

    const auto r = repr_of(T("s(X):s(X)"));
    const auto classes = r.eq.nontrivial_classes();
    REQUIRE(classes.size() == 2);
    CHECK(classes[0] == std::vector<Path>{P(":.1"), P(":.2")});
    CHECK(classes[1] == std::vector<Path>{P(":.1.s.1"), P(":.2.s.1")});

    const auto fig = repr_of(T("f(g1(X1), X2, g3(X2))"));
    CHECK(fig.eq.equiv(P("f.2"), P("f.3.g3.1")));
    CHECK(fig.eq.nontrivial_classes().size() == 1);

    // Marker paths follow their parents' classes.
    const auto zz = repr_of(T("0:0"));
    CHECK(zz.eq.equiv(P(":.1.0"), P(":.2.0")));
    CHECK(zz.eq.equiv(P(":.1"), P(":.2")));
}

TEST_CASE("term_of") {
    CHECK(term_of({PS({"eps"}), Congruence(PS({"eps"}))}) == T("X1"));
    const PathSet xx = PS({"eps", ":.1", ":.2"});
    CHECK(term_of({xx, C(xx, {{":.1", ":.2"}})}) == T("X1:X1"));
    const PathSet missing = PS({"eps", ":.1"});
    try {
        term_of({missing, Congruence(missing)});
        FAIL("expected InvalidRepr");
    } catch (const InvalidRepr& e) {
        CHECK(has_condition(e.violations(), 2));
    }
}

TEST_CASE("validate_repr") {
    const PathSet p3 = PS({"eps", ":.1", ":.2", ":.1.s.1"});
    auto v3 = validate_repr(p3, C(p3, {{":.1", ":.2"}}));
    CHECK(has_condition(v3, 3));

    const PathSet p4 = PS({"eps", ":.1", ":.2", ":.1.s.1", ":.2.0"});
    auto v4 = validate_repr(p4, C(p4, {{":.1", ":.2"}}));
    CHECK(has_condition(v4, 4));

    const PathSet empty;
    CHECK(has_condition(validate_repr(empty, Congruence(empty)), 1));

    // Not maximal: equal children, parents unrelated.
    const PathSet pm = paths(T("s(X):s(X)"));
    auto vm = validate_repr(pm, C(pm, {{":.1.s.1", ":.2.s.1"}}));
    CHECK(has_condition(vm, 6));
}

TEST_CASE("close_mx") {
    const PathSet sxsx = paths(T("s(X):s(X)"));
    const auto closed = close_mx(C(sxsx, {{":.1.s.1", ":.2.s.1"}}), sxsx);
    CHECK(closed.equiv(P(":.1"), P(":.2")));
    CHECK(closed == repr_of(T("s(X):s(X)")).eq);

    const PathSet xy = paths(T("X:Y"));
    CHECK(close_mx(Congruence(xy), xy) == Congruence(xy));

    const PathSet zz = paths(T("0:0"));
    CHECK(close_mx(C(zz, {{":.1.0", ":.2.0"}}), zz).equiv(P(":.1"), P(":.2")));
}

TEST_CASE("close_paths") {
    const PathSet ps = paths(T("s(X):Y"));
    CHECK(close_paths(ps, Congruence(ps)) == ps);

    const PathSet base = PS({"eps", ":.1", ":.2", ":.1.s.1"});
    const auto closed = close_paths(base, C(base, {{":.1", ":.2"}}));
    CHECK(closed.count(P(":.2.s.1")));

    // The figure's top row: merging both congruences reaches the deepest path
    // of the common instance.
    const Term t1 = T("f(g1(X1), X2, g3(X2))");
    const Term t2 = T("f(X3, g2(X3), X4)");
    PathSet joint = paths(t1);
    const PathSet p2 = paths(t2);
    joint.insert(p2.begin(), p2.end());
    const auto merged = C(joint, {{"f.2", "f.3.g3.1"}, {"f.1", "f.2.g2.1"}});
    const auto deep = close_paths(joint, merged);
    CHECK(deep.count(P("f.3.g3.1.g2.1.g1.1")));
}

TEST_CASE("lci_repr") {
    const Term t = T("s(X):s(Y)");
    const std::vector<TermRepr> one{repr_of(t)};
    CHECK(*lci_repr(one) == repr_of(t));

    const std::vector<TermRepr> fig{repr_of(T("f(g1(X1), X2, g3(X2))")), repr_of(T("f(X3, g2(X3), X4)"))};
    auto r = lci_repr(fig);
    REQUIRE(r);
    CHECK(alpha_eq(term_of(*r), T("f(g1(X1), g2(g1(X1)), g3(g2(g1(X1))))")));

    const std::vector<TermRepr> clash{repr_of(T("X:0")), repr_of(T("s(X):s(X)"))};
    CHECK_FALSE(lci_repr(clash));
}

TEST_CASE("is_instance") {
    const Term t = T("s(X):0");
    auto self = is_instance(t, t);
    CHECK(self.instance);
    CHECK(self.flat);
    CHECK(self.linear);

    auto strict = is_instance(T("X:Y"), T("s(0):0"));
    CHECK(strict.instance);
    CHECK_FALSE(strict.flat);

    CHECK_FALSE(is_instance(T("s(X):s(X)"), T("s(s(X)):s(Y)")).instance);
}

TEST_CASE("repr round trip and validity on random terms") {
    std::mt19937_64 rng(17);
    oracle::TermGen gen{oracle::mixed_signature(), 5, 4, 0.3};
    for (int i = 0; i < 300; ++i) {
        const Term t = oracle::random_term(rng, gen);
        const auto r = repr_of(t);
        CHECK(validate_repr(r.paths, r.eq).empty());
        CHECK(oracle::alpha_equivalent(term_of(r), t));
    }
}

TEST_CASE("lci_repr of linear terms is linear") {
    std::mt19937_64 rng(19);
    oracle::TermGen gen{oracle::mixed_signature(), 3, 3, 0.4};
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        Term a = oracle::random_term(rng, gen);
        Term b = oracle::random_term(rng, gen);
        if (!is_linear(a) || !is_linear(b)) continue;
        const std::vector<TermRepr> rs{repr_of(a), repr_of(b)};
        if (auto r = lci_repr(rs)) {
            ++checked;
            CHECK(is_linear(term_of(*r)));
        }
    }
    CHECK(checked > 10);
}

TEST_CASE("lci_repr congruence is below any closed bound") {
    // Bound: the congruence of the common instance itself is transitive and
    // maximality-closed and contains each input congruence (restricted).
    std::mt19937_64 rng(23);
    oracle::TermGen gen{oracle::mixed_signature(), 3, 3, 0.4};
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        Term a = oracle::random_term(rng, gen);
        Term b = rename_apart(oracle::random_term(rng, gen), vars(a)).term;
        auto l = lci(a, b);
        if (!l) continue;
        const std::vector<TermRepr> rs{repr_of(a), repr_of(b)};
        auto r = lci_repr(rs);
        REQUIRE(r);
        ++checked;
        CHECK(r->eq.subset_of(repr_of(*l).eq));
        CHECK(repr_of(a).eq.subset_of(r->eq));
        CHECK(repr_of(b).eq.subset_of(r->eq));
    }
    CHECK(checked > 20);
}
