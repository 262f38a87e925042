#include "hornset/deletion.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "closure.hpp"
#include "hornset/union_find.hpp"

namespace hornset {

// ---------------------------------------------------------------------------
// Single deletions and sequences

std::string to_string(const Deletion& d) { return to_string(d.anchor) + " <- " + to_string(d.target()); }

std::string to_string(const DeletionSequence& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ", ";
        out += to_string(s[i]);
    }
    return out;
}

std::optional<Path> del_path(const Deletion& d, const Path& p) {
    if (!d.anchor.is_prefix_of(p)) return p;
    const Path target = d.target();
    if (!target.is_prefix_of(p)) return std::nullopt;
    return d.anchor.concat(p.suffix_from(target.size()));
}

Contracted del_seq(const DeletionSequence& s, const PathSet& ps) {
    std::map<Path, Path> current;  // contracted -> original
    for (const auto& p : ps) current.emplace(p, p);
    for (const auto& d : s) {
        std::map<Path, Path> next;
        for (const auto& [p, orig] : current) {
            auto image = del_path(d, p);
            if (!image) continue;
            if (!next.emplace(*image, orig).second) {
                throw std::logic_error("deletion " + to_string(d) + " maps two paths onto " + to_string(*image));
            }
        }
        current = std::move(next);
    }
    Contracted out;
    for (const auto& [p, orig] : current) out.paths.insert(p);
    out.origin = std::move(current);
    return out;
}

namespace {

PathSet survivors(const Contracted& c) {
    PathSet out;
    for (const auto& [_, orig] : c.origin) out.insert(orig);
    return out;
}

bool survival_constant(const PathSet& alive, const Congruence& eq, const PathSet& ps) {
    for (const auto& cls : eq.classes()) {
        std::optional<bool> seen;
        for (const auto& p : cls) {
            if (!ps.count(p)) continue;
            const bool here = alive.count(p) != 0;
            if (seen && *seen != here) return false;
            seen = here;
        }
    }
    return true;
}

// eq restricted to the survivors, renamed into contracted coordinates.
std::vector<std::vector<Path>> transport(const Contracted& c, const Congruence& eq) {
    std::map<Path, Path> image;
    for (const auto& [p, orig] : c.origin) image.emplace(orig, p);
    std::vector<std::vector<Path>> classes;
    for (const auto& cls : eq.classes()) {
        std::vector<Path> moved;
        for (const auto& p : cls) {
            if (auto it = image.find(p); it != image.end()) moved.push_back(it->second);
        }
        if (moved.size() > 1) classes.push_back(std::move(moved));
    }
    return classes;
}

// Builds the term over a valid representation, naming each variable endpoint
// by the variable found at its origin in t.
Term rebuild(const Contracted& c, const Term& t) {
    auto build = [&](auto&& self, const Path& at) -> Term {
        std::optional<Step> next;
        for (auto it = c.paths.upper_bound(at); it != c.paths.end(); ++it) {
            if (it->size() == at.size() + 1 && at.is_prefix_of(*it)) {
                next = it->back();
                break;
            }
        }
        if (!next) return subterm_at(t, c.origin.at(at));
        if (next->is_marker()) return Term::app(next->ctor);
        std::vector<Term> args;
        for (std::uint32_t i = 1; i <= next->arity; ++i) {
            args.push_back(self(self, at.child(Step::into(next->ctor, next->arity, i))));
        }
        return Term::app(next->ctor, std::move(args));
    };
    return build(build, Path{});
}

}  // namespace

bool seq_compatible(const DeletionSequence& s, const Congruence& eq, const PathSet& ps) {
    return survival_constant(survivors(del_seq(s, ps)), eq, ps);
}

Congruence del_cong(const DeletionSequence& s, const Congruence& eq, const PathSet& ps) {
    const Contracted c = del_seq(s, ps);
    if (!survival_constant(survivors(c), eq, ps)) {
        throw Incompatible("deletion sequence [" + to_string(s) + "] splits a congruence class");
    }
    return close_mx(Congruence(c.paths, transport(c, eq)), c.paths);
}

Term del_term(const DeletionSequence& s, const Term& t) {
    const TermRepr r = repr_of(t);
    const Contracted c = del_seq(s, r.paths);
    if (!survival_constant(survivors(c), r.eq, r.paths)) {
        throw Incompatible("deletion sequence [" + to_string(s) + "] splits a congruence class of " + to_string(t));
    }
    const Congruence eq = close_mx(Congruence(c.paths, transport(c, r.eq)), c.paths);
    auto violations = validate_repr(c.paths, eq);
    if (!violations.empty()) {
        std::string what = "deleting [" + to_string(s) + "] in " + to_string(t) +
                           " gives no term: " + to_string(violations.front());
        throw InvalidResult(std::move(what), std::move(violations));
    }
    Term out = rebuild(c, t);
    if (!(repr_of(out) == TermRepr{c.paths, eq})) {
        throw InvalidResult("deleting [" + to_string(s) + "] in " + to_string(t) +
                                " identifies positions that carried different variables",
                            {});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Global congruence

Path lift_pair_path(const Path& p) {
    std::size_t skip = 0;
    while (skip < p.size() && p[skip].ctor == kPairCtor && !p[skip].is_marker()) ++skip;
    return skip == 0 ? p : p.suffix_from(skip);
}

PathSet universe_of(const std::vector<Term>& terms) {
    PathSet out;
    for (const auto& t : terms) {
        for (const auto& p : paths(t)) out.insert(lift_pair_path(p));
    }
    return out;
}

namespace {

// Adds prefixes and, for every inner step, all sibling steps.
PathSet close_universe(const PathSet& ps) {
    PathSet out;
    for (const auto& p : ps) {
        for (std::size_t n = 0; n <= p.size(); ++n) {
            const Path pre = p.prefix(n);
            out.insert(pre);
            if (n == 0 || pre.back().is_marker()) continue;
            const Step& last = pre.back();
            for (std::uint32_t j = 1; j <= last.arity; ++j) out.insert(pre.parent().child(Step::into(last.ctor, last.arity, j)));
        }
    }
    return out;
}

}  // namespace

GlobalCongruence::GlobalCongruence(std::vector<std::pair<Path, Path>> generators, const PathSet& universe)
    : generators_(std::move(generators)) {
    PathSet seed;
    for (const auto& p : universe) seed.insert(lift_pair_path(p));
    for (auto& [a, b] : generators_) {
        a = lift_pair_path(a);
        b = lift_pair_path(b);
        seed.insert(a);
        seed.insert(b);
    }
    universe_ = close_universe(seed);

    detail::PathClosure closure(detail::PathClosure::NullaryRule::MarkerEquivalent);
    for (const auto& p : universe_) closure.add(p);
    for (const auto& [a, b] : generators_) closure.merge(*closure.index_of(a), *closure.index_of(b));
    closure.saturate(/*grow=*/false, /*check=*/false);
    eq_ = closure.congruence();
}

bool GlobalCongruence::in_universe(const Path& p) const { return universe_.count(lift_pair_path(p)) != 0; }

bool GlobalCongruence::member(const Path& a, const Path& b) const {
    const Path la = lift_pair_path(a);
    const Path lb = lift_pair_path(b);
    auto ia = eq_.class_of(la);
    if (!ia) throw OutOfUniverse(a);
    auto ib = eq_.class_of(lb);
    if (!ib) throw OutOfUniverse(b);
    return *ia == *ib;
}

Congruence GlobalCongruence::restrict_to(const PathSet& ps) const {
    std::map<std::size_t, std::vector<Path>> grouped;
    for (const auto& p : ps) {
        auto id = eq_.class_of(lift_pair_path(p));
        if (!id) throw OutOfUniverse(p);
        grouped[*id].push_back(p);
    }
    std::vector<std::vector<Path>> classes;
    for (auto& [_, g] : grouped) {
        if (g.size() > 1) classes.push_back(std::move(g));
    }
    return Congruence(ps, classes);
}

bool GlobalCongruence::includes(const Term& t) const {
    for (const auto& cls : repr_of(t).eq.nontrivial_classes()) {
        for (std::size_t i = 1; i < cls.size(); ++i) {
            if (!member(cls[0], cls[i])) return false;
        }
    }
    return true;
}

GlobalCongruence GlobalCongruence::extended(const PathSet& more) const {
    PathSet all = universe_;
    all.insert(more.begin(), more.end());
    return GlobalCongruence(generators_, all);
}

GlobalCongruence GlobalCongruence::extended(const std::vector<Term>& terms) const {
    return extended(universe_of(terms));
}

std::optional<std::pair<Path, Path>> GlobalCongruence::maximality_gap() const {
    // Children present in the universe, grouped by constructor.
    std::map<Path, std::map<std::pair<std::string, std::uint32_t>, std::vector<Path>>> kids;
    for (const auto& p : universe_) {
        if (p.empty()) continue;
        kids[p.parent()][{p.back().ctor, p.back().arity}].push_back(p);
    }
    std::vector<Path> nodes;
    for (const auto& [p, _] : kids) nodes.push_back(p);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            const Path& a = nodes[i];
            const Path& b = nodes[j];
            if (member(a, b)) continue;
            for (const auto& [ctor, ka] : kids.at(a)) {
                auto it = kids.at(b).find(ctor);
                if (it == kids.at(b).end()) continue;
                const auto& kb = it->second;
                bool related = false;
                if (ctor.second == 0) {
                    related = member(ka.front(), kb.front());
                } else if (ka.size() == ctor.second && kb.size() == ctor.second) {
                    related = true;
                    for (std::size_t k = 0; k < ka.size() && related; ++k) related = member(ka[k], kb[k]);
                }
                if (related) return std::make_pair(a, b);
            }
        }
    }
    return std::nullopt;
}

bool cong_member(const GlobalCongruence& gc, const Path& a, const Path& b) { return gc.member(a, b); }

std::vector<Diagnostic> check_global(const GlobalCongruence& gc, const std::vector<Term>& terms) {
    std::vector<Diagnostic> out;
    const GlobalCongruence full = gc.extended(terms);
    for (const auto& t : terms) {
        for (const auto& cls : repr_of(t).eq.nontrivial_classes()) {
            bool ok = true;
            for (std::size_t i = 1; i < cls.size() && ok; ++i) {
                if (!full.member(cls[0], cls[i])) {
                    out.push_back(make_error(codes::kNotIncluded, "congruence of " + to_string(t) + " relates " +
                                                                      to_string(cls[0]) + " and " + to_string(cls[i]) +
                                                                      ", which the global congruence does not"));
                    ok = false;
                }
            }
            if (!ok) break;
        }
    }
    if (auto gap = full.maximality_gap()) {
        out.push_back(make_error(codes::kNotMaximal, "global congruence is not maximal at " + to_string(gap->first) +
                                                         " ~ " + to_string(gap->second)));
    }
    return out;
}

bool Monitor::check(const Term& t, const std::string& context) {
    ++checks_;
    for (const auto& p : paths(t)) {
        if (!gc_.in_universe(p)) {
            gc_ = gc_.extended({t});
            ++extensions_;
            break;
        }
    }
    if (gc_.includes(t)) return true;
    Diagnostic d = make_error(codes::kMonitor, context + ": congruence of " + to_string(t) +
                                                   " is not included in the global congruence");
    if (mode_ == Mode::Throw) throw MonitorViolation(std::move(d));
    diagnostics_.push_back(std::move(d));
    return false;
}

// ---------------------------------------------------------------------------
// Deletion search
//
// A search state is the set of surviving nodes of the original term tree
// (markers included). Contracting the segment from a surviving node A to a
// surviving proper descendant B kills A and every survivor below A that is
// not below B. The contracted path of a survivor n is read off its chain of
// surviving ancestors: each survivor contributes the step of the first node
// below its nearest surviving ancestor.

namespace {

struct NodeTree {
    std::vector<Path> path;
    std::vector<Step> step;  // step into the node; unused for the root
    std::vector<std::size_t> extent;  // subtree of n is [n, n + extent[n])
    std::vector<std::vector<std::size_t>> children;
    std::map<Path, std::size_t> index;

    explicit NodeTree(const Term& t) { visit(t, Path{}, std::nullopt); }

    bool is_marker(std::size_t n) const { return n != 0 && step[n].is_marker(); }

private:
    std::size_t visit(const Term& t, const Path& at, std::optional<Step> in) {
        const std::size_t id = path.size();
        path.push_back(at);
        step.push_back(in.value_or(Step{}));
        extent.push_back(1);
        children.emplace_back();
        index.emplace(at, id);
        auto attach = [&](const Step& s, auto&& recurse) {
            const std::size_t child = recurse(at.child(s), s);
            children[id].push_back(child);
        };
        if (t.is_app()) {
            if (t.arity() == 0) {
                attach(Step::marker(t.name()), [&](const Path& p, const Step& s) {
                    const std::size_t m = path.size();
                    path.push_back(p);
                    step.push_back(s);
                    extent.push_back(1);
                    children.emplace_back();
                    index.emplace(p, m);
                    return m;
                });
            } else {
                const auto n = static_cast<std::uint32_t>(t.arity());
                for (std::uint32_t i = 0; i < n; ++i) {
                    const Term& arg = t.args()[i];
                    attach(Step::into(t.name(), n, i + 1),
                           [&](const Path& p, const Step& s) { return visit(arg, p, s); });
                }
            }
        }
        extent[id] = path.size() - id;
        return id;
    }
};

using Alive = std::vector<bool>;

struct SearchSpace {
    const Term& term;
    NodeTree tree;
    TermRepr repr;
    std::vector<std::vector<std::size_t>> blocks;  // survival must be constant on each

    SearchSpace(const Term& t, const Congruence* global) : term(t), tree(t), repr(repr_of(t)) {
        detail::UnionFind uf(tree.path.size());
        auto absorb = [&](const Congruence& eq) {
            for (const auto& cls : eq.classes()) {
                for (std::size_t i = 1; i < cls.size(); ++i) uf.unite(tree.index.at(cls[0]), tree.index.at(cls[i]));
            }
        };
        absorb(repr.eq);
        if (global) absorb(*global);
        std::map<std::size_t, std::vector<std::size_t>> grouped;
        for (std::size_t n = 0; n < tree.path.size(); ++n) grouped[uf.find(n)].push_back(n);
        for (auto& [_, g] : grouped) {
            if (g.size() > 1) blocks.push_back(std::move(g));
        }
    }

    std::vector<std::optional<Path>> contracted(const Alive& alive) const {
        std::vector<std::optional<Path>> out(tree.path.size());
        auto walk = [&](auto&& self, std::size_t n, const std::optional<Path>& base, std::size_t first) -> void {
            std::optional<Path> here_base = base;
            std::size_t here_first = first;
            if (alive[n]) {
                out[n] = base ? base->child(tree.step[first]) : Path{};
                here_base = out[n];
            }
            for (std::size_t c : tree.children[n]) self(self, c, here_base, alive[n] || !base ? c : here_first);
        };
        walk(walk, 0, std::nullopt, 0);
        return out;
    }

    bool compatible(const Alive& alive) const {
        for (const auto& b : blocks) {
            for (std::size_t i = 1; i < b.size(); ++i) {
                if (alive[b[i]] != alive[b[0]]) return false;
            }
        }
        return true;
    }

    Contracted contraction(const Alive& alive, const std::vector<std::optional<Path>>& cps) const {
        Contracted c;
        for (std::size_t n = 0; n < alive.size(); ++n) {
            if (!alive[n]) continue;
            c.paths.insert(*cps[n]);
            c.origin.emplace(*cps[n], tree.path[n]);
        }
        return c;
    }

    // The contracted representation (paths and transported congruence).
    TermRepr result(const Contracted& c) const {
        return TermRepr{c.paths, close_mx(Congruence(c.paths, transport(c, repr.eq)), c.paths)};
    }

    struct Move {
        Deletion deletion;
        Alive next;
    };

    std::vector<Move> moves(const Alive& alive, const std::vector<std::optional<Path>>& cps) const {
        std::vector<Move> out;
        for (std::size_t a = 0; a < alive.size(); ++a) {
            if (!alive[a] || tree.is_marker(a)) continue;
            for (std::size_t b = a + 1; b < a + tree.extent[a]; ++b) {
                if (!alive[b] || tree.is_marker(b)) continue;
                Alive next = alive;
                for (std::size_t k = a; k < a + tree.extent[a]; ++k) {
                    if (k < b || k >= b + tree.extent[b]) next[k] = false;
                }
                out.push_back({Deletion{*cps[a], cps[b]->suffix_from(cps[a]->size())}, std::move(next)});
            }
        }
        std::sort(out.begin(), out.end(), [](const Move& x, const Move& y) {
            if (x.deletion.anchor != y.deletion.anchor) return x.deletion.anchor < y.deletion.anchor;
            return x.deletion.target() < y.deletion.target();
        });
        return out;
    }
};

struct Node {
    Alive alive;
    std::size_t parent;
    Deletion via;
};

DeletionSequence path_to(const std::vector<Node>& nodes, std::size_t i) {
    DeletionSequence s;
    while (i != 0) {
        s.push_back(nodes[i].via);
        i = nodes[i].parent;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

// Breadth-first exploration of all survivor sets reachable from the full tree.
// `visit` returns true to stop; `expand` decides whether successors are generated.
template <class Visit, class Expand>
SearchStats explore(const SearchSpace& space, const SearchLimits& limits, Visit&& visit, Expand&& expand) {
    std::vector<Node> nodes;
    std::unordered_map<Alive, std::size_t> seen;
    nodes.push_back({Alive(space.tree.path.size(), true), 0, {}});
    seen.emplace(nodes[0].alive, 0);
    SearchStats stats;
    stats.states = 1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Alive alive = nodes[i].alive;
        const auto cps = space.contracted(alive);
        if (visit(nodes, i, alive, cps)) break;
        if (!expand(alive)) continue;
        for (auto& move : space.moves(alive, cps)) {
            if (seen.count(move.next)) continue;
            if (stats.states >= limits.max_states) throw ResourceExhausted(limits.max_states);
            seen.emplace(move.next, nodes.size());
            nodes.push_back({std::move(move.next), i, std::move(move.deletion)});
            ++stats.states;
        }
    }
    return stats;
}

std::size_t count_alive(const Alive& a) { return static_cast<std::size_t>(std::count(a.begin(), a.end(), true)); }

OrderResult search_leq(const Term& smaller, const Term& larger, const Congruence* global, const SearchLimits& limits) {
    const SearchSpace space(larger, global);
    const TermRepr goal = repr_of(smaller);
    OrderResult out;
    out.stats = explore(
        space, limits,
        [&](const std::vector<Node>& nodes, std::size_t i, const Alive& alive, const auto& cps) {
            if (count_alive(alive) != goal.paths.size() || !space.compatible(alive)) return false;
            const Contracted c = space.contraction(alive, cps);
            if (c.paths != goal.paths) return false;
            if (!(space.result(c).eq == goal.eq)) return false;
            out.witness = path_to(nodes, i);
            return true;
        },
        [&](const Alive& alive) { return count_alive(alive) > goal.paths.size(); });
    return out;
}

std::vector<Term> search_less(const Term& t, const Congruence* global, const SearchLimits& limits,
                              SearchStats* stats) {
    const SearchSpace space(t, global);
    std::map<std::string, Term> found;
    auto st = explore(
        space, limits,
        [&](const std::vector<Node>&, std::size_t, const Alive& alive, const auto& cps) {
            if (!space.compatible(alive)) return false;
            const TermRepr r = space.result(space.contraction(alive, cps));
            if (!validate_repr(r.paths, r.eq).empty()) return false;
            Term u = canonical(term_of(r));
            found.emplace(canonical_key(u), std::move(u));
            return false;
        },
        [](const Alive&) { return true; });
    if (stats) *stats = st;
    std::vector<Term> out;
    for (auto& [_, u] : found) out.push_back(std::move(u));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

OrderResult leq(const Term& smaller, const Term& larger, const SearchLimits& limits) {
    if (alpha_eq(smaller, larger)) return OrderResult{DeletionSequence{}, SearchStats{1}};
    return search_leq(smaller, larger, nullptr, limits);
}

OrderResult leq_star(const Term& smaller, const Term& larger, const GlobalCongruence& gc, const SearchLimits& limits) {
    if (alpha_eq(smaller, larger)) return OrderResult{DeletionSequence{}, SearchStats{1}};
    if (!gc.includes(larger)) return OrderResult{std::nullopt, SearchStats{0}};
    const Congruence global = gc.restrict_to(paths(larger));
    return search_leq(smaller, larger, &global, limits);
}

std::vector<Term> less_set_plain(const Term& t, const SearchLimits& limits, SearchStats* stats) {
    return search_less(t, nullptr, limits, stats);
}

std::vector<Term> less_set(const Term& t, const GlobalCongruence& gc, const SearchLimits& limits, SearchStats* stats) {
    if (!gc.includes(t)) {
        if (stats) *stats = SearchStats{1};
        return {canonical(t)};
    }
    const Congruence global = gc.restrict_to(paths(t));
    return search_less(t, &global, limits, stats);
}

}  // namespace hornset
