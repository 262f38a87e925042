#include "hornset/path.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "closure.hpp"
#include "hornset/union_find.hpp"

namespace hornset {

// ---------------------------------------------------------------------------
// Path

Path Path::child(Step s) const {
    std::vector<Step> steps = steps_;
    steps.push_back(std::move(s));
    return Path(std::move(steps));
}

Path Path::concat(const Path& tail) const {
    std::vector<Step> steps = steps_;
    steps.insert(steps.end(), tail.steps_.begin(), tail.steps_.end());
    return Path(std::move(steps));
}

Path Path::prefix(std::size_t n) const {
    return Path(std::vector<Step>(steps_.begin(), steps_.begin() + static_cast<std::ptrdiff_t>(n)));
}

Path Path::suffix_from(std::size_t n) const {
    return Path(std::vector<Step>(steps_.begin() + static_cast<std::ptrdiff_t>(n), steps_.end()));
}

bool Path::is_prefix_of(const Path& other) const {
    if (size() > other.size()) return false;
    return std::equal(steps_.begin(), steps_.end(), other.steps_.begin());
}

std::strong_ordering operator<=>(const Path& a, const Path& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (auto c = a[i] <=> b[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

std::string to_string(const Path& p) {
    if (p.empty()) return "eps";
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += '.';
        out += p[i].ctor;
        if (!p[i].is_marker()) {
            out += '.';
            out += std::to_string(p[i].index);
        }
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const Path& p) { return os << to_string(p); }

std::string to_string(const PathSet& ps) {
    std::string out = "{";
    bool first = true;
    for (const auto& p : ps) {
        if (!first) out += ", ";
        first = false;
        out += to_string(p);
    }
    return out + "}";
}

// ---------------------------------------------------------------------------
// Congruence

Congruence::Congruence(PathSet universe) : universe_(std::move(universe)) {
    std::vector<std::vector<Path>> groups;
    for (const auto& p : universe_) groups.push_back({p});
    normalize(std::move(groups));
}

Congruence::Congruence(PathSet universe, const std::vector<std::vector<Path>>& classes)
    : universe_(std::move(universe)) {
    for (const auto& cls : classes) universe_.insert(cls.begin(), cls.end());
    std::vector<Path> dense(universe_.begin(), universe_.end());
    std::map<Path, std::size_t> index;
    for (std::size_t i = 0; i < dense.size(); ++i) index.emplace(dense[i], i);
    detail::UnionFind uf(dense.size());
    for (const auto& cls : classes) {
        for (std::size_t i = 1; i < cls.size(); ++i) uf.unite(index.at(cls[0]), index.at(cls[i]));
    }
    std::map<std::size_t, std::vector<Path>> grouped;
    for (std::size_t i = 0; i < dense.size(); ++i) grouped[uf.find(i)].push_back(dense[i]);
    std::vector<std::vector<Path>> groups;
    for (auto& [_, g] : grouped) groups.push_back(std::move(g));
    normalize(std::move(groups));
}

void Congruence::normalize(std::vector<std::vector<Path>> groups) {
    for (auto& g : groups) std::sort(g.begin(), g.end());
    std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    classes_ = std::move(groups);
    id_.clear();
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        for (const auto& p : classes_[i]) id_.emplace(p, i);
    }
}

std::optional<std::size_t> Congruence::class_of(const Path& p) const {
    auto it = id_.find(p);
    if (it == id_.end()) return std::nullopt;
    return it->second;
}

bool Congruence::equiv(const Path& a, const Path& b) const {
    if (a == b) return true;
    const std::size_t limit = std::min(a.size(), b.size());
    for (std::size_t k = 0; k <= limit; ++k) {
        if (k > 0 && !(a[a.size() - k] == b[b.size() - k])) break;
        auto ia = class_of(a.prefix(a.size() - k));
        auto ib = class_of(b.prefix(b.size() - k));
        if (ia && ib && *ia == *ib) return true;
    }
    return false;
}

std::vector<std::vector<Path>> Congruence::nontrivial_classes() const {
    std::vector<std::vector<Path>> out;
    for (const auto& c : classes_) {
        if (c.size() > 1) out.push_back(c);
    }
    return out;
}

bool Congruence::subset_of(const Congruence& other) const {
    for (const auto& c : classes_) {
        for (std::size_t i = 1; i < c.size(); ++i) {
            if (!other.equiv(c[0], c[i])) return false;
        }
    }
    return true;
}

std::string to_string(const Congruence& eq) {
    std::string out;
    bool first = true;
    for (const auto& cls : eq.nontrivial_classes()) {
        if (!first) out += ' ';
        first = false;
        out += '{';
        for (std::size_t i = 0; i < cls.size(); ++i) {
            if (i) out += ", ";
            out += to_string(cls[i]);
        }
        out += '}';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Violations

std::string to_string(const Violation& v) {
    static const char* const names[] = {
        "",
        "path set must be finite and non-empty",
        "path set must be closed under siblings of prefixes",
        "path set must be closed under the congruence",
        "equivalent paths must continue with the same constructor",
        "congruence must be stable under suffix extension",
        "congruence must be maximal",
    };
    return "condition " + std::to_string(v.number()) + " (" + names[v.number()] + "): " + v.witness;
}

namespace {

std::string describe(const std::vector<Violation>& vs) {
    std::string out = "invalid term representation";
    for (const auto& v : vs) out += "; " + to_string(v);
    return out;
}

}  // namespace

InvalidRepr::InvalidRepr(std::vector<Violation> violations)
    : std::runtime_error(describe(violations)), violations_(std::move(violations)) {}

// ---------------------------------------------------------------------------
// Terms as path sets

namespace {

void collect_paths(const Term& t, const Path& at, PathSet& out) {
    out.insert(at);
    if (t.is_var()) return;
    if (t.arity() == 0) {
        out.insert(at.child(Step::marker(t.name())));
        return;
    }
    const auto n = static_cast<std::uint32_t>(t.arity());
    for (std::uint32_t i = 0; i < n; ++i) collect_paths(t.args()[i], at.child(Step::into(t.name(), n, i + 1)), out);
}

}  // namespace

PathSet paths(const Term& t) {
    PathSet out;
    collect_paths(t, Path{}, out);
    return out;
}

Term subterm_at(const Term& t, const Path& p) {
    const Term* cur = &t;
    for (const auto& step : p.steps()) {
        if (step.is_marker() || cur->is_var() || cur->name() != step.ctor || cur->arity() != step.arity ||
            step.index < 1 || step.index > cur->arity()) {
            throw UndefinedPath("path " + to_string(p) + " does not address a subterm of " + to_string(t));
        }
        cur = &cur->args()[step.index - 1];
    }
    return *cur;
}

TermRepr repr_of(const Term& t) {
    PathSet ps = paths(t);
    // Subterm positions grouped by syntactic equality; a marker joins the
    // class of its parent's class.
    std::unordered_map<Term, std::size_t, TermHash> subterm_ids;
    std::map<Path, std::size_t> node_class;
    std::map<std::pair<std::size_t, std::string>, std::vector<Path>> marker_groups;
    std::map<std::size_t, std::vector<Path>> groups;
    for (const auto& p : ps) {
        if (p.ends_in_marker()) continue;
        Term sub = subterm_at(t, p);
        auto [it, _] = subterm_ids.emplace(std::move(sub), subterm_ids.size());
        node_class.emplace(p, it->second);
        groups[it->second].push_back(p);
    }
    for (const auto& p : ps) {
        if (!p.ends_in_marker()) continue;
        marker_groups[{node_class.at(p.parent()), p.back().ctor}].push_back(p);
    }
    std::vector<std::vector<Path>> classes;
    for (auto& [_, g] : groups) {
        if (g.size() > 1) classes.push_back(std::move(g));
    }
    for (auto& [_, g] : marker_groups) {
        if (g.size() > 1) classes.push_back(std::move(g));
    }
    Congruence eq(ps, classes);
    return TermRepr{std::move(ps), std::move(eq)};
}

// ---------------------------------------------------------------------------
// Validation

namespace {

// Paths related to p by eq, including suffix-extended pairs a.r ~ b.r.
std::vector<Path> related_paths(const Path& p, const Congruence& eq) {
    std::vector<Path> out;
    for (std::size_t cut = 0; cut <= p.size(); ++cut) {
        const Path head = p.prefix(cut);
        auto id = eq.class_of(head);
        if (!id) continue;
        const Path tail = p.suffix_from(cut);
        for (const auto& other : eq.members(*id)) {
            if (other == head) continue;
            out.push_back(other.concat(tail));
        }
    }
    return out;
}

// The constructor realized at p in ps: the first step of any continuation.
std::set<std::pair<std::string, std::uint32_t>> continuations(const Path& p, const PathSet& ps) {
    std::set<std::pair<std::string, std::uint32_t>> out;
    for (auto it = ps.upper_bound(p); it != ps.end(); ++it) {
        if (it->size() == p.size() + 1 && p.is_prefix_of(*it)) out.emplace(it->back().ctor, it->back().arity);
    }
    return out;
}

std::string pair_witness(const Path& a, const Path& b) { return to_string(a) + " ~ " + to_string(b); }

}  // namespace

std::vector<Violation> validate_repr(const PathSet& ps, const Congruence& eq) {
    using C = Violation::Condition;
    std::vector<Violation> out;

    if (ps.empty()) out.push_back({C::NonEmptyFinite, "empty path set"});

    for (const auto& p : ps) {
        bool reported = false;
        for (std::size_t cut = 0; cut <= p.size() && !reported; ++cut) {
            const Path pre = p.prefix(cut);
            if (!ps.count(pre)) {
                out.push_back({C::SiblingPrefixClosed, "prefix " + to_string(pre) + " of " + to_string(p) + " missing"});
                reported = true;
                break;
            }
            if (cut == 0) continue;
            const Step& last = pre.back();
            if (last.is_marker()) continue;
            for (std::uint32_t j = 1; j <= last.arity; ++j) {
                Path sib = pre.parent().child(Step::into(last.ctor, last.arity, j));
                if (!ps.count(sib)) {
                    out.push_back(
                        {C::SiblingPrefixClosed, "sibling " + to_string(sib) + " of " + to_string(pre) + " missing"});
                    reported = true;
                    break;
                }
            }
        }
    }

    for (const auto& p : ps) {
        for (const auto& q : related_paths(p, eq)) {
            if (!ps.count(q)) {
                out.push_back({C::ClosedUnderCongruence, to_string(p) + " ~ " + to_string(q) + " but " + to_string(q) +
                                                             " is not in the path set"});
            }
        }
    }
    for (const auto& q : eq.universe()) {
        if (!ps.count(q)) {
            auto id = eq.class_of(q);
            if (id && eq.members(*id).size() > 1) {
                out.push_back({C::ClosedUnderCongruence, "class member " + to_string(q) + " is not in the path set"});
            }
        }
    }

    std::map<Path, std::set<std::pair<std::string, std::uint32_t>>> cont;
    for (const auto& p : ps) cont.emplace(p, continuations(p, ps));
    for (const auto& p : ps) {
        const auto& mine = cont.at(p);
        if (mine.size() > 1) {
            out.push_back({C::ConstructorCompatible, to_string(p) + " continues with several constructors"});
            continue;
        }
        if (mine.empty()) continue;
        for (const auto& q : related_paths(p, eq)) {
            if (!(p < q)) continue;
            auto it = cont.find(q);
            if (it == cont.end() || it->second.empty()) continue;
            if (it->second != mine) {
                out.push_back({C::ConstructorCompatible, pair_witness(p, q) + " continue with " + mine.begin()->first +
                                                             " and " + it->second.begin()->first});
            }
        }
    }

    for (const auto& cls : eq.classes()) {
        for (std::size_t i = 0; i < cls.size(); ++i) {
            for (std::size_t j = i + 1; j < cls.size(); ++j) {
                const Path& a = cls[i];
                const Path& b = cls[j];
                for (const auto& ext : eq.universe()) {
                    if (ext.size() <= a.size() || !a.is_prefix_of(ext)) continue;
                    const Path tail = ext.suffix_from(a.size());
                    const Path other = b.concat(tail);
                    if (!eq.contains(other)) continue;
                    if (eq.class_of(ext) != eq.class_of(other)) {
                        out.push_back({C::SuffixStable, pair_witness(a, b) + " but not " + pair_witness(ext, other)});
                    }
                }
            }
        }
    }

    // Maximality: same constructor at both ends with pairwise related children.
    std::vector<Path> nodes;
    for (const auto& p : ps) {
        if (cont.at(p).size() == 1) nodes.push_back(p);
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            const Path& a = nodes[i];
            const Path& b = nodes[j];
            const auto& ctor = *cont.at(a).begin();
            if (*cont.at(b).begin() != ctor) continue;
            if (eq.equiv(a, b)) continue;
            bool children_related = true;
            for (std::uint32_t k = 1; k <= ctor.second && children_related; ++k) {
                const Step s = Step::into(ctor.first, ctor.second, k);
                children_related = eq.equiv(a.child(s), b.child(s));
            }
            if (children_related) {
                out.push_back({C::Maximal, pair_witness(a, b) + " have related children but are not related"});
            }
        }
    }
    return out;
}

Term term_of(const TermRepr& r) {
    if (auto vs = validate_repr(r.paths, r.eq); !vs.empty()) throw InvalidRepr(std::move(vs));

    std::map<Path, std::string> var_names;
    std::vector<Path> endpoints;
    for (const auto& p : r.paths) {
        if (!p.ends_in_marker() && continuations(p, r.paths).empty()) endpoints.push_back(p);
    }
    std::size_t counter = 0;
    for (const auto& p : endpoints) {
        if (var_names.count(p)) continue;
        std::string name = "X" + std::to_string(++counter);
        for (const auto& q : endpoints) {
            if (!var_names.count(q) && r.eq.equiv(p, q)) var_names.emplace(q, name);
        }
    }

    auto build = [&](auto&& self, const Path& at) -> Term {
        auto cont = continuations(at, r.paths);
        if (cont.empty()) return Term::var(var_names.at(at));
        const auto& [ctor, arity] = *cont.begin();
        if (arity == 0) return Term::app(ctor);
        std::vector<Term> args;
        for (std::uint32_t i = 1; i <= arity; ++i) args.push_back(self(self, at.child(Step::into(ctor, arity, i))));
        return Term::app(ctor, std::move(args));
    };
    return build(build, Path{});
}

// ---------------------------------------------------------------------------
// Closure operators

Congruence close_mx(const Congruence& eq, const PathSet& universe) {
    detail::PathClosure closure(detail::PathClosure::NullaryRule::MarkerPresent);
    for (const auto& p : universe) closure.add(p);
    for (const auto& cls : eq.classes()) {
        std::optional<std::size_t> first;
        for (const auto& p : cls) {
            auto idx = closure.index_of(p);
            if (!idx) continue;
            if (first) {
                closure.merge(*first, *idx);
            } else {
                first = idx;
            }
        }
    }
    closure.saturate(/*grow=*/false, /*check=*/false);
    return closure.congruence();
}

PathSet close_paths(const PathSet& ps, const Congruence& eq) {
    std::size_t longest = 0;
    for (const auto& p : ps) longest = std::max(longest, p.size());
    for (const auto& p : eq.universe()) longest = std::max(longest, p.size());
    const std::size_t bound = longest * (eq.universe().size() + ps.size() + 1) + 1;

    PathSet out = ps;
    std::vector<Path> work(ps.begin(), ps.end());
    while (!work.empty()) {
        Path p = std::move(work.back());
        work.pop_back();
        for (auto& q : related_paths(p, eq)) {
            if (q.size() > bound) throw std::invalid_argument("congruence relates a path to one of its extensions");
            if (out.insert(q).second) work.push_back(std::move(q));
        }
    }
    return out;
}

std::optional<TermRepr> lci_repr(std::span<const TermRepr> reprs) {
    if (reprs.empty()) throw std::invalid_argument("lci_repr of an empty list");
    detail::PathClosure closure(detail::PathClosure::NullaryRule::MarkerPresent);
    for (const auto& r : reprs) {
        for (const auto& p : r.paths) closure.add(p);
    }
    for (const auto& r : reprs) {
        for (const auto& cls : r.eq.classes()) {
            const std::size_t first = closure.add(cls.front());
            for (std::size_t i = 1; i < cls.size(); ++i) closure.merge(first, closure.add(cls[i]));
        }
    }
    if (closure.saturate(/*grow=*/true, /*check=*/true) != detail::PathClosure::Outcome::Stable) return std::nullopt;
    TermRepr out{closure.path_set(), closure.congruence()};
    return out;
}

InstanceCheck is_instance(const Term& general, const Term& specific) {
    const TermRepr g = repr_of(general);
    const TermRepr s = repr_of(specific);
    InstanceCheck out;
    if (!std::includes(s.paths.begin(), s.paths.end(), g.paths.begin(), g.paths.end())) return out;
    if (!g.eq.subset_of(s.eq)) return out;
    out.instance = true;
    out.flat = g.paths == s.paths;
    out.linear = out.flat ? g.eq == s.eq : s.eq.subset_of(g.eq) && g.eq.subset_of(s.eq);
    return out;
}

}  // namespace hornset
