#include "hornset/engine.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace hornset {

// ---------------------------------------------------------------------------
// Programs

std::vector<std::string> HornProgram::predicates() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    auto note = [&](const std::string& p) {
        if (seen.insert(p).second) out.push_back(p);
    };
    for (const auto& c : clauses) note(c.head.pred);
    for (const auto& c : clauses) {
        for (const auto& b : c.body) note(b.pred);
    }
    for (const auto& p : declared) note(p);
    return out;
}

std::vector<std::size_t> HornProgram::clauses_of(const std::string& pred) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
        if (clauses[i].head.pred == pred) out.push_back(i);
    }
    return out;
}

GlobalCongruence HornProgram::global_congruence(const std::vector<Term>& extra) const {
    std::vector<Term> terms = extra;
    for (const auto& c : clauses) {
        terms.push_back(c.head.term);
        for (const auto& b : c.body) terms.push_back(b.term);
    }
    return GlobalCongruence(congruence, universe_of(terms));
}

bool same_program(const HornProgram& a, const HornProgram& b) {
    if (a.signature.constructors() != b.signature.constructors()) return false;
    if (a.congruence != b.congruence || a.congruence_declared != b.congruence_declared) return false;
    if (a.predicates() != b.predicates()) return false;
    if (a.clauses.size() != b.clauses.size()) return false;
    for (std::size_t i = 0; i < a.clauses.size(); ++i) {
        if (!(a.clauses[i].head == b.clauses[i].head) || a.clauses[i].body != b.clauses[i].body) return false;
    }
    return true;
}

namespace {

std::string clause_label(std::size_t i) { return "clause " + std::to_string(i + 1); }

std::set<std::string> clause_vars(const Clause& c) {
    std::set<std::string> out = vars(c.head.term);
    for (const auto& b : c.body) {
        auto vs = vars(b.term);
        out.insert(vs.begin(), vs.end());
    }
    return out;
}

// Renames head and body variables of c jointly so that none is in `avoid`.
Clause rename_clause(const Clause& c, const std::set<std::string>& avoid) {
    Substitution renaming;
    std::set<std::string> taken = avoid;
    auto cv = clause_vars(c);
    taken.insert(cv.begin(), cv.end());
    for (const auto& v : cv) {
        if (!avoid.count(v)) continue;
        std::size_t k = 1;
        while (taken.count(v + std::to_string(k))) ++k;
        const std::string fresh = v + std::to_string(k);
        taken.insert(fresh);
        renaming.emplace(v, Term::var(fresh));
    }
    Clause out = c;
    out.head.term = hornset::apply(renaming, c.head.term);
    for (auto& b : out.body) b.term = hornset::apply(renaming, b.term);
    return out;
}

// Variables renamed X1, X2, ... in first-occurrence order over head then body.
Clause canonical_clause(Clause c) {
    Term joined = c.head.term;
    for (const auto& b : c.body) joined = Term::pair(joined, b.term);
    Substitution s;
    std::size_t n = 0;
    for (const auto& x : vars_in_order(joined)) s.emplace(x, Term::var("X" + std::to_string(++n)));
    c.head.term = hornset::apply(s, c.head.term);
    for (auto& b : c.body) b.term = hornset::apply(s, b.term);
    return c;
}

Signature effective_signature(const HornProgram& prog) {
    Signature sig = prog.signature;
    for (const auto& c : prog.clauses) {
        sig.infer_from(c.head.term);
        for (const auto& b : c.body) sig.infer_from(b.term);
    }
    return sig;
}

}  // namespace

// ---------------------------------------------------------------------------
// Validation

std::vector<Diagnostic> validate_program(const HornProgram& prog, const SearchLimits& limits) {
    std::vector<Diagnostic> out;
    const auto& cs = prog.clauses;

    bool shape_ok = true;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const Clause& c = cs[i];
        auto check_sig = [&](const Term& t) {
            if (prog.signature.empty()) return;
            if (auto bad = prog.signature.check(t)) {
                out.push_back(make_error(codes::kSignature, clause_label(i) + ": " + *bad, c.location));
                shape_ok = false;
            }
        };
        check_sig(c.head.term);
        for (const auto& b : c.body) check_sig(b.term);
        if (c.body.size() > 1) {
            out.push_back(make_error(codes::kBodyCount,
                                     clause_label(i) + " has " + std::to_string(c.body.size()) +
                                         " body atoms; at most one is supported",
                                     c.location));
            shape_ok = false;
            for (std::size_t j = 0; j < c.body.size(); ++j) {
                for (std::size_t k = j + 1; k < c.body.size(); ++k) {
                    auto vj = vars(c.body[j].term);
                    for (const auto& v : vars(c.body[k].term)) {
                        if (vj.count(v)) {
                            out.push_back(make_error(codes::kBodyVariables,
                                                     clause_label(i) + ": body atoms " + std::to_string(j + 1) +
                                                         " and " + std::to_string(k + 1) + " share variable " + v,
                                                     c.location));
                            break;
                        }
                    }
                }
            }
        }
    }
    if (!shape_ok) return out;

    if (!prog.congruence_declared) {
        for (std::size_t i = 0; i < cs.size(); ++i) {
            if (!repr_of(cs[i].head.term).eq.nontrivial_classes().empty()) {
                out.push_back(make_error(codes::kMissingCongruence,
                                         clause_label(i) + " head " + to_string(cs[i].head.term) +
                                             " shares subterms, so a congruence block is required",
                                         cs[i].location));
                return out;
            }
        }
    }

    // Pairs of heads (and of bodies) with the second clause renamed apart.
    std::vector<std::vector<Clause>> partner(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t j = 0; j < cs.size(); ++j) {
            partner[i].push_back(rename_clause(cs[j], clause_vars(cs[i])));
        }
    }
    const GlobalCongruence gc = prog.global_congruence();
    Monitor monitor(gc, Monitor::Mode::Collect);

    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (!gc.includes(cs[i].head.term)) {
            out.push_back(make_error(codes::kHeadNotIncluded,
                                     clause_label(i) + ": congruence of head " + to_string(cs[i].head.term) +
                                         " is not included in the global congruence",
                                     cs[i].location));
        }
    }
    for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t j = i; j < cs.size(); ++j) {
            const Term pair = Term::pair(cs[i].head.term, partner[i][j].head.term);
            if (!gc.includes(pair)) {
                out.push_back(make_error(codes::kPairNotIncluded,
                                         "clauses " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                             ": congruence of head pair " + to_string(pair) +
                                             " is not included in the global congruence",
                                         cs[i].location));
            }
        }
    }

    for (std::size_t i = 0; i < cs.size(); ++i) {
        const Clause& c = cs[i];
        if (c.is_fact()) continue;
        try {
            auto r = leq_star(c.body[0].term, c.head.term, gc, limits);
            if (!r.witness) {
                out.push_back(make_error(codes::kNotDecreasing,
                                         clause_label(i) + ": body " + to_string(c.body[0].term) +
                                             " is not below head " + to_string(c.head.term) + " (searched " +
                                             std::to_string(r.stats.states) + " states)",
                                         c.location));
            } else {
                monitor.check(c.body[0].term, clause_label(i) + " body");
            }
        } catch (const ResourceExhausted& e) {
            out.push_back(make_error(codes::kSearchExhausted, clause_label(i) + ": " + e.what(), c.location));
        }
    }

    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (cs[i].is_fact()) continue;
        for (std::size_t j = i; j < cs.size(); ++j) {
            const Clause& other = partner[i][j];
            if (other.is_fact()) continue;
            const Term head = Term::pair(cs[i].head.term, other.head.term);
            const Term body = Term::pair(cs[i].body[0].term, other.body[0].term);
            try {
                auto r = leq_star(body, head, gc, limits);
                if (!r.witness) {
                    out.push_back(make_error(codes::kPairNotDecreasing,
                                             "clauses " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                                 ": body pair " + to_string(body) + " is not below head pair " +
                                                 to_string(head) + " (searched " + std::to_string(r.stats.states) +
                                                 " states)",
                                             cs[i].location));
                }
            } catch (const ResourceExhausted& e) {
                out.push_back(make_error(codes::kSearchExhausted,
                                         "clauses " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + ": " +
                                             e.what(),
                                         cs[i].location));
            }
        }
    }

    for (const auto& d : monitor.diagnostics()) out.push_back(d);
    if (auto gap = monitor.global().maximality_gap()) {
        out.push_back(make_error(codes::kNotMaximal, "global congruence is not maximal at " +
                                                          to_string(gap->first) + " ~ " + to_string(gap->second)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Satisfiability

std::string rule_name(TraceStep::Rule r) {
    switch (r) {
        case TraceStep::Rule::Expand: return "expand";
        case TraceStep::Rule::Occurs: return "occurs";
        case TraceStep::Rule::Descend: return "descend";
        case TraceStep::Rule::Fact: return "fact";
    }
    return "expand";
}

namespace {

class InhRun {
public:
    InhRun(const HornProgram& prog, const Atom& goal)
        : prog_(prog), goal_(goal), monitor_(prog.global_congruence({goal.term}), Monitor::Mode::Throw) {}

    InhResult run() {
        const auto preds = prog_.predicates();
        if (std::find(preds.begin(), preds.end(), goal_.pred) == preds.end()) {
            throw EngineError(make_error(codes::kUnknownPredicate, "unknown predicate " + goal_.pred));
        }
        if (!monitor_.global().includes(goal_.term)) {
            throw EngineError(make_error(codes::kGoalNotIncluded, "congruence of goal term " + to_string(goal_.term) +
                                                                      " is not included in the global congruence"));
        }
        result_.exponents.push_back(canonical(goal_.term));
        result_.satisfiable = inh_or(goal_.pred, goal_.term, {}, {}, 0);
        result_.monitor_checks = monitor_.checks();
        return std::move(result_);
    }

private:
    using Occ = std::set<std::pair<std::string, std::string>>;

    void record(TraceStep::Rule rule, const std::string& pred, const Term& t, std::size_t depth, std::size_t clause) {
        result_.trace.push_back({rule, pred, canonical(t), depth, clause});
    }

    // Rule 1: disjunction over the clauses whose head unifies with `t`.
    bool inh_or(const std::string& pred, const Term& t, const Occ& occ, const Substitution& sigma, std::size_t depth) {
        for (std::size_t i : prog_.clauses_of(pred)) {
            const Clause c = fresh(prog_.clauses[i]);
            auto beta = mgu(t, c.head.term);
            if (!beta) continue;
            const Term exponent = hornset::apply(*beta, c.head.term);
            record(TraceStep::Rule::Expand, pred, exponent, depth, i);
            result_.exponents.push_back(canonical(exponent));
            monitor_.check(exponent, "expansion with " + clause_label(i));
            if (inh_and(c, i, *beta, exponent, occ, compose(*beta, sigma), depth + 1)) return true;
        }
        return false;
    }

    // Rules 2-4 on the instance of clause c with head instance `exponent`.
    bool inh_and(const Clause& c, std::size_t index, const Substitution& beta, const Term& exponent, const Occ& occ,
                 const Substitution& sigma, std::size_t depth) {
        auto key = std::make_pair(c.head.pred, canonical_key(exponent));
        if (occ.count(key)) {
            record(TraceStep::Rule::Occurs, c.head.pred, exponent, depth, index);
            return false;
        }
        if (c.is_fact()) {
            record(TraceStep::Rule::Fact, c.head.pred, exponent, depth, index);
            result_.witness = ground(hornset::apply(sigma, goal_.term));
            return true;
        }
        const Atom& body = c.body.front();
        const Term next = hornset::apply(beta, body.term);
        record(TraceStep::Rule::Descend, body.pred, next, depth, index);
        result_.exponents.push_back(canonical(next));
        monitor_.check(next, "body instance of " + clause_label(index));
        Occ extended = occ;
        extended.insert(std::move(key));
        return inh_or(body.pred, next, extended, sigma, depth + 1);
    }

    Clause fresh(const Clause& c) {
        Substitution s;
        const std::string tag = "#" + std::to_string(++counter_);
        for (const auto& v : clause_vars(c)) s.emplace(v, Term::var(v + tag));
        Clause out = c;
        out.head.term = hornset::apply(s, c.head.term);
        for (auto& b : out.body) b.term = hornset::apply(s, b.term);
        return out;
    }

    std::optional<Term> ground(const Term& t) {
        auto filler = effective_signature(prog_).least_ground_term();
        if (!filler) return std::nullopt;
        Substitution s;
        for (const auto& v : vars(t)) s.emplace(v, *filler);
        return hornset::apply(s, t);
    }

    const HornProgram& prog_;
    const Atom& goal_;
    Monitor monitor_;
    InhResult result_;
    std::size_t counter_ = 0;
};

}  // namespace

InhResult inh(const HornProgram& prog, const Atom& goal, const InhOptions&) {
    for (const auto& c : prog.clauses) {
        if (c.body.size() > 1) {
            throw EngineError(make_error(codes::kBodyCount, "clauses with more than one body atom are not supported",
                                         c.location));
        }
    }
    return InhRun(prog, goal).run();
}

// ---------------------------------------------------------------------------
// Intersection

IntersectResult intersect(const HornProgram& prog, const std::string& left, const std::string& right) {
    IntersectResult out;
    out.program = prog;
    const auto existing = prog.predicates();
    for (const auto& p : {left, right}) {
        if (std::find(existing.begin(), existing.end(), p) == existing.end()) {
            throw EngineError(make_error(codes::kUnknownPredicate, "unknown predicate " + p));
        }
    }
    std::set<std::string> taken(existing.begin(), existing.end());
    std::map<std::pair<std::string, std::string>, std::string> memo;
    std::deque<std::pair<std::string, std::string>> work;

    auto name_for = [&](const std::string& a, const std::string& b) -> std::string {
        auto key = std::make_pair(a, b);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::string name = a + "_" + b;
        for (std::size_t k = 1; taken.count(name); ++k) name = a + "_" + b + "_" + std::to_string(k);
        taken.insert(name);
        memo.emplace(key, name);
        out.names.push_back({name, key});
        work.push_back(key);
        return name;
    };
    out.predicate = name_for(left, right);

    while (!work.empty()) {
        const auto [a, b] = work.front();
        work.pop_front();
        const std::string name = memo.at({a, b});
        for (std::size_t i : prog.clauses_of(a)) {
            const Clause& c1 = prog.clauses[i];
            for (std::size_t j : prog.clauses_of(b)) {
                const Clause c2 = rename_clause(prog.clauses[j], clause_vars(c1));
                if (c1.body.size() > 1 || c2.body.size() > 1) continue;
                auto beta = mgu(c1.head.term, c2.head.term);
                if (!beta) continue;
                Clause made;
                made.head = {name, hornset::apply(*beta, c1.head.term)};
                if (c1.is_fact() && c2.is_fact()) {
                    // fact with fact: a fact
                } else if (c1.is_fact() || c2.is_fact()) {
                    // The fact side holds on every instance; only the rule's body remains.
                    const Atom& body = c1.is_fact() ? c2.body[0] : c1.body[0];
                    made.body.push_back({body.pred, hornset::apply(*beta, body.term)});
                } else {
                    Term b1 = hornset::apply(*beta, c1.body[0].term);
                    Term b2 = hornset::apply(*beta, c2.body[0].term);
                    if (!(b1 == b2)) {
                        auto gamma = mgu(b1, b2);
                        const std::string which =
                            "clauses " + std::to_string(i + 1) + " and " + std::to_string(j + 1);
                        if (!gamma) {
                            out.diagnostics.push_back(make_warning(
                                codes::kBodyMismatch, which + ": body instances " + to_string(b1) + " and " +
                                                          to_string(b2) + " do not unify; no clause emitted"));
                            continue;
                        }
                        out.diagnostics.push_back(make_warning(
                            codes::kBodyMismatch, which + ": body instances " + to_string(b1) + " and " +
                                                      to_string(b2) + " differ; both are specialized to their lci"));
                        made.head.term = hornset::apply(*gamma, made.head.term);
                        b1 = hornset::apply(*gamma, b1);
                    }
                    made.body.push_back({name_for(c1.body[0].pred, c2.body[0].pred), b1});
                }
                made = canonical_clause(std::move(made));
                const bool duplicate = std::any_of(out.added.begin(), out.added.end(), [&](const Clause& c) {
                    return c.head == made.head && c.body == made.body;
                });
                if (duplicate) continue;
                out.added.push_back(made);
                out.program.clauses.push_back(std::move(made));
            }
        }
    }
    for (const auto& [name, _] : out.names) {
        if (out.program.clauses_of(name).empty()) out.program.declared.push_back(name);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bound set

std::vector<Term> bound_set(const HornProgram& prog, const Term& query, const SearchLimits& limits) {
    std::vector<Term> roots;
    for (const auto& c : prog.clauses) roots.push_back(c.head.term);
    roots.push_back(query);
    Monitor monitor(prog.global_congruence({query}), Monitor::Mode::Throw);

    std::map<std::string, Term> members;
    for (const auto& t : roots) {
        for (auto& u : less_set(t, monitor.global(), limits)) {
            monitor.check(u, "less set of " + to_string(t));
            members.emplace(canonical_key(u), std::move(u));
        }
    }
    std::vector<Term> frontier;
    for (const auto& [_, t] : members) frontier.push_back(t);
    while (!frontier.empty()) {
        std::vector<Term> all;
        for (const auto& [_, t] : members) all.push_back(t);
        std::vector<Term> next;
        for (const auto& a : frontier) {
            for (const auto& b : all) {
                auto l = lci(a, b);
                if (!l) continue;
                Term c = canonical(*l);
                auto key = canonical_key(c);
                if (members.emplace(key, c).second) next.push_back(std::move(c));
            }
        }
        frontier = std::move(next);
    }
    std::vector<Term> out;
    for (auto& [_, t] : members) out.push_back(std::move(t));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace hornset
