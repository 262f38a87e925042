// Bottom-up least-model enumeration over a depth-bounded ground universe.

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "hornset/engine.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hornset {

namespace {

using FactSet = std::unordered_set<Term, TermHash>;

std::size_t saturating_mul(std::size_t a, std::size_t b) {
    if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
    return a * b;
}

std::size_t saturating_add(std::size_t a, std::size_t b) {
    return a > std::numeric_limits<std::size_t>::max() - b ? std::numeric_limits<std::size_t>::max() : a + b;
}

// Number of ground terms of depth <= d, saturating.
std::size_t ground_count(const Signature& sig, std::size_t d) {
    std::size_t upto = 0;
    for (std::size_t level = 1; level <= d; ++level) {
        std::size_t next = 0;
        for (const auto& [_, arity] : sig.constructors()) {
            std::size_t n = 1;
            for (std::size_t i = 0; i < arity; ++i) n = saturating_mul(n, upto);
            next = saturating_add(next, n);
        }
        upto = next;
    }
    return upto;
}

// Smallest depth budget of each variable: a variable at node depth k (root 1)
// may be replaced by terms of depth <= limit - k + 1.
void variable_budgets(const Term& t, std::size_t node_depth, std::size_t limit, std::map<std::string, std::size_t>& out) {
    if (t.is_var()) {
        const std::size_t budget = limit + 1 > node_depth ? limit + 1 - node_depth : 0;
        auto [it, inserted] = out.emplace(t.name(), budget);
        if (!inserted) it->second = std::min(it->second, budget);
        return;
    }
    for (const auto& a : t.args()) variable_budgets(a, node_depth + 1, limit, out);
}

struct Universe {
    std::vector<Term> terms;           // sorted by depth
    std::vector<std::size_t> upto;     // upto[d]: number of terms of depth <= d
};

// The instances of one clause head for a fixed binding of its body variables,
// enumerated by a flat index over the free variables' candidate ranges.
struct HeadInstances {
    Term head;
    std::vector<std::string> free;
    std::vector<std::size_t> range;
    std::size_t total = 1;

    Term at(std::size_t flat, const Universe& u) const {
        Substitution s;
        for (std::size_t i = free.size(); i-- > 0;) {
            s.emplace(free[i], u.terms[flat % range[i]]);
            flat /= range[i];
        }
        return hornset::apply(s, head);
    }
};

class Evaluator {
public:
    Evaluator(const HornProgram& prog, std::size_t depth, const EnumerateOptions& options)
        : prog_(prog), depth_(depth), options_(options) {
        for (const auto& c : prog.clauses) {
            if (c.body.size() > 1) {
                throw EngineError(make_error(codes::kBodyCount,
                                             "enumeration supports at most one body atom per clause", c.location));
            }
        }
        Signature sig = prog.signature;
        for (const auto& c : prog.clauses) {
            sig.infer_from(c.head.term);
            for (const auto& b : c.body) sig.infer_from(b.term);
        }
        std::size_t need = 0;
        for (const auto& c : prog.clauses) {
            std::map<std::string, std::size_t> budgets;
            variable_budgets(c.head.term, 1, depth, budgets);
            for (const auto& v : free_vars(c)) need = std::max(need, budgets.at(v));
        }
        if (ground_count(sig, need) > options.max_facts) throw ResourceExhausted(options.max_facts, "enumeration");
        auto levels = ground_terms_by_depth(sig, need);
        universe_.upto.push_back(0);
        for (auto& level : levels) {
            for (auto& t : level) universe_.terms.push_back(std::move(t));
            universe_.upto.push_back(universe_.terms.size());
        }
    }

    // Instances of clause c's head, given a binding of its body variables.
    HeadInstances instances(const Clause& c, const Substitution& binding) const {
        HeadInstances h;
        h.head = hornset::apply(binding, c.head.term);
        std::map<std::string, std::size_t> budgets;
        variable_budgets(h.head, 1, depth_, budgets);
        for (const auto& [v, budget] : budgets) {
            h.free.push_back(v);
            const std::size_t n = universe_.upto[std::min(budget, universe_.upto.size() - 1)];
            h.range.push_back(n);
            h.total = saturating_mul(h.total, n);
        }
        return h;
    }

    bool fits(const Term& t) const { return term_depth(t) <= depth_; }

    void guard(std::size_t facts) const {
        if (facts > options_.max_facts) throw ResourceExhausted(options_.max_facts, "enumeration");
    }

    // Candidate instances are filtered by depth; refuse products far beyond the cap.
    void guard_work(std::size_t work) const {
        if (work / 16 > options_.max_facts) throw ResourceExhausted(options_.max_facts, "enumeration");
    }

    const Universe& universe() const { return universe_; }
    const HornProgram& program() const { return prog_; }

    static std::vector<std::string> free_vars(const Clause& c) {
        std::set<std::string> bound;
        for (const auto& b : c.body) {
            auto vs = vars(b.term);
            bound.insert(vs.begin(), vs.end());
        }
        std::vector<std::string> out;
        for (const auto& v : vars(c.head.term)) {
            if (!bound.count(v)) out.push_back(v);
        }
        return out;
    }

private:
    const HornProgram& prog_;
    std::size_t depth_;
    EnumerateOptions options_;
    Universe universe_;
};

// By depth, then by term order.
std::vector<Term> sorted(const FactSet& facts) {
    std::vector<std::pair<std::size_t, const Term*>> keyed;
    keyed.reserve(facts.size());
    for (const auto& t : facts) keyed.emplace_back(term_depth(t), &t);
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return *a.second < *b.second;
    });
    std::vector<Term> out;
    out.reserve(keyed.size());
    for (const auto& [_, t] : keyed) out.push_back(*t);
    return out;
}

}  // namespace

std::vector<std::vector<Term>> ground_terms_by_depth(const Signature& sig, std::size_t depth) {
    std::vector<std::vector<Term>> levels;
    std::vector<Term> all;  // depth <= current level - 1, in level order
    for (std::size_t level = 1; level <= depth; ++level) {
        const std::size_t shallow = levels.size() >= 2 ? all.size() - levels.back().size() : 0;
        std::vector<Term> here;
        for (const auto& [name, arity] : sig.constructors()) {
            if (arity == 0) {
                if (level == 1) here.push_back(Term::app(name));
                continue;
            }
            if (all.empty()) continue;
            // Tuples over `all` with at least one argument of the previous level.
            std::vector<std::size_t> idx(arity, 0);
            for (;;) {
                bool deep = false;
                for (std::size_t k : idx) deep |= k >= shallow;
                if (deep) {
                    std::vector<Term> args;
                    args.reserve(arity);
                    for (std::size_t k : idx) args.push_back(all[k]);
                    here.push_back(Term::app(name, std::move(args)));
                }
                bool done = true;
                for (std::size_t pos = arity; pos-- > 0;) {
                    if (++idx[pos] < all.size()) {
                        done = false;
                        break;
                    }
                    idx[pos] = 0;
                }
                if (done) break;
            }
        }
        all.insert(all.end(), here.begin(), here.end());
        levels.push_back(std::move(here));
    }
    return levels;
}

namespace {

std::map<std::string, std::vector<Term>> sorted_model(std::map<std::string, FactSet>& model, const HornProgram& prog) {
    std::map<std::string, std::vector<Term>> out;
    for (const auto& p : prog.predicates()) out[p] = sorted(model[p]);
    return out;
}

}  // namespace

std::map<std::string, std::vector<Term>> enumerate_model_serial(const HornProgram& prog, std::size_t depth,
                                                                const EnumerateOptions& options) {
    const Evaluator ev(prog, depth, options);
    std::map<std::string, FactSet> model;
    std::size_t total = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& c : prog.clauses) {
            std::vector<Substitution> bindings;
            if (c.is_fact()) {
                bindings.emplace_back();
            } else {
                for (const auto& fact : model[c.body[0].pred]) {
                    if (auto m = match(c.body[0].term, fact)) bindings.push_back(std::move(*m));
                }
            }
            auto& target = model[c.head.pred];
            for (const auto& binding : bindings) {
                const HeadInstances h = ev.instances(c, binding);
                ev.guard_work(h.total);
                for (std::size_t k = 0; k < h.total; ++k) {
                    Term t = h.at(k, ev.universe());
                    if (!ev.fits(t)) continue;
                    if (target.insert(std::move(t)).second) {
                        changed = true;
                        ev.guard(++total);
                    }
                }
            }
        }
    }
    return sorted_model(model, prog);
}

std::map<std::string, std::vector<Term>> enumerate_model(const HornProgram& prog, std::size_t depth,
                                                         const EnumerateOptions& options) {
    const Evaluator ev(prog, depth, options);
    std::map<std::string, FactSet> model;
    std::map<std::string, std::vector<Term>> delta;
    std::size_t total = 0;

    struct Job {
        const Clause* clause;
        HeadInstances heads;
    };

    auto run_jobs = [&](const std::vector<Job>& jobs) {
        // Flatten (job, instance) pairs so the parallel loop balances large
        // fact products as well as many small rule firings.
        std::vector<std::size_t> offset(jobs.size() + 1, 0);
        for (std::size_t j = 0; j < jobs.size(); ++j) offset[j + 1] = saturating_add(offset[j], jobs[j].heads.total);
        const std::size_t work = offset.back();
        ev.guard_work(work);
        std::vector<std::vector<std::pair<std::size_t, Term>>> found;
#pragma omp parallel
        {
#pragma omp single
            {
#ifdef _OPENMP
                found.resize(static_cast<std::size_t>(omp_get_num_threads()));
#else
                found.resize(1);
#endif
            }
#ifdef _OPENMP
            auto& mine = found[static_cast<std::size_t>(omp_get_thread_num())];
#else
            auto& mine = found[0];
#endif
#pragma omp for schedule(dynamic, 256)
            for (std::size_t w = 0; w < work; ++w) {
                const std::size_t j =
                    static_cast<std::size_t>(std::upper_bound(offset.begin(), offset.end(), w) - offset.begin()) - 1;
                Term t = jobs[j].heads.at(w - offset[j], ev.universe());
                if (ev.fits(t)) mine.emplace_back(j, std::move(t));
            }
        }
        std::map<std::string, std::vector<Term>> next;
        for (auto& bucket : found) {
            for (auto& [j, t] : bucket) {
                const std::string& p = jobs[j].clause->head.pred;
                if (model[p].insert(t).second) {
                    next[p].push_back(std::move(t));
                    ev.guard(++total);
                }
            }
        }
        return next;
    };

    std::vector<Job> initial;
    for (const auto& c : prog.clauses) {
        if (c.is_fact()) initial.push_back({&c, ev.instances(c, {})});
    }
    delta = run_jobs(initial);

    while (!delta.empty()) {
        std::vector<Job> jobs;
        for (const auto& c : prog.clauses) {
            if (c.is_fact()) continue;
            auto it = delta.find(c.body[0].pred);
            if (it == delta.end()) continue;
            const auto& fresh = it->second;
            std::vector<std::optional<Substitution>> bindings(fresh.size());
#pragma omp parallel for schedule(dynamic, 64)
            for (std::size_t k = 0; k < fresh.size(); ++k) bindings[k] = match(c.body[0].term, fresh[k]);
            for (auto& b : bindings) {
                if (b) jobs.push_back({&c, ev.instances(c, *b)});
            }
        }
        delta = run_jobs(jobs);
    }
    return sorted_model(model, prog);
}

std::vector<Term> enumerate_extension(const HornProgram& prog, const std::string& pred, std::size_t depth,
                                      const EnumerateOptions& options) {
    auto model = enumerate_model(prog, depth, options);
    auto it = model.find(pred);
    return it == model.end() ? std::vector<Term>{} : std::move(it->second);
}

std::vector<Term> enumerate_extension_serial(const HornProgram& prog, const std::string& pred, std::size_t depth,
                                             const EnumerateOptions& options) {
    auto model = enumerate_model_serial(prog, depth, options);
    auto it = model.find(pred);
    return it == model.end() ? std::vector<Term>{} : std::move(it->second);
}

}  // namespace hornset
