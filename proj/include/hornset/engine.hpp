#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hornset/deletion.hpp"
#include "hornset/diagnostic.hpp"
#include "hornset/path.hpp"
#include "hornset/term.hpp"

namespace hornset {

struct Atom {
    std::string pred;
    Term term;

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// head <- body; a fact has an empty body. Bodies with more than one atom are
/// representable so that validation can report them.
struct Clause {
    Atom head;
    std::vector<Atom> body;
    std::optional<SourceLocation> location;

    bool is_fact() const { return body.empty(); }
};

struct HornProgram {
    Signature signature;
    std::vector<Clause> clauses;
    std::vector<std::pair<Path, Path>> congruence;  // generators of ≡*
    bool congruence_declared = false;
    /// Predicates that exist even without clauses (an empty conjunction, or a
    /// "predicates" declaration); they are unsatisfiable.
    std::vector<std::string> declared;

    /// Predicate names in order of first appearance (heads, then bodies, then
    /// declared predicates).
    std::vector<std::string> predicates() const;
    std::vector<std::size_t> clauses_of(const std::string& pred) const;

    /// ≡* over the paths of all clause terms plus `extra`.
    GlobalCongruence global_congruence(const std::vector<Term>& extra = {}) const;
};

/// Structural equality of clauses and signature, ignoring source locations.
bool same_program(const HornProgram& a, const HornProgram& b);

/// A precondition failure of an engine operation.
class EngineError : public std::runtime_error {
public:
    explicit EngineError(Diagnostic d) : std::runtime_error(d.message), diagnostic_(std::move(d)) {}
    const Diagnostic& diagnostic() const { return diagnostic_; }

private:
    Diagnostic diagnostic_;
};

/// Checks the clause shape, the body-decrease conditions under ⪯* (single and
/// paired), and the inclusion of all head and head-pair congruences in ≡*.
std::vector<Diagnostic> validate_program(const HornProgram& prog, const SearchLimits& limits = {});

/// One rule application of the satisfiability procedure.
struct TraceStep {
    enum class Rule { Expand = 1, Occurs = 2, Descend = 3, Fact = 4 };
    Rule rule;
    std::string pred;
    Term term;               // exponent of the call reached (canonical)
    std::size_t depth = 0;   // nesting depth of the call
    std::size_t clause = 0;  // 0-based clause index in the program
};

std::string rule_name(TraceStep::Rule r);

struct InhOptions {
    SearchLimits limits;
};

struct InhResult {
    bool satisfiable = false;
    std::optional<Term> witness;
    std::vector<TraceStep> trace;
    /// Every exponent passed to a call, canonical, in visiting order.
    std::vector<Term> exponents;
    std::size_t monitor_checks = 0;
};

/// Decides whether `pred` holds for some instance of `goal`. Throws
/// EngineError (unknown predicate, goal congruence outside ≡*) and
/// MonitorViolation.
InhResult inh(const HornProgram& prog, const Atom& goal, const InhOptions& options = {});

struct IntersectResult {
    HornProgram program;    // input clauses plus the new ones
    std::string predicate;  // name standing for left ∧ right
    /// New predicate name -> (left, right) conjunct names, in creation order.
    std::vector<std::pair<std::string, std::pair<std::string, std::string>>> names;
    std::vector<Clause> added;
    std::vector<Diagnostic> diagnostics;
};

/// Adds a predicate equivalent to the conjunction of `left` and `right`,
/// creating further pair predicates on demand (memoized per name pair).
IntersectResult intersect(const HornProgram& prog, const std::string& left, const std::string& right);

/// lci ∘ less over all clause heads and `query`, canonical and sorted.
/// Runs the ≡* monitor on every member of the less sets (throwing).
std::vector<Term> bound_set(const HornProgram& prog, const Term& query, const SearchLimits& limits = {});

struct EnumerateOptions {
    std::size_t max_facts = 5'000'000;
};

/// Ground terms of depth <= depth in the least model for `pred`, sorted by
/// depth and then by term order.
/// Semi-naive evaluation, parallelized with OpenMP when available.
std::vector<Term> enumerate_extension(const HornProgram& prog, const std::string& pred, std::size_t depth,
                                      const EnumerateOptions& options = {});

/// Naive single-threaded evaluation; reference for the parallel version.
std::vector<Term> enumerate_extension_serial(const HornProgram& prog, const std::string& pred, std::size_t depth,
                                             const EnumerateOptions& options = {});

/// The extensions of all predicates of the program from one evaluation.
std::map<std::string, std::vector<Term>> enumerate_model(const HornProgram& prog, std::size_t depth,
                                                         const EnumerateOptions& options = {});
std::map<std::string, std::vector<Term>> enumerate_model_serial(const HornProgram& prog, std::size_t depth,
                                                                const EnumerateOptions& options = {});

/// All ground terms over `sig` of depth <= depth, grouped by exact depth
/// (index d holds depth d + 1).
std::vector<std::vector<Term>> ground_terms_by_depth(const Signature& sig, std::size_t depth);

}  // namespace hornset
