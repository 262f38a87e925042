#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hornset/diagnostic.hpp"
#include "hornset/path.hpp"
#include "hornset/term.hpp"

namespace hornset {

/// Contraction of the segment between `anchor` and `anchor.segment`:
/// written `q <- q.q'` with q = anchor and q' = segment.
struct Deletion {
    Path anchor;
    Path segment;

    Path target() const { return anchor.concat(segment); }

    friend bool operator==(const Deletion&, const Deletion&) = default;
};

using DeletionSequence = std::vector<Deletion>;

/// ":.1 <- :.1.s.1"
std::string to_string(const Deletion& d);
/// Comma-separated; the empty sequence prints as "".
std::string to_string(const DeletionSequence& s);

/// The image of p under one deletion; nullopt when p lies inside the segment.
std::optional<Path> del_path(const Deletion& d, const Path& p);

struct Contracted {
    PathSet paths;
    std::map<Path, Path> origin;  // contracted path -> original path
};

/// Applies the sequence left to right. The origin map is total and injective;
/// a collision throws std::logic_error.
Contracted del_seq(const DeletionSequence& s, const PathSet& ps);

/// Survival under s is constant on every class of eq restricted to ps.
bool seq_compatible(const DeletionSequence& s, const Congruence& eq, const PathSet& ps);

class Incompatible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidResult : public std::runtime_error {
public:
    InvalidResult(std::string what, std::vector<Violation> violations)
        : std::runtime_error(std::move(what)), violations_(std::move(violations)) {}
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Transports eq along the origin map and closes under maximality over the
/// contracted path set. Throws Incompatible.
Congruence del_cong(const DeletionSequence& s, const Congruence& eq, const PathSet& ps);

/// The contracted term; variable names are carried over from t. Throws
/// Incompatible, or InvalidResult when the contracted pair is not a term
/// representation.
Term del_term(const DeletionSequence& s, const Term& t);

class OutOfUniverse : public std::runtime_error {
public:
    explicit OutOfUniverse(const Path& p)
        : std::runtime_error("path " + to_string(p) + " is outside the global congruence universe"), path_(p) {}
    const Path& path() const { return path_; }

private:
    Path path_;
};

/// A finitely generated congruence on paths, decided over a finite universe
/// that is closed under prefixes and siblings. Closed under symmetry,
/// transitivity, suffix extension and maximality inside the universe.
///
/// Paths that start with the pair constructor are compared component-wise:
/// <>.i.p and <>.j.q are related iff p and q are.
class GlobalCongruence {
public:
    GlobalCongruence() : GlobalCongruence({}, {}) {}
    GlobalCongruence(std::vector<std::pair<Path, Path>> generators, const PathSet& universe);

    const std::vector<std::pair<Path, Path>>& generators() const { return generators_; }
    const PathSet& universe() const { return universe_; }
    bool in_universe(const Path& p) const;

    /// Throws OutOfUniverse.
    bool member(const Path& a, const Path& b) const;

    /// The relation restricted to `ps`. Throws OutOfUniverse.
    Congruence restrict_to(const PathSet& ps) const;

    /// (≡_t) is included in this relation. Throws OutOfUniverse.
    bool includes(const Term& t) const;

    /// A congruence with the same generators over a larger universe.
    GlobalCongruence extended(const PathSet& more) const;
    GlobalCongruence extended(const std::vector<Term>& terms) const;

    /// Independent re-check that the saturated relation is maximality-closed;
    /// returns a witness pair if not.
    std::optional<std::pair<Path, Path>> maximality_gap() const;

private:
    std::vector<std::pair<Path, Path>> generators_;
    PathSet universe_;
    Congruence eq_;
};

/// Strips leading pair-constructor steps.
Path lift_pair_path(const Path& p);

/// Paths of all terms, lifted through the pair constructor.
PathSet universe_of(const std::vector<Term>& terms);

bool cong_member(const GlobalCongruence& gc, const Path& a, const Path& b);

struct SearchLimits {
    std::size_t max_states = 100000;
};

struct SearchStats {
    std::size_t states = 0;
};

class ResourceExhausted : public std::runtime_error {
public:
    explicit ResourceExhausted(std::size_t limit, const std::string& what = "deletion search")
        : std::runtime_error(what + " exceeded the limit of " + std::to_string(limit)), limit_(limit) {}
    std::size_t limit() const { return limit_; }

private:
    std::size_t limit_;
};

struct OrderResult {
    std::optional<DeletionSequence> witness;
    SearchStats stats;
};

/// smaller ⪯ larger: some sequence compatible with ≡_larger yields `smaller`
/// up to renaming. Throws ResourceExhausted past the state cap.
OrderResult leq(const Term& smaller, const Term& larger, const SearchLimits& limits = {});

/// smaller ⪯* larger: the reflexive case, or (≡_larger) ⊆ ≡* and some sequence
/// compatible with ≡* yields `smaller`. Throws OutOfUniverse, ResourceExhausted.
OrderResult leq_star(const Term& smaller, const Term& larger, const GlobalCongruence& gc,
                     const SearchLimits& limits = {});

/// All terms ⪯ t, canonical and sorted, t itself included.
std::vector<Term> less_set_plain(const Term& t, const SearchLimits& limits = {}, SearchStats* stats = nullptr);

/// All terms ⪯* t, canonical and sorted, t itself included.
std::vector<Term> less_set(const Term& t, const GlobalCongruence& gc, const SearchLimits& limits = {},
                           SearchStats* stats = nullptr);

/// Checks (≡_t) ⊆ ≡* for every term and that ≡* is maximality-closed.
/// The universe is extended by the terms' paths as needed.
std::vector<Diagnostic> check_global(const GlobalCongruence& gc, const std::vector<Term>& terms);

class MonitorViolation : public std::runtime_error {
public:
    explicit MonitorViolation(Diagnostic d) : std::runtime_error(d.message), diagnostic_(std::move(d)) {}
    const Diagnostic& diagnostic() const { return diagnostic_; }

private:
    Diagnostic diagnostic_;
};

/// Run-local check that every term produced by a deletion or unification
/// during an engine run keeps its congruence inside ≡*. Terms outside the
/// universe extend it (and are counted) rather than failing.
class Monitor {
public:
    enum class Mode { Throw, Collect };

    Monitor(GlobalCongruence gc, Mode mode) : gc_(std::move(gc)), mode_(mode) {}

    /// Returns false (and records or throws) when (≡_t) ⊄ ≡*.
    bool check(const Term& t, const std::string& context);

    const GlobalCongruence& global() const { return gc_; }
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
    std::size_t checks() const { return checks_; }
    std::size_t extensions() const { return extensions_; }

private:
    GlobalCongruence gc_;
    Mode mode_;
    std::vector<Diagnostic> diagnostics_;
    std::size_t checks_ = 0;
    std::size_t extensions_ = 0;
};

}  // namespace hornset
