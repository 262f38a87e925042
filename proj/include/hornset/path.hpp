#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hornset/term.hpp"

namespace hornset {

/// One step of a marked tree path: descend into argument `index` of `ctor`,
/// or, for a nullary constructor, the terminal marker (index 0).
struct Step {
    std::string ctor;
    std::uint32_t arity = 0;
    std::uint32_t index = 0;

    static Step into(std::string ctor, std::uint32_t arity, std::uint32_t index) {
        return Step{std::move(ctor), arity, index};
    }
    static Step marker(std::string ctor) { return Step{std::move(ctor), 0, 0}; }

    bool is_marker() const { return index == 0; }

    friend bool operator==(const Step&, const Step&) = default;
    friend std::strong_ordering operator<=>(const Step& a, const Step& b) {
        if (auto c = a.ctor <=> b.ctor; c != 0) return c;
        if (auto c = a.index <=> b.index; c != 0) return c;
        return a.arity <=> b.arity;
    }
};

/// A sequence of steps; ε is the empty path. Ordered length-lexicographically.
class Path {
public:
    Path() = default;
    explicit Path(std::vector<Step> steps) : steps_(std::move(steps)) {}

    const std::vector<Step>& steps() const { return steps_; }
    std::size_t size() const { return steps_.size(); }
    bool empty() const { return steps_.empty(); }
    const Step& operator[](std::size_t i) const { return steps_[i]; }
    const Step& back() const { return steps_.back(); }

    bool ends_in_marker() const { return !steps_.empty() && steps_.back().is_marker(); }

    Path child(Step s) const;
    Path concat(const Path& tail) const;
    Path prefix(std::size_t n) const;
    Path suffix_from(std::size_t n) const;
    Path parent() const { return prefix(size() - 1); }

    /// Step-wise prefix (reflexive).
    bool is_prefix_of(const Path& other) const;

    friend bool operator==(const Path&, const Path&) = default;
    friend std::strong_ordering operator<=>(const Path& a, const Path& b);

private:
    std::vector<Step> steps_;
};

using PathSet = std::set<Path>;

/// "eps" for ε, otherwise dot-separated steps such as ":.1.s.1" or ":.2.0".
std::string to_string(const Path& p);
std::ostream& operator<<(std::ostream& os, const Path& p);
std::string to_string(const PathSet& ps);

/// A partition of a finite path universe. Pairs outside the universe are
/// related when they share a common suffix after related stored prefixes.
class Congruence {
public:
    Congruence() = default;
    /// Identity relation on `universe`.
    explicit Congruence(PathSet universe);
    /// Paths mentioned in `classes` but absent from `universe` are added to it.
    Congruence(PathSet universe, const std::vector<std::vector<Path>>& classes);

    const PathSet& universe() const { return universe_; }
    bool contains(const Path& p) const { return universe_.count(p) != 0; }

    /// Class index of a stored path.
    std::optional<std::size_t> class_of(const Path& p) const;
    const std::vector<Path>& members(std::size_t id) const { return classes_[id]; }
    std::size_t class_count() const { return classes_.size(); }

    bool equiv(const Path& a, const Path& b) const;

    /// All classes including singletons, each sorted, ordered by smallest member.
    const std::vector<std::vector<Path>>& classes() const { return classes_; }
    std::vector<std::vector<Path>> nontrivial_classes() const;

    /// Every pair related here is related by `other`.
    bool subset_of(const Congruence& other) const;

    friend bool operator==(const Congruence& a, const Congruence& b) {
        return a.universe_ == b.universe_ && a.classes_ == b.classes_;
    }

private:
    void normalize(std::vector<std::vector<Path>> groups);

    PathSet universe_;
    std::map<Path, std::size_t> id_;
    std::vector<std::vector<Path>> classes_;
};

std::string to_string(const Congruence& eq);  // nontrivial classes only

struct TermRepr {
    PathSet paths;
    Congruence eq;

    friend bool operator==(const TermRepr&, const TermRepr&) = default;
};

class UndefinedPath : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A violated condition of the path-set/congruence characterization.
struct Violation {
    enum class Condition : int {
        NonEmptyFinite = 1,
        SiblingPrefixClosed = 2,
        ClosedUnderCongruence = 3,
        ConstructorCompatible = 4,
        SuffixStable = 5,
        Maximal = 6,
    };
    Condition condition;
    std::string witness;

    int number() const { return static_cast<int>(condition); }
};

std::string to_string(const Violation& v);

class InvalidRepr : public std::runtime_error {
public:
    explicit InvalidRepr(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

PathSet paths(const Term& t);

/// Throws UndefinedPath if p is not a subterm position of t.
Term subterm_at(const Term& t, const Path& p);

TermRepr repr_of(const Term& t);

/// Empty iff (paths, eq) represents some term. Violations are listed in
/// condition order; all of them are reported.
std::vector<Violation> validate_repr(const PathSet& paths, const Congruence& eq);

/// The term with the given representation; variables are named X1, X2, ...
/// by the smallest path of each variable class. Throws InvalidRepr.
Term term_of(const TermRepr& r);

/// Least fixpoint of the maximality step over `universe`, keeping the result
/// suffix-stable inside the universe.
Congruence close_mx(const Congruence& eq, const PathSet& universe);

/// `ps` extended by every path equivalent to a member. Throws
/// std::invalid_argument if `eq` relates a path to one of its extensions.
PathSet close_paths(const PathSet& ps, const Congruence& eq);

/// Representation-level least common instance; nullopt iff the terms have no
/// common instance (constructor clash or cyclic sharing).
std::optional<TermRepr> lci_repr(std::span<const TermRepr> reprs);

struct InstanceCheck {
    bool instance = false;
    bool flat = false;    // path sets equal
    bool linear = false;  // congruences equal
};

/// Whether `specific` is an instance of `general`, decided on representations.
InstanceCheck is_instance(const Term& general, const Term& specific);

}  // namespace hornset
