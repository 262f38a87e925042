#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hornset {

// Reserved binary constructor used to encode pairs of terms <a, b>. Never
// accepted from user input; the printer renders it as "<a, b>".
inline constexpr std::string_view kPairCtor = "<>";

class Term {
public:
    enum class Kind : unsigned char { Variable, Application };

    Term() = default;

    static Term var(std::string name);
    static Term app(std::string ctor, std::vector<Term> args = {});
    static Term pair(Term left, Term right);

    bool is_var() const { return kind_ == Kind::Variable; }
    bool is_app() const { return kind_ == Kind::Application; }
    // Variable name or constructor name.
    const std::string& name() const { return name_; }
    const std::vector<Term>& args() const { return args_; }
    std::size_t arity() const { return args_.size(); }

    friend bool operator==(const Term& a, const Term& b);
    friend bool operator<(const Term& a, const Term& b);

private:
    Kind kind_ = Kind::Variable;
    std::string name_ = "X";
    std::vector<Term> args_;
};

struct TermHash {
    std::size_t operator()(const Term& t) const noexcept;
};

std::string to_string(const Term& t);
std::ostream& operator<<(std::ostream& os, const Term& t);

std::size_t term_depth(const Term& t);  // constants and variables have depth 1
std::size_t term_size(const Term& t);   // number of nodes

class SignatureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Constructor symbols with fixed arities.
class Signature {
public:
    Signature() = default;
    Signature(std::initializer_list<std::pair<std::string, std::size_t>> decls);

    /// Throws SignatureError if `name` is already declared with another arity.
    void declare(const std::string& name, std::size_t arity);
    std::optional<std::size_t> arity(const std::string& name) const;
    bool contains(const std::string& name) const { return arities_.count(name) != 0; }
    const std::map<std::string, std::size_t>& constructors() const { return arities_; }
    bool empty() const { return arities_.empty(); }

    /// Every application in `t` uses a declared constructor with the declared arity.
    /// Returns a description of the first offending subterm, if any.
    std::optional<std::string> check(const Term& t) const;

    /// Declares every constructor occurring in `t`; throws SignatureError on conflict.
    void infer_from(const Term& t);

    /// Size-least ground term, ties broken by constructor name.
    std::optional<Term> least_ground_term() const;

private:
    std::map<std::string, std::size_t> arities_;
};

using Substitution = std::map<std::string, Term>;

std::set<std::string> vars(const Term& t);
/// Variables in leftmost-outermost first-occurrence order.
std::vector<std::string> vars_in_order(const Term& t);
bool is_ground(const Term& t);
bool is_linear(const Term& t);

/// Unqualified calls may be captured by std::apply through ADL on std::map;
/// call as hornset::apply.
Term apply(const Substitution& subst, const Term& t);
/// x -> apply(outer, apply(inner, x)), normalized.
Substitution compose(const Substitution& outer, const Substitution& inner);

/// Robinson unification with occurs check. The result is idempotent.
std::optional<Substitution> mgu(const Term& a, const Term& b);

/// One-way matching: a substitution s over vars(pattern) with apply(s, pattern) == target.
std::optional<Substitution> match(const Term& pattern, const Term& target);

/// Least common instance of terms whose variables are treated as independent
/// (each argument is renamed apart from the accumulated result before unifying).
std::optional<Term> lci(std::span<const Term> terms);
std::optional<Term> lci(const Term& a, const Term& b);

struct Renamed {
    Term term;
    Substitution renaming;  // only the variables that actually changed
};

Renamed rename_apart(const Term& t, const std::set<std::string>& avoid);

/// Variables renamed X1, X2, ... in first-occurrence order.
Term canonical(const Term& t);
std::string canonical_key(const Term& t);
bool alpha_eq(const Term& a, const Term& b);

struct SubstitutionKind {
    bool flat = false;
    bool linear = false;
    bool renaming = false;
};

/// Only non-identity bindings count as the domain.
SubstitutionKind classify(const Substitution& subst);

struct SubstitutionSplit {
    Substitution flat;    // applied second
    Substitution linear;  // applied first
};

/// Splits subst into flat ∘ linear.
SubstitutionSplit decompose(const Substitution& subst);

}  // namespace hornset
