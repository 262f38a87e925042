#include "hornset/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace hornset {

Term Term::var(std::string name) {
    Term t;
    t.kind_ = Kind::Variable;
    t.name_ = std::move(name);
    return t;
}

Term Term::app(std::string ctor, std::vector<Term> args) {
    Term t;
    t.kind_ = Kind::Application;
    t.name_ = std::move(ctor);
    t.args_ = std::move(args);
    return t;
}

Term Term::pair(Term left, Term right) {
    std::vector<Term> args;
    args.reserve(2);
    args.push_back(std::move(left));
    args.push_back(std::move(right));
    return app(std::string(kPairCtor), std::move(args));
}

bool operator==(const Term& a, const Term& b) {
    return a.kind_ == b.kind_ && a.name_ == b.name_ && a.args_ == b.args_;
}

namespace {

// Three-way comparison: kind, then name, then arguments lexicographically.
int compare(const Term& a, const Term& b) {
    if (a.is_var() != b.is_var()) return a.is_var() ? -1 : 1;
    if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
    const auto& x = a.args();
    const auto& y = b.args();
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (int c = compare(x[i], y[i]); c != 0) return c;
    }
    return x.size() < y.size() ? -1 : (x.size() > y.size() ? 1 : 0);
}

}  // namespace

bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

std::size_t TermHash::operator()(const Term& t) const noexcept {
    std::size_t h = std::hash<std::string>{}(t.name()) ^ (t.is_var() ? 0x9e3779b97f4a7c15ULL : 0);
    for (const auto& a : t.args()) {
        h ^= (*this)(a) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

namespace {

bool is_infix_pair(const Term& t) { return t.is_app() && t.name() == ":" && t.arity() == 2; }

void print(std::ostream& os, const Term& t) {
    if (t.is_var()) {
        os << t.name();
        return;
    }
    if (is_infix_pair(t)) {
        const Term& lhs = t.args()[0];
        if (is_infix_pair(lhs)) {
            os << '(';
            print(os, lhs);
            os << ')';
        } else {
            print(os, lhs);
        }
        os << ':';
        print(os, t.args()[1]);
        return;
    }
    if (t.name() == kPairCtor && t.arity() == 2) {
        os << '<';
        print(os, t.args()[0]);
        os << ", ";
        print(os, t.args()[1]);
        os << '>';
        return;
    }
    os << t.name();
    if (t.arity() == 0) return;
    os << '(';
    for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i) os << ", ";
        print(os, t.args()[i]);
    }
    os << ')';
}

}  // namespace

std::string to_string(const Term& t) {
    std::ostringstream os;
    print(os, t);
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Term& t) {
    print(os, t);
    return os;
}

std::size_t term_depth(const Term& t) {
    std::size_t d = 0;
    for (const auto& a : t.args()) d = std::max(d, term_depth(a));
    return d + 1;
}

std::size_t term_size(const Term& t) {
    std::size_t n = 1;
    for (const auto& a : t.args()) n += term_size(a);
    return n;
}

// ---------------------------------------------------------------------------
// Signature

Signature::Signature(std::initializer_list<std::pair<std::string, std::size_t>> decls) {
    for (const auto& [name, arity] : decls) declare(name, arity);
}

void Signature::declare(const std::string& name, std::size_t arity) {
    auto [it, inserted] = arities_.emplace(name, arity);
    if (!inserted && it->second != arity) {
        throw SignatureError("constructor '" + name + "' used with arity " + std::to_string(arity) +
                             " but declared with arity " + std::to_string(it->second));
    }
}

std::optional<std::size_t> Signature::arity(const std::string& name) const {
    auto it = arities_.find(name);
    if (it == arities_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> Signature::check(const Term& t) const {
    if (t.is_var()) return std::nullopt;
    if (t.name() != kPairCtor) {
        auto a = arity(t.name());
        if (!a) return "undeclared constructor '" + t.name() + "'";
        if (*a != t.arity()) {
            return "constructor '" + t.name() + "' expects " + std::to_string(*a) + " argument(s), got " +
                   std::to_string(t.arity());
        }
    } else if (t.arity() != 2) {
        return "pair constructor expects 2 arguments";
    }
    for (const auto& a : t.args()) {
        if (auto err = check(a)) return err;
    }
    return std::nullopt;
}

void Signature::infer_from(const Term& t) {
    if (t.is_var()) return;
    if (t.name() != kPairCtor) declare(t.name(), t.arity());
    for (const auto& a : t.args()) infer_from(a);
}

std::optional<Term> Signature::least_ground_term() const {
    for (const auto& [name, arity] : arities_) {
        if (arity == 0) return Term::app(name);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Variables and substitutions

namespace {

void collect_vars(const Term& t, std::vector<std::string>& out, std::set<std::string>& seen) {
    if (t.is_var()) {
        if (seen.insert(t.name()).second) out.push_back(t.name());
        return;
    }
    for (const auto& a : t.args()) collect_vars(a, out, seen);
}

}  // namespace

std::set<std::string> vars(const Term& t) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    collect_vars(t, order, seen);
    return seen;
}

std::vector<std::string> vars_in_order(const Term& t) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    collect_vars(t, order, seen);
    return order;
}

bool is_ground(const Term& t) {
    if (t.is_var()) return false;
    return std::all_of(t.args().begin(), t.args().end(), [](const Term& a) { return is_ground(a); });
}

namespace {

bool linear_walk(const Term& t, std::set<std::string>& seen) {
    if (t.is_var()) return seen.insert(t.name()).second;
    return std::all_of(t.args().begin(), t.args().end(), [&](const Term& a) { return linear_walk(a, seen); });
}

}  // namespace

bool is_linear(const Term& t) {
    std::set<std::string> seen;
    return linear_walk(t, seen);
}

Term apply(const Substitution& subst, const Term& t) {
    if (subst.empty()) return t;
    if (t.is_var()) {
        auto it = subst.find(t.name());
        return it == subst.end() ? t : it->second;
    }
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const auto& a : t.args()) args.push_back(apply(subst, a));
    return Term::app(t.name(), std::move(args));
}

Substitution compose(const Substitution& outer, const Substitution& inner) {
    Substitution result;
    for (const auto& [x, image] : inner) {
        Term composed = hornset::apply(outer, image);
        if (!(composed.is_var() && composed.name() == x)) result.emplace(x, std::move(composed));
    }
    for (const auto& [x, image] : outer) {
        if (inner.count(x)) continue;
        if (!(image.is_var() && image.name() == x)) result.emplace(x, image);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Unification

namespace {

class Unifier {
public:
    bool unify(const Term& a, const Term& b) {
        std::vector<std::pair<Term, Term>> work{{a, b}};
        while (!work.empty()) {
            auto [l, r] = std::move(work.back());
            work.pop_back();
            l = walk(l);
            r = walk(r);
            if (l.is_var() && r.is_var() && l.name() == r.name()) continue;
            if (l.is_var()) {
                if (occurs(l.name(), r)) return false;
                bindings_[l.name()] = r;
                continue;
            }
            if (r.is_var()) {
                if (occurs(r.name(), l)) return false;
                bindings_[r.name()] = l;
                continue;
            }
            if (l.name() != r.name() || l.arity() != r.arity()) return false;
            for (std::size_t i = 0; i < l.arity(); ++i) work.emplace_back(l.args()[i], r.args()[i]);
        }
        return true;
    }

    Substitution solved() const {
        Substitution out;
        for (const auto& [x, _] : bindings_) out.emplace(x, resolve(Term::var(x)));
        return out;
    }

private:
    Term walk(Term t) const {
        while (t.is_var()) {
            auto it = bindings_.find(t.name());
            if (it == bindings_.end()) break;
            t = it->second;
        }
        return t;
    }

    bool occurs(const std::string& x, const Term& t) const {
        Term w = walk(t);
        if (w.is_var()) return w.name() == x;
        return std::any_of(w.args().begin(), w.args().end(), [&](const Term& a) { return occurs(x, a); });
    }

    Term resolve(const Term& t) const {
        Term w = walk(t);
        if (w.is_var()) return w;
        std::vector<Term> args;
        args.reserve(w.arity());
        for (const auto& a : w.args()) args.push_back(resolve(a));
        return Term::app(w.name(), std::move(args));
    }

    std::map<std::string, Term> bindings_;
};

bool match_into(const Term& pattern, const Term& target, Substitution& s) {
    if (pattern.is_var()) {
        auto [it, inserted] = s.emplace(pattern.name(), target);
        return inserted || it->second == target;
    }
    if (target.is_var() || pattern.name() != target.name() || pattern.arity() != target.arity()) return false;
    for (std::size_t i = 0; i < pattern.arity(); ++i) {
        if (!match_into(pattern.args()[i], target.args()[i], s)) return false;
    }
    return true;
}

}  // namespace

std::optional<Substitution> mgu(const Term& a, const Term& b) {
    Unifier u;
    if (!u.unify(a, b)) return std::nullopt;
    return u.solved();
}

std::optional<Substitution> match(const Term& pattern, const Term& target) {
    Substitution s;
    if (!match_into(pattern, target, s)) return std::nullopt;
    return s;
}

std::optional<Term> lci(std::span<const Term> terms) {
    if (terms.empty()) throw std::invalid_argument("lci of an empty list");
    Term acc = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) {
        Renamed next = rename_apart(terms[i], vars(acc));
        auto beta = mgu(acc, next.term);
        if (!beta) return std::nullopt;
        acc = hornset::apply(*beta, acc);
    }
    return acc;
}

std::optional<Term> lci(const Term& a, const Term& b) {
    const Term both[] = {a, b};
    return lci(std::span<const Term>(both));
}

// ---------------------------------------------------------------------------
// Renaming

namespace {

std::string base_name(const std::string& name) {
    std::size_t end = name.size();
    while (end > 1 && std::isdigit(static_cast<unsigned char>(name[end - 1]))) --end;
    return name.substr(0, end);
}

}  // namespace

Renamed rename_apart(const Term& t, const std::set<std::string>& avoid) {
    const auto order = vars_in_order(t);
    std::set<std::string> taken(avoid.begin(), avoid.end());
    taken.insert(order.begin(), order.end());
    Substitution renaming;
    for (const auto& x : order) {
        if (!avoid.count(x)) continue;
        const std::string base = base_name(x);
        for (std::size_t k = 1;; ++k) {
            std::string candidate = base + std::to_string(k);
            if (taken.insert(candidate).second) {
                renaming.emplace(x, Term::var(std::move(candidate)));
                break;
            }
        }
    }
    return {hornset::apply(renaming, t), renaming};
}

Term canonical(const Term& t) {
    Substitution s;
    std::size_t n = 0;
    for (const auto& x : vars_in_order(t)) s.emplace(x, Term::var("X" + std::to_string(++n)));
    return hornset::apply(s, t);
}

namespace {

void encode(const Term& t, std::unordered_map<std::string, std::size_t>& numbering, std::string& out) {
    if (t.is_var()) {
        auto [it, _] = numbering.emplace(t.name(), numbering.size());
        out += '?';
        out += std::to_string(it->second);
        out += ';';
        return;
    }
    out += t.name();
    out += '(';
    for (const auto& a : t.args()) encode(a, numbering, out);
    out += ')';
}

}  // namespace

std::string canonical_key(const Term& t) {
    std::unordered_map<std::string, std::size_t> numbering;
    std::string out;
    encode(t, numbering, out);
    return out;
}

bool alpha_eq(const Term& a, const Term& b) { return canonical_key(a) == canonical_key(b); }

// ---------------------------------------------------------------------------
// Substitution classes

namespace {

std::vector<std::pair<std::string, Term>> proper_bindings(const Substitution& subst) {
    std::vector<std::pair<std::string, Term>> out;
    for (const auto& [x, image] : subst) {
        if (image.is_var() && image.name() == x) continue;
        out.emplace_back(x, image);
    }
    return out;
}

}  // namespace

SubstitutionKind classify(const Substitution& subst) {
    SubstitutionKind kind;
    const auto bindings = proper_bindings(subst);
    kind.flat = std::all_of(bindings.begin(), bindings.end(), [](const auto& b) { return b.second.is_var(); });
    std::set<std::string> seen;
    kind.linear = std::all_of(bindings.begin(), bindings.end(), [&](const auto& b) { return linear_walk(b.second, seen); });
    kind.renaming = kind.flat && kind.linear;
    return kind;
}

SubstitutionSplit decompose(const Substitution& subst) {
    const SubstitutionKind kind = classify(subst);
    if (kind.flat) return {subst, {}};
    if (kind.linear) return {{}, subst};

    std::set<std::string> taken;
    for (const auto& [x, image] : subst) {
        taken.insert(x);
        for (const auto& v : vars(image)) taken.insert(v);
    }
    SubstitutionSplit split;
    std::function<Term(const Term&)> linearize = [&](const Term& t) -> Term {
        if (t.is_var()) {
            const std::string base = base_name(t.name());
            for (std::size_t k = 1;; ++k) {
                std::string fresh = base + std::to_string(k);
                if (taken.insert(fresh).second) {
                    split.flat.emplace(fresh, t);
                    return Term::var(std::move(fresh));
                }
            }
        }
        std::vector<Term> args;
        args.reserve(t.arity());
        for (const auto& a : t.args()) args.push_back(linearize(a));
        return Term::app(t.name(), std::move(args));
    };
    for (const auto& [x, image] : proper_bindings(subst)) split.linear.emplace(x, linearize(image));
    return split;
}

}  // namespace hornset
