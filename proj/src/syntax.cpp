#include "hornset/syntax.hpp"

#include <algorithm>

#include <cctype>
#include <charconv>

namespace hornset {

namespace {

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

struct SyntaxError {
    Diagnostic diagnostic;
};

struct RawPair {
    std::string left;
    std::string right;
    SourceLocation location;
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ParseResult program() {
        ParseResult result;
        HornProgram prog;
        bool declared_signature = false;
        std::vector<RawPair> raw_pairs;
        for (;;) {
            skip_space();
            if (at_end()) break;
            const std::size_t item_start = pos_;
            const SourceLocation here = location();
            try {
                if (keyword("constructors")) {
                    declared_signature = true;
                    signature_block(prog.signature);
                } else if (keyword("congruence")) {
                    prog.congruence_declared = true;
                    congruence_block(raw_pairs);
                } else if (keyword("predicates")) {
                    predicates_block(prog.declared);
                } else {
                    Clause c = clause();
                    c.location = here;
                    prog.clauses.push_back(std::move(c));
                }
            } catch (const SyntaxError& e) {
                result.diagnostics.push_back(e.diagnostic);
                recover(item_start);
            }
        }
        if (has_errors(result.diagnostics)) return result;
        if (prog.clauses.empty()) {
            result.diagnostics.push_back(make_error(codes::kEmptyProgram, "program has no clauses", location()));
            return result;
        }

        for (const auto& c : prog.clauses) {
            std::vector<const Term*> terms{&c.head.term};
            for (const auto& b : c.body) terms.push_back(&b.term);
            for (const Term* t : terms) {
                if (declared_signature) {
                    if (auto bad = prog.signature.check(*t)) {
                        result.diagnostics.push_back(make_error(codes::kSignature, *bad, c.location));
                    }
                } else {
                    try {
                        prog.signature.infer_from(*t);
                    } catch (const SignatureError& e) {
                        result.diagnostics.push_back(make_error(codes::kSignature, e.what(), c.location));
                    }
                }
            }
        }
        for (const auto& raw : raw_pairs) {
            try {
                prog.congruence.emplace_back(parse_path(raw.left, prog.signature),
                                             parse_path(raw.right, prog.signature));
            } catch (const ParseError& e) {
                Diagnostic d = e.diagnostic();
                d.location = raw.location;
                result.diagnostics.push_back(std::move(d));
            }
        }
        if (!has_errors(result.diagnostics)) result.program = std::move(prog);
        return result;
    }

    Term standalone_term() {
        skip_space();
        Term t = term();
        expect_end();
        return t;
    }

    Atom standalone_atom() {
        skip_space();
        Atom a = atom();
        expect_end();
        return a;
    }

private:
    // -- characters ---------------------------------------------------------

    bool at_end() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    SourceLocation location() const { return {line_, col_}; }

    void skip_space() {
        while (!at_end()) {
            if (std::isspace(static_cast<unsigned char>(peek()))) {
                advance();
            } else if (peek() == '%') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw SyntaxError{make_error(codes::kSyntax, message, location())};
    }

    std::string describe_next() const {
        if (at_end()) return "end of input";
        return std::string("'") + peek() + "'";
    }

    void expect(char c) {
        skip_space();
        if (peek() != c) fail(std::string("expected '") + c + "' but found " + describe_next());
        advance();
    }

    void expect_end() {
        skip_space();
        if (!at_end()) fail("unexpected " + describe_next() + " after the end");
    }

    // Skips past the next '.' (or to the end) after a syntax error.
    void recover(std::size_t item_start) {
        if (pos_ == item_start && !at_end()) advance();
        while (!at_end() && peek() != '.') advance();
        if (!at_end()) advance();
    }

    // Consumes `word` when it is followed by something other than an
    // identifier character or an opening parenthesis.
    bool keyword(std::string_view word) {
        if (text_.substr(pos_, word.size()) != word) return false;
        std::size_t after = pos_ + word.size();
        if (after < text_.size() && is_ident_char(text_[after])) return false;
        while (after < text_.size() && std::isspace(static_cast<unsigned char>(text_[after]))) ++after;
        if (after < text_.size() && text_[after] == '(') return false;
        for (std::size_t i = 0; i < word.size(); ++i) advance();
        return true;
    }

    std::string identifier() {
        std::string out;
        while (!at_end() && is_ident_char(peek())) {
            out += peek();
            advance();
        }
        return out;
    }

    // -- blocks -------------------------------------------------------------

    void signature_block(Signature& sig) {
        for (;;) {
            skip_space();
            const SourceLocation at = location();
            std::string name;
            if (peek() == ':') {
                name = ":";
                advance();
            } else if (is_lower(peek()) || is_digit(peek())) {
                name = identifier();
            } else {
                fail("expected a constructor name but found " + describe_next());
            }
            expect('/');
            skip_space();
            if (!is_digit(peek())) fail("expected an arity but found " + describe_next());
            const std::string digits = identifier();
            std::size_t arity = 0;
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), arity);
            if (ec != std::errc() || ptr != digits.data() + digits.size()) fail("invalid arity '" + digits + "'");
            try {
                sig.declare(name, arity);
            } catch (const SignatureError& e) {
                throw SyntaxError{make_error(codes::kSignature, e.what(), at)};
            }
            skip_space();
            if (peek() == ',') {
                advance();
                continue;
            }
            expect('.');
            return;
        }
    }

    void predicates_block(std::vector<std::string>& names) {
        for (;;) {
            skip_space();
            if (!is_lower(peek()) && !is_digit(peek())) fail("expected a predicate name but found " + describe_next());
            std::string name = identifier();
            if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(std::move(name));
            skip_space();
            if (peek() == ',') {
                advance();
                continue;
            }
            expect('.');
            return;
        }
    }

    // Path tokens are runs of characters other than space, '~' and ','; a
    // trailing '.' ends the block.
    bool path_token(std::string& out, SourceLocation& at) {
        skip_space();
        at = location();
        out.clear();
        if (peek() == '.') {
            advance();
            return true;  // terminator
        }
        while (!at_end() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != '~' && peek() != ',' &&
               peek() != '%') {
            out += peek();
            advance();
        }
        if (out.empty()) fail("expected a path but found " + describe_next());
        if (out.size() > 1 && out.back() == '.') {
            out.pop_back();
            return true;
        }
        return false;
    }

    void congruence_block(std::vector<RawPair>& pairs) {
        skip_space();
        if (peek() == '.') {
            advance();
            return;
        }
        for (;;) {
            RawPair pair;
            SourceLocation ignored;
            if (path_token(pair.left, pair.location)) fail("expected '~' after path " + pair.left);
            if (pair.left.empty()) fail("expected a path");
            expect('~');
            const bool done = path_token(pair.right, ignored);
            if (pair.right.empty()) fail("expected a path after '~'");
            pairs.push_back(pair);
            if (done) return;
            skip_space();
            if (peek() == ',') {
                advance();
                continue;
            }
            expect('.');
            return;
        }
    }

    Clause clause() {
        Clause c;
        c.head = atom();
        skip_space();
        if (peek() == '<' && peek(1) == '-') {
            advance();
            advance();
            for (;;) {
                skip_space();
                c.body.push_back(atom());
                skip_space();
                if (peek() == ',') {
                    advance();
                    continue;
                }
                break;
            }
        }
        expect('.');
        return c;
    }

    Atom atom() {
        skip_space();
        if (!is_lower(peek())) fail("expected a predicate name but found " + describe_next());
        Atom a;
        a.pred = identifier();
        expect('(');
        skip_space();
        a.term = term();
        expect(')');
        return a;
    }

    // -- terms --------------------------------------------------------------

    Term term() {
        Term left = primary();
        skip_space();
        if (peek() == ':') {
            advance();
            skip_space();
            Term right = term();
            return Term::app(":", {std::move(left), std::move(right)});
        }
        return left;
    }

    Term primary() {
        skip_space();
        if (peek() == '(') {
            advance();
            Term inner = term();
            expect(')');
            return inner;
        }
        if (is_upper(peek())) return Term::var(identifier());
        if (is_lower(peek()) || is_digit(peek())) {
            std::string name = identifier();
            skip_space();
            if (peek() != '(') return Term::app(std::move(name));
            advance();
            std::vector<Term> args;
            for (;;) {
                skip_space();
                args.push_back(term());
                skip_space();
                if (peek() == ',') {
                    advance();
                    continue;
                }
                break;
            }
            expect(')');
            return Term::app(std::move(name), std::move(args));
        }
        fail("expected a term but found " + describe_next());
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

void check_against(const Term& t, const Signature* sig) {
    if (!sig) return;
    if (auto bad = sig->check(t)) throw ParseError(make_error(codes::kSignature, *bad));
}

}  // namespace

ParseResult parse_program(std::string_view text) { return Parser(text).program(); }

Term parse_term(std::string_view text, const Signature* sig) {
    try {
        Term t = Parser(text).standalone_term();
        check_against(t, sig);
        return t;
    } catch (const SyntaxError& e) {
        throw ParseError(e.diagnostic);
    }
}

Atom parse_atom(std::string_view text, const Signature* sig) {
    try {
        Atom a = Parser(text).standalone_atom();
        check_against(a.term, sig);
        return a;
    } catch (const SyntaxError& e) {
        throw ParseError(e.diagnostic);
    }
}

Path parse_path(std::string_view text, const Signature& sig) {
    auto bad = [&](const std::string& why) {
        return ParseError(make_error(codes::kUnknownPath, "invalid path '" + std::string(text) + "': " + why));
    };
    if (text == "eps") return Path{};
    std::vector<std::string> tokens;
    std::size_t start = 0;
    for (;;) {
        const std::size_t dot = text.find('.', start);
        tokens.emplace_back(text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    std::vector<Step> steps;
    for (std::size_t i = 0; i < tokens.size();) {
        const std::string& ctor = tokens[i];
        if (ctor.empty()) throw bad("empty step");
        std::optional<std::size_t> arity = sig.arity(ctor);
        if (!arity && ctor == kPairCtor) arity = 2;
        if (!arity) throw bad("unknown constructor '" + ctor + "'");
        if (*arity == 0) {
            if (i + 1 != tokens.size()) throw bad("nullary constructor '" + ctor + "' must be the last step");
            steps.push_back(Step::marker(ctor));
            ++i;
            continue;
        }
        if (i + 1 >= tokens.size()) throw bad("missing argument index after '" + ctor + "'");
        const std::string& digits = tokens[i + 1];
        std::uint32_t index = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || index < 1 || index > *arity) {
            throw bad("argument index '" + digits + "' out of range for '" + ctor + "'");
        }
        steps.push_back(Step::into(ctor, static_cast<std::uint32_t>(*arity), index));
        i += 2;
    }
    return Path(std::move(steps));
}

Deletion parse_deletion(std::string_view text, const Signature& sig) {
    const std::size_t arrow = text.find("<-");
    if (arrow == std::string_view::npos) {
        throw ParseError(make_error(codes::kSyntax, "expected 'q <- q.q2' but found '" + std::string(text) + "'"));
    }
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    const Path anchor = parse_path(trim(text.substr(0, arrow)), sig);
    const Path target = parse_path(trim(text.substr(arrow + 2)), sig);
    if (!anchor.is_prefix_of(target) || anchor == target) {
        throw ParseError(make_error(codes::kSyntax, "deletion target must strictly extend its anchor"));
    }
    return Deletion{anchor, target.suffix_from(anchor.size())};
}

std::string render_atom(const Atom& a) { return a.pred + "(" + to_string(a.term) + ")"; }

std::string render_clause(const Clause& c) {
    std::string out = render_atom(c.head);
    for (std::size_t i = 0; i < c.body.size(); ++i) {
        out += i == 0 ? " <- " : ", ";
        out += render_atom(c.body[i]);
    }
    return out + ".";
}

std::string render_program(const HornProgram& prog) {
    std::string out;
    if (!prog.signature.empty()) {
        out += "constructors ";
        bool first = true;
        for (const auto& [name, arity] : prog.signature.constructors()) {
            if (!first) out += ", ";
            first = false;
            out += name + "/" + std::to_string(arity);
        }
        out += ".\n";
    }
    if (prog.congruence_declared) {
        out += "congruence";
        for (std::size_t i = 0; i < prog.congruence.size(); ++i) {
            out += i == 0 ? " " : ", ";
            out += to_string(prog.congruence[i].first) + " ~ " + to_string(prog.congruence[i].second);
        }
        out += ".\n";
    }
    std::vector<std::string> empty;
    for (const auto& p : prog.declared) {
        if (prog.clauses_of(p).empty()) empty.push_back(p);
    }
    if (!empty.empty()) {
        out += "predicates";
        for (std::size_t i = 0; i < empty.size(); ++i) out += (i == 0 ? " " : ", ") + empty[i];
        out += ".\n";
    }
    for (const auto& c : prog.clauses) out += render_clause(c) + "\n";
    return out;
}

}  // namespace hornset
