#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hornset/deletion.hpp"
#include "hornset/diagnostic.hpp"
#include "hornset/engine.hpp"
#include "hornset/path.hpp"
#include "hornset/term.hpp"

namespace hornset {

// Concrete syntax (".hn" files):
//
//   program      ::= item*
//   item         ::= signature | congruence | predicates | clause
//   signature    ::= "constructors" decl ("," decl)* "."
//   decl         ::= ctor "/" digits
//   congruence   ::= "congruence" [pathpair ("," pathpair)*] "."
//   pathpair     ::= path "~" path
//   predicates   ::= "predicates" pred ("," pred)* "."   (predicates without clauses)
//   clause       ::= atom ["<-" atom ("," atom)*] "."
//   atom         ::= pred "(" term ")"
//   term         ::= primary [":" term]          (right associative)
//   primary      ::= VAR | ctor ["(" term ("," term)* ")"] | "(" term ")"
//   path         ::= "eps" | step ("." step)*    (resolved against the signature)
//
// VAR starts with an uppercase letter; ctor and pred are lowercase
// identifiers (letters, digits, "_") or digit strings; ":" is the infix
// binary constructor. "%" starts a comment running to the end of the line.

struct ParseResult {
    std::optional<HornProgram> program;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return program.has_value() && !has_errors(diagnostics); }
};

ParseResult parse_program(std::string_view text);

class ParseError : public std::runtime_error {
public:
    explicit ParseError(Diagnostic d) : std::runtime_error(to_string(d)), diagnostic_(std::move(d)) {}
    const Diagnostic& diagnostic() const { return diagnostic_; }

private:
    Diagnostic diagnostic_;
};

/// Parses a standalone term. With a signature, constructors are checked
/// against it. Throws ParseError.
Term parse_term(std::string_view text, const Signature* sig = nullptr);

/// Parses "p(TERM)". Throws ParseError.
Atom parse_atom(std::string_view text, const Signature* sig = nullptr);

/// Parses a path literal such as ":.1.s.1", ":.2.0" or "eps". Throws ParseError.
Path parse_path(std::string_view text, const Signature& sig);

/// Parses "q <- q.q'". Throws ParseError.
Deletion parse_deletion(std::string_view text, const Signature& sig);

/// Re-parseable text: signature block, congruence block (when declared),
/// predicates block (for declared predicates without clauses), then one
/// clause per line.
std::string render_program(const HornProgram& prog);
std::string render_clause(const Clause& c);
std::string render_atom(const Atom& a);

}  // namespace hornset
