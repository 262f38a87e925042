#include "hornset/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "hornset/deletion.hpp"
#include "hornset/engine.hpp"
#include "hornset/syntax.hpp"

namespace hornset {

namespace {

enum class Format { Pretty, Machine };

struct Context {
    Format format = Format::Pretty;
    SearchLimits limits;
    std::ostream& out;
    std::ostream& err;

    bool machine() const { return format == Format::Machine; }
};

// Thrown to leave a subcommand with a given exit code after reporting.
struct Exit {
    int code;
};

void report(Context& ctx, const std::string& file, const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) {
        if (ctx.machine()) continue;
        ctx.err << (file.empty() ? "" : file + ":") << to_string(d) << "\n";
    }
    if (ctx.machine()) {
        ctx.out << "diagnostics.n=" << diags.size() << "\n";
        for (std::size_t i = 0; i < diags.size(); ++i) {
            const auto& d = diags[i];
            const std::string key = "diagnostic." + std::to_string(i + 1);
            ctx.out << key << ".severity=" << severity_name(d.severity) << "\n";
            ctx.out << key << ".code=" << d.code << "\n";
            if (d.location) {
                ctx.out << key << ".line=" << d.location->line << "\n";
                ctx.out << key << ".column=" << d.location->column << "\n";
            }
            ctx.out << key << ".message=" << d.message << "\n";
        }
    }
}

[[noreturn]] void fail_with(Context& ctx, const std::string& file, const Diagnostic& d) {
    if (ctx.machine()) ctx.out << "result=error\n";
    report(ctx, file, {d});
    throw Exit{kExitDiagnostics};
}

std::string read_file(Context& ctx, const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) fail_with(ctx, "", make_error("io", "cannot read " + file));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

HornProgram load(Context& ctx, const std::string& file, bool validate) {
    ParseResult parsed = parse_program(read_file(ctx, file));
    if (!parsed.ok()) {
        if (ctx.machine()) ctx.out << "result=error\n";
        report(ctx, file, parsed.diagnostics);
        throw Exit{kExitDiagnostics};
    }
    HornProgram prog = std::move(*parsed.program);
    if (validate) {
        auto diags = validate_program(prog, ctx.limits);
        if (has_errors(diags)) {
            if (ctx.machine()) ctx.out << "result=error\n";
            report(ctx, file, diags);
            throw Exit{kExitDiagnostics};
        }
    }
    return prog;
}

template <class F>
auto parsing(Context& ctx, F&& f) {
    try {
        return f();
    } catch (const ParseError& e) {
        fail_with(ctx, "", e.diagnostic());
    }
}

void print_terms(Context& ctx, const std::vector<Term>& terms) {
    if (ctx.machine()) {
        ctx.out << "count=" << terms.size() << "\n";
        for (std::size_t i = 0; i < terms.size(); ++i) ctx.out << "term." << i + 1 << "=" << to_string(terms[i]) << "\n";
        return;
    }
    for (const auto& t : terms) ctx.out << to_string(t) << "\n";
    ctx.out << terms.size() << (terms.size() == 1 ? " term\n" : " terms\n");
}

// -- subcommands ------------------------------------------------------------

int cmd_validate(Context& ctx, const std::string& file) {
    HornProgram prog = load(ctx, file, /*validate=*/false);
    auto diags = validate_program(prog, ctx.limits);
    const bool ok = !has_errors(diags);
    if (ctx.machine()) {
        ctx.out << "result=" << (ok ? "valid" : "invalid") << "\n";
        ctx.out << "clauses=" << prog.clauses.size() << "\n";
        ctx.out << "predicates=" << prog.predicates().size() << "\n";
    }
    report(ctx, file, diags);
    if (!ctx.machine() && ok) {
        ctx.out << "valid: " << prog.clauses.size() << " clauses, " << prog.predicates().size() << " predicates\n";
    }
    return ok ? kExitTrue : kExitDiagnostics;
}

int cmd_sat(Context& ctx, const std::string& file, const std::string& goal_text, bool witness, bool trace) {
    HornProgram prog = load(ctx, file, /*validate=*/true);
    const Atom goal = parsing(ctx, [&] { return parse_atom(goal_text, &prog.signature); });
    InhOptions options;
    options.limits = ctx.limits;
    const InhResult r = inh(prog, goal, options);
    if (ctx.machine()) {
        ctx.out << "result=" << (r.satisfiable ? "true" : "false") << "\n";
        if (witness && r.witness) ctx.out << "witness=" << to_string(*r.witness) << "\n";
        if (trace) {
            ctx.out << "trace.n=" << r.trace.size() << "\n";
            for (std::size_t i = 0; i < r.trace.size(); ++i) {
                const auto& s = r.trace[i];
                const std::string key = "trace." + std::to_string(i + 1);
                ctx.out << key << ".rule=" << static_cast<int>(s.rule) << "\n";
                ctx.out << key << ".kind=" << rule_name(s.rule) << "\n";
                ctx.out << key << ".pred=" << s.pred << "\n";
                ctx.out << key << ".term=" << to_string(s.term) << "\n";
                ctx.out << key << ".depth=" << s.depth << "\n";
                ctx.out << key << ".clause=" << s.clause + 1 << "\n";
            }
        }
    } else {
        ctx.out << (r.satisfiable ? "satisfiable" : "unsatisfiable") << "\n";
        if (witness && r.witness) ctx.out << "witness: " << to_string(*r.witness) << "\n";
        if (trace) {
            for (std::size_t i = 0; i < r.trace.size(); ++i) {
                const auto& s = r.trace[i];
                ctx.out << i + 1 << ". rule " << static_cast<int>(s.rule) << " (" << rule_name(s.rule) << ") "
                        << std::string(2 * s.depth, ' ') << s.pred << "(" << to_string(s.term) << ")  [clause "
                        << s.clause + 1 << "]\n";
            }
        }
    }
    return r.satisfiable ? kExitTrue : kExitFalse;
}

int cmd_intersect(Context& ctx, const std::string& file, const std::string& left, const std::string& right,
                  const std::string& out_file) {
    HornProgram prog = load(ctx, file, /*validate=*/true);
    const IntersectResult r = intersect(prog, left, right);

    std::string text;
    for (const auto& [name, parts] : r.names) {
        text += "% " + name + " = " + parts.first + " & " + parts.second + "\n";
    }
    for (const auto& d : r.diagnostics) text += "% " + to_string(d) + "\n";
    text += render_program(r.program);

    if (!out_file.empty()) {
        std::ofstream o(out_file, std::ios::binary);
        if (!o) fail_with(ctx, "", make_error("io", "cannot write " + out_file));
        o << text;
    }
    if (ctx.machine()) {
        ctx.out << "predicate=" << r.predicate << "\n";
        ctx.out << "names.n=" << r.names.size() << "\n";
        for (std::size_t i = 0; i < r.names.size(); ++i) {
            const std::string key = "name." + std::to_string(i + 1);
            ctx.out << key << "=" << r.names[i].first << "\n";
            ctx.out << key << ".left=" << r.names[i].second.first << "\n";
            ctx.out << key << ".right=" << r.names[i].second.second << "\n";
        }
        ctx.out << "added.n=" << r.added.size() << "\n";
        for (std::size_t i = 0; i < r.added.size(); ++i) {
            ctx.out << "added." << i + 1 << "=" << render_clause(r.added[i]) << "\n";
        }
        report(ctx, file, r.diagnostics);
    } else if (out_file.empty()) {
        ctx.out << text;
    } else {
        for (const auto& c : r.added) ctx.out << render_clause(c) << "\n";
    }
    return kExitTrue;
}

int cmd_bound(Context& ctx, const std::string& file, const std::string& goal_text) {
    HornProgram prog = load(ctx, file, /*validate=*/true);
    const Atom goal = parsing(ctx, [&] { return parse_atom(goal_text, &prog.signature); });
    print_terms(ctx, bound_set(prog, goal.term, ctx.limits));
    return kExitTrue;
}

int cmd_repr(Context& ctx, const std::string& term_text) {
    const Term t = parsing(ctx, [&] { return parse_term(term_text); });
    const TermRepr r = repr_of(t);
    const auto classes = r.eq.nontrivial_classes();
    auto class_text = [](const std::vector<Path>& cls) {
        std::string s = "{";
        for (std::size_t i = 0; i < cls.size(); ++i) s += (i ? ", " : "") + to_string(cls[i]);
        return s + "}";
    };
    if (ctx.machine()) {
        ctx.out << "term=" << to_string(t) << "\n";
        ctx.out << "paths.n=" << r.paths.size() << "\n";
        std::size_t i = 0;
        for (const auto& p : r.paths) ctx.out << "path." << ++i << "=" << to_string(p) << "\n";
        ctx.out << "classes.n=" << classes.size() << "\n";
        for (std::size_t k = 0; k < classes.size(); ++k) ctx.out << "class." << k + 1 << "=" << class_text(classes[k]) << "\n";
    } else {
        ctx.out << "term: " << to_string(t) << "\n";
        ctx.out << "paths: " << to_string(r.paths) << "\n";
        ctx.out << "classes:";
        if (classes.empty()) ctx.out << " (none)";
        for (const auto& cls : classes) ctx.out << " " << class_text(cls);
        ctx.out << "\n";
    }
    return kExitTrue;
}

int cmd_order(Context& ctx, const std::string& smaller_text, const std::string& larger_text,
              const std::string& global_file) {
    std::optional<HornProgram> prog;
    if (!global_file.empty()) prog = load(ctx, global_file, /*validate=*/false);
    const Signature* sig = prog ? &prog->signature : nullptr;
    const Term smaller = parsing(ctx, [&] { return parse_term(smaller_text, sig); });
    const Term larger = parsing(ctx, [&] { return parse_term(larger_text, sig); });

    const OrderResult plain = leq(smaller, larger, ctx.limits);
    const GlobalCongruence gc = prog ? prog->global_congruence({smaller, larger})
                                     : GlobalCongruence({}, universe_of({smaller, larger}));
    const OrderResult star = leq_star(smaller, larger, gc, ctx.limits);
    const bool decided = prog ? star.witness.has_value() : plain.witness.has_value();

    if (ctx.machine()) {
        ctx.out << "leq=" << (plain.witness ? "true" : "false") << "\n";
        if (plain.witness) ctx.out << "leq.witness=" << to_string(*plain.witness) << "\n";
        ctx.out << "leq_star=" << (star.witness ? "true" : "false") << "\n";
        if (star.witness) ctx.out << "leq_star.witness=" << to_string(*star.witness) << "\n";
        ctx.out << "states=" << plain.stats.states + star.stats.states << "\n";
    } else {
        auto line = [&](const char* rel, const OrderResult& r) {
            ctx.out << to_string(smaller) << " " << rel << " " << to_string(larger) << ": "
                    << (r.witness ? "yes" : "no") << "\n";
            if (r.witness) ctx.out << "  " << (r.witness->empty() ? "(empty sequence)" : to_string(*r.witness)) << "\n";
        };
        line("<=", plain);
        line(prog ? "<=*" : "<=* (identity congruence)", star);
    }
    return decided ? kExitTrue : kExitFalse;
}

int cmd_enum(Context& ctx, const std::string& file, const std::string& pred, std::size_t depth) {
    HornProgram prog = load(ctx, file, /*validate=*/false);
    const auto preds = prog.predicates();
    if (std::find(preds.begin(), preds.end(), pred) == preds.end()) {
        fail_with(ctx, file, make_error(codes::kUnknownPredicate, "unknown predicate " + pred));
    }
    auto terms = enumerate_extension(prog, pred, depth);
    print_terms(ctx, terms);
    return terms.empty() ? kExitFalse : kExitTrue;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Satisfiability and intersection of term-set predicates defined by restricted Horn programs",
                 "hornset"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "pretty";
    std::size_t max_states = SearchLimits{}.max_states;
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"pretty", "machine"}));
    app.add_option("--max-states", max_states, "Cap on deletion-search states")->check(CLI::PositiveNumber);

    std::string file, goal, left, right, out_file, term_a, term_b, global_file, pred;
    bool witness = false, trace = false;
    std::size_t depth = 0;

    auto* validate = app.add_subcommand("validate", "Check a program against the side conditions");
    validate->add_option("file", file, "Program file")->required();

    auto* sat = app.add_subcommand("sat", "Decide satisfiability of a goal");
    sat->add_option("file", file, "Program file")->required();
    sat->add_option("--goal", goal, "Goal atom p(TERM)")->required();
    sat->add_flag("--witness", witness, "Print a ground witness");
    sat->add_flag("--trace", trace, "Print the rule applications");

    auto* inter = app.add_subcommand("intersect", "Construct the conjunction of two predicates");
    inter->add_option("file", file, "Program file")->required();
    inter->add_option("--left", left, "First predicate")->required();
    inter->add_option("--right", right, "Second predicate")->required();
    inter->add_option("--out", out_file, "Write the extended program here");

    auto* bound = app.add_subcommand("bound", "Print the finite set bounding all goal instances");
    bound->add_option("file", file, "Program file")->required();
    bound->add_option("--goal", goal, "Goal atom p(TERM)")->required();

    auto* repr = app.add_subcommand("repr", "Print the path set and congruence classes of a term");
    repr->add_option("term", term_a, "Term")->required();

    auto* order = app.add_subcommand("order", "Decide whether T1 is obtained from T2 by deletions");
    order->add_option("t1", term_a, "Smaller term")->required();
    order->add_option("t2", term_b, "Larger term")->required();
    order->add_option("--global", global_file, "Program whose congruence block defines the global congruence");

    auto* en = app.add_subcommand("enum", "Enumerate the ground extension of a predicate");
    en->add_option("file", file, "Program file")->required();
    en->add_option("--pred", pred, "Predicate")->required();
    en->add_option("--depth", depth, "Maximal term depth")->required()->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitTrue : kExitDiagnostics;
    }

    Context ctx{format == "machine" ? Format::Machine : Format::Pretty, SearchLimits{max_states}, out, err};
    try {
        if (validate->parsed()) return cmd_validate(ctx, file);
        if (sat->parsed()) return cmd_sat(ctx, file, goal, witness, trace);
        if (inter->parsed()) return cmd_intersect(ctx, file, left, right, out_file);
        if (bound->parsed()) return cmd_bound(ctx, file, goal);
        if (repr->parsed()) return cmd_repr(ctx, term_a);
        if (order->parsed()) return cmd_order(ctx, term_a, term_b, global_file);
        if (en->parsed()) return cmd_enum(ctx, file, pred, depth);
    } catch (const Exit& e) {
        return e.code;
    } catch (const ResourceExhausted& e) {
        if (ctx.machine()) ctx.out << "result=resource-exhausted\n";
        err << "resource exhausted: " << e.what() << "\n";
        return kExitExhausted;
    } catch (const EngineError& e) {
        if (ctx.machine()) ctx.out << "result=error\n";
        report(ctx, file, {e.diagnostic()});
        return kExitDiagnostics;
    } catch (const MonitorViolation& e) {
        if (ctx.machine()) ctx.out << "result=error\n";
        report(ctx, file, {e.diagnostic()});
        return kExitDiagnostics;
    } catch (const OutOfUniverse& e) {
        if (ctx.machine()) ctx.out << "result=error\n";
        report(ctx, file, {make_error(codes::kUnknownPath, e.what())});
        return kExitDiagnostics;
    }
    return kExitDiagnostics;
}

}  // namespace hornset
