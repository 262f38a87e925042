#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace hornset {

enum class Severity { Error, Warning, Note };

struct SourceLocation {
    std::size_t line = 0;    // 1-based
    std::size_t column = 0;  // 1-based
};

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    std::optional<SourceLocation> location;
};

/// Machine-readable diagnostic codes. Every validation failure maps to
/// exactly one of these.
namespace codes {
inline constexpr std::string_view kSyntax = "syntax";
inline constexpr std::string_view kEmptyProgram = "empty-program";
inline constexpr std::string_view kSignature = "signature";
inline constexpr std::string_view kUnknownPath = "unknown-path";
inline constexpr std::string_view kBodyCount = "body-count";
inline constexpr std::string_view kBodyVariables = "body-variables";
inline constexpr std::string_view kNotDecreasing = "not-decreasing";
inline constexpr std::string_view kPairNotDecreasing = "pair-not-decreasing";
inline constexpr std::string_view kHeadNotIncluded = "head-not-included";
inline constexpr std::string_view kPairNotIncluded = "pair-not-included";
inline constexpr std::string_view kGoalNotIncluded = "goal-not-included";
inline constexpr std::string_view kNotIncluded = "not-included";
inline constexpr std::string_view kNotMaximal = "global-not-maximal";
inline constexpr std::string_view kMonitor = "monitor-violation";
inline constexpr std::string_view kSearchExhausted = "search-exhausted";
inline constexpr std::string_view kMissingCongruence = "missing-congruence";
inline constexpr std::string_view kUnknownPredicate = "unknown-predicate";
inline constexpr std::string_view kBodyMismatch = "body-mismatch";
}  // namespace codes

inline Diagnostic make_error(std::string_view code, std::string message,
                             std::optional<SourceLocation> location = std::nullopt) {
    return Diagnostic{Severity::Error, std::string(code), std::move(message), location};
}

inline Diagnostic make_warning(std::string_view code, std::string message,
                               std::optional<SourceLocation> location = std::nullopt) {
    return Diagnostic{Severity::Warning, std::string(code), std::move(message), location};
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) {
        if (d.severity == Severity::Error) return true;
    }
    return false;
}

inline std::string_view severity_name(Severity s) {
    switch (s) {
        case Severity::Error: return "error";
        case Severity::Warning: return "warning";
        case Severity::Note: return "note";
    }
    return "error";
}

/// "3:7: error[code]: message" (location omitted when unknown).
inline std::string to_string(const Diagnostic& d) {
    std::string out;
    if (d.location) out += std::to_string(d.location->line) + ":" + std::to_string(d.location->column) + ": ";
    out += severity_name(d.severity);
    out += "[" + d.code + "]: " + d.message;
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const Diagnostic& d) { return os << to_string(d); }

}  // namespace hornset
