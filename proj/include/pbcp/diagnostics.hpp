#pragma once

#include <string>
#include <vector>

namespace pbcp {

struct SourcePos {
    int line = 0;
    int col = 0;
};

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    SourcePos pos;
    std::string message;
};

inline Diagnostic make_error(SourcePos pos, std::string msg) {
    return Diagnostic{Diagnostic::Severity::Error, pos, std::move(msg)};
}

inline Diagnostic make_warning(SourcePos pos, std::string msg) {
    return Diagnostic{Diagnostic::Severity::Warning, pos, std::move(msg)};
}

inline bool has_errors(const std::vector<Diagnostic>& ds) {
    for (const auto& d : ds)
        if (d.severity == Diagnostic::Severity::Error) return true;
    return false;
}

inline std::string format_diagnostic(const Diagnostic& d) {
    std::string s = d.severity == Diagnostic::Severity::Error ? "error" : "warning";
    s += " [" + std::to_string(d.pos.line) + ":" + std::to_string(d.pos.col) + "] " + d.message;
    return s;
}

}  // namespace pbcp
