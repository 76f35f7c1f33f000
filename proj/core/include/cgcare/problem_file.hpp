#pragma once

// Plain-text problem files: named dense matrices with explicit dimensions,
// an optional terminal penalty, horizon, initial state, and scalar solver
// settings. See docs/problem_format.md for the grammar. Parsing failures
// raise ParseError with a 1-based line number and the offending item.

#include "cgcare/problem.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace cgcare {

struct ProblemFileData {
    ProblemData problem;
    std::optional<Matrix> H;
    std::optional<Vector> x0;
    std::optional<double> horizon;                // scalar T
    std::map<std::string, double> settings;       // rank_tol, ode_tol, ...
};

/// Scalar setting names accepted in a problem file (besides T).
bool is_known_setting(const std::string& name);

ProblemFileData parse_problem_file(std::istream& in, const std::string& source = "<stream>");
ProblemFileData parse_problem_text(const std::string& text, const std::string& source = "<text>");
ProblemFileData load_problem_file(const std::string& path);

/// Serialization that re-parses to the same data (doubles are written with
/// round-trip precision).
std::string write_problem_file(const ProblemFileData& data);

}  // namespace cgcare
