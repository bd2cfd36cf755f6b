#pragma once

#include <string>
#include <variant>

#include "kinkcheck/mpcc.hpp"
#include "kinkcheck/problem.hpp"

namespace kinkcheck {

using ParsedProblem = std::variant<AbsNormalProblem, MpccProblem>;

/// Parse a problem file. Files with a `switch` section (or neither section)
/// yield an AbsNormalProblem; files with an `mpcc` section yield an
/// MpccProblem. Throws ParseError with line/column on malformed input.
ParsedProblem parse_any(const std::string& text);

/// Parse, requiring an abs-normal problem.
AbsNormalProblem parse_problem(const std::string& text);

/// Parse, requiring an MPCC problem.
MpccProblem parse_mpcc(const std::string& text);

/// Canonical serialization; parse(serialize(p)) reproduces p exactly and
/// serialize(parse(s)) is a fixpoint after one round.
std::string serialize_problem(const AbsNormalProblem& p);
std::string serialize_mpcc(const MpccProblem& p);

/// Shortest round-trip decimal form of a double (also used by reports).
std::string format_double(double x);

}  // namespace kinkcheck
