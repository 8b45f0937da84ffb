#pragma once

#include "traceexpr/error.hpp"
#include "traceexpr/machine.hpp"
#include "traceexpr/weighting.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace traceexpr {

/// 1-based line and column.
struct SourcePos {
	std::size_t line = 1;
	std::size_t column = 1;

	friend bool operator==(const SourcePos &, const SourcePos &) = default;
};

struct SourceSpan {
	SourcePos begin;
	SourcePos end;

	/// "line:column".
	[[nodiscard]] std::string to_string() const;

	friend bool operator==(const SourceSpan &, const SourceSpan &) = default;
};

struct Diagnostic {
	SourceSpan span;
	std::string message;
	/// Other locations involved, e.g. the first declaration of a duplicate.
	std::vector<SourceSpan> related;

	/// "file:line:col: message" followed by "(see line:col)" for related spans.
	[[nodiscard]] std::string to_string(std::string_view source_name = {}) const;
};

/// Lexical, syntactic or lowering failure; carries every diagnostic found.
class ParseError : public Error {
public:
	explicit ParseError(std::vector<Diagnostic> diagnostics);
	[[nodiscard]] const std::vector<Diagnostic> &diagnostics() const { return diagnostics_; }

private:
	std::vector<Diagnostic> diagnostics_;
};

/// A parsed machine file: the machine and its optional weighting block.
struct MachineDoc {
	Machine machine;
	std::optional<WeightingMap> weights;
};

/// Parses one machine. Structural validity is not checked here; run
/// validate() on the result.
MachineDoc parse_machine(std::string_view text);

/// Parses a standalone "weights edges|actions { ... }" block against m.
WeightingMap parse_weighting(std::string_view text, const Machine &m);

/// Canonical source form; parse_machine(print_machine(d)) prints identically.
std::string print_machine(const MachineDoc &doc);
std::string print_machine(const Machine &m);
std::string print_weighting(const Machine &m, const WeightingMap &w);

} // namespace traceexpr
