#pragma once

#include "traceexpr/certify.hpp"
#include "traceexpr/dsl.hpp"
#include "traceexpr/iso.hpp"
#include "traceexpr/measure.hpp"
#include "traceexpr/semantics.hpp"
#include "traceexpr/translate.hpp"
#include "traceexpr/validate.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace traceexpr::cli {

using nlohmann::json;

inline constexpr const char *kSchemaVersion = "1.0";

/// Always "n/d".
std::string rational_text(const Rational &r);

/// Hex SHA-256 of the canonical printed form.
std::string machine_digest(const Machine &m);

json to_json(const MeasureResult &r);
json to_json(const Trace &t, const MachineHeader &h);
json to_json(const Run &r, const Machine &m);
json to_json(const Violation &v);
json to_json(const Diagnostic &d);
json to_json(const TranslationReport &r, const Machine &source);
json to_json(const IsoResult &r, const Machine &left, const Machine &right);
json to_json(const PtaStrictnessCertificate &c);
json to_json(const TapdStrictnessCertificate &c);
json machine_entry(const Machine &m, const std::string &path);

/// Indented "key: value" rendering for --format pretty.
std::string pretty(const json &doc);

} // namespace traceexpr::cli
