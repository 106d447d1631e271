#pragma once

#include <json.hpp>

#include "logex/exercises.hpp"
#include "logex/recognizer.hpp"
#include "logex/rules.hpp"
#include "logex/strategy.hpp"

namespace logex {

using Json = nlohmann::json;

/// {"path": [..], "span": {"start": s, "length": n} | null}
Json to_json(const Position& pos);
Position position_from_json(const Json& j);

/// {"ruleId", "variant", "position", "orientation", "formula"}; the
/// formula is the application's result.
Json to_json(const RuleApplication& app);
/// Rebuilds an application on top of `before`. The stored formula is the
/// result; it is re-parsed, not recomputed.
RuleApplication application_from_json(const Json& j, const Formula& before);

Json to_json(const SyntaxError& err);
Json to_json(const Advisory& a);

/// Tagged diagnosis record: kind, accepted, message, and ruleId, position,
/// formula, syntax, claimedRule, advisories when present.
Json to_json(const Diagnosis& d);

Json to_json(const WorkedStep& s);
Json to_json(const WorkedSolution& s);
Json to_json(const NextStep& s);
Json to_json(const Hint& h);

Json to_json(const Exercise& e);
Exercise exercise_from_json(const Json& j);

Json to_json(const RuleSheetEntry& r);

}  // namespace logex
