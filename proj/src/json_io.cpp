#include "logex/json_io.hpp"

#include <stdexcept>

#include "logex/syntax.hpp"

namespace logex {

Json to_json(const Position& pos) {
  Json j;
  j["path"] = pos.path;
  if (pos.span) {
    j["span"] = {{"start", pos.span->start}, {"length", pos.span->length}};
  } else {
    j["span"] = nullptr;
  }
  return j;
}

Position position_from_json(const Json& j) {
  Position pos;
  pos.path = j.at("path").get<std::vector<std::size_t>>();
  if (j.contains("span") && !j["span"].is_null()) {
    pos.span = Span{j["span"].at("start").get<std::size_t>(), j["span"].at("length").get<std::size_t>()};
  }
  return pos;
}

Json to_json(const RuleApplication& app) {
  return {{"ruleId", app.rule_id},
          {"variant", app.variant_id},
          {"position", to_json(app.position)},
          {"orientation", to_string(app.orientation)},
          {"formula", print(app.after)}};
}

RuleApplication application_from_json(const Json& j, const Formula& before) {
  const auto orientation = j.at("orientation").get<std::string>();
  if (orientation != "ltr" && orientation != "rtl") {
    throw std::invalid_argument("orientation must be ltr or rtl");
  }
  return RuleApplication{j.at("ruleId").get<std::string>(),
                         j.at("variant").get<std::string>(),
                         position_from_json(j.at("position")),
                         orientation == "ltr" ? Orientation::LeftToRight : Orientation::RightToLeft,
                         before,
                         parse(j.at("formula").get<std::string>())};
}

Json to_json(const SyntaxError& err) {
  Json j{{"offset", err.offset}, {"token", err.token}, {"expected", err.expected}};
  if (!err.suggestion.empty()) j["suggestion"] = err.suggestion;
  return j;
}

Json to_json(const Advisory& a) {
  Json j{{"kind", to_string(a.kind)}, {"message", a.message}};
  if (a.position) j["position"] = to_json(*a.position);
  return j;
}

Json to_json(const Diagnosis& d) {
  Json j{{"kind", to_string(d.kind)}, {"accepted", d.accepted}, {"message", d.message}};
  if (auto id = d.rule_id(); !id.empty()) j["ruleId"] = id;
  if (d.position) j["position"] = to_json(*d.position);
  if (d.after) j["formula"] = print(*d.after);
  if (d.syntax) j["syntax"] = to_json(*d.syntax);
  if (!d.claimed_rule.empty()) j["claimedRule"] = d.claimed_rule;
  if (d.application) j["application"] = to_json(*d.application);
  Json adv = Json::array();
  for (const auto& a : d.advisories) adv.push_back(to_json(a));
  j["advisories"] = adv;
  return j;
}

Json to_json(const WorkedStep& s) {
  return {{"direction", to_string(s.direction)}, {"ruleId", s.rule_id}, {"formula", print(s.formula)}};
}

Json to_json(const WorkedSolution& s) {
  Json j = Json::array();
  for (const auto& step : s) j.push_back(to_json(step));
  return j;
}

Json to_json(const NextStep& s) {
  Json j = to_json(s.application);
  j["direction"] = to_string(s.direction);
  return j;
}

Json to_json(const Hint& h) {
  Json j{{"level", h.level}, {"text", h.text}};
  if (h.step) j["step"] = to_json(*h.step);
  if (h.level == 3) j["solution"] = to_json(h.solution);
  return j;
}

Json to_json(const Exercise& e) {
  Json j{{"id", e.id},
         {"kind", to_string(e.kind)},
         {"difficulty", to_string(e.difficulty)},
         {"ordinal", e.ordinal}};
  if (e.kind == ExerciseKind::Proof) {
    j["lhs"] = print(e.start);
    j["rhs"] = print(*e.rhs);
  } else {
    j["formula"] = print(e.start);
  }
  if (e.user_created) j["user"] = true;
  return j;
}

Exercise exercise_from_json(const Json& j) {
  auto kind = parse_kind(j.at("kind").get<std::string>());
  auto difficulty = parse_difficulty(j.at("difficulty").get<std::string>());
  if (!kind || !difficulty) throw std::invalid_argument("unknown exercise kind or difficulty");
  const bool proof = *kind == ExerciseKind::Proof;
  Exercise e{j.at("id").get<std::string>(), *kind, *difficulty, j.at("ordinal").get<int>(),
             parse(j.at(proof ? "lhs" : "formula").get<std::string>()), std::nullopt,
             j.value("user", false)};
  if (proof) e.rhs = parse(j.at("rhs").get<std::string>());
  return e;
}

Json to_json(const RuleSheetEntry& r) {
  return {{"id", r.id}, {"name", r.name}, {"schema", r.schema}, {"variants", r.variants}};
}

}  // namespace logex
