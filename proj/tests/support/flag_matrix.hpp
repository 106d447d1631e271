// Submits the same steps to a pilot and an enhanced service and compares
// the diagnoses field by field.
#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "logex/recognizer.hpp"
#include "logex/service.hpp"
#include "logex/syntax.hpp"
#include "support/gen.hpp"

namespace testgen {

struct MatrixStep {
  std::string exercise;
  std::string text;
  std::optional<std::string> rule;
};

struct MatrixResult {
  std::size_t steps = 0;
  std::size_t recognized = 0;       // steps some standard rule explains
  std::size_t enhanced_advice = 0;  // enhanced responses carrying advisories
  std::size_t kind_changes = 0;     // allowed equivalent-step feedback differences
  std::vector<std::string> failures;
};

// Steps from each exercise's start: sound rewrites with right, wrong and
// missing rule names, buggy rewrites, two-step jumps, non-equivalent edits
// and unparsable text.
inline std::vector<MatrixStep> matrix_steps(Rng& rng, const logex::ExerciseBank& bank, std::size_t per_exercise) {
  using namespace logex;
  std::vector<MatrixStep> out;
  const FormulaOptions o{3, 2, false, false};
  for (const auto& e : bank.all()) {
    const Formula& f = e.start;
    std::vector<MatrixStep> mine;
    auto rewrites = all_rewrites(rng, f, o);
    for (const auto& rw : rewrites) {
      std::size_t naming = pick(rng, 4);
      std::optional<std::string> rule;
      if (naming == 1) rule = rw.rule->id;
      if (naming == 2) rule = standard_rules()[pick(rng, standard_rules().size())].id;
      mine.push_back({e.id, print(rw.after), rule});
      if (pick(rng, 3) == 0) {
        auto more = all_rewrites(rng, rw.after, o);
        if (!more.empty()) mine.push_back({e.id, print(more[pick(rng, more.size())].after), std::nullopt});
      }
    }
    for (const auto& bug : buggy_rules()) {
      Rule as_rule{bug.id, bug.id, bug.variants, false};
      for (const auto& pos : positions(f)) {
        for (const auto& v : bug.variants) {
          for (const auto& app : apply_all(as_rule, v, Orientation::LeftToRight, f, pos, {})) {
            mine.push_back({e.id, print(app.after), std::nullopt});
          }
        }
      }
    }
    mine.push_back({e.id, print(Formula::negation(f)), std::nullopt});
    mine.push_back({e.id, "(" + print(f), std::nullopt});
    std::shuffle(mine.begin(), mine.end(), rng);
    if (mine.size() > per_exercise) mine.resize(per_exercise);
    out.insert(out.end(), mine.begin(), mine.end());
  }
  return out;
}

inline logex::Json step_response(logex::Service& svc, const MatrixStep& s) {
  using namespace logex;
  auto session = svc.handle("POST", "/session", "{}").body["session"].get<std::string>();
  Json body{{"formulaText", s.text}};
  if (s.rule) body["ruleId"] = *s.rule;
  auto r = svc.handle("POST", "/session/" + session + "/exercise/" + s.exercise + "/step", body.dump());
  return r.body["diagnosis"];
}

inline MatrixResult run_flag_matrix(const logex::ExerciseBank& bank, const std::vector<MatrixStep>& steps) {
  using namespace logex;
  MatrixResult res;
  Service pilot(ApiConfig::pilot(), bank);
  Service enhanced(ApiConfig{}, bank);
  const std::set<std::string> equivalent_feedback{"buggy-but-equivalent", "equivalent-unrecognized"};
  for (const auto& s : steps) {
    ++res.steps;
    Json a = step_response(pilot, s);
    Json b = step_response(enhanced, s);
    auto where = s.exercise + " -> " + s.text + ": ";
    bool recognized = false;
    auto parsed = try_parse(s.text);
    if (const auto* after = std::get_if<Formula>(&parsed)) {
      recognized = !recognize(bank.find(s.exercise)->start, *after).empty();
    }
    if (recognized) ++res.recognized;
    if (!a.value("advisories", Json::array()).empty()) res.failures.push_back(where + "pilot gave advisories");
    if (!b.value("advisories", Json::array()).empty()) ++res.enhanced_advice;
    if (a["kind"] != b["kind"]) {
      if (recognized || !equivalent_feedback.count(a.value("kind", "")) || !equivalent_feedback.count(b.value("kind", ""))) {
        res.failures.push_back(where + "kind " + a["kind"].dump() + " vs " + b["kind"].dump());
      } else {
        ++res.kind_changes;
      }
      continue;
    }
    if (a["accepted"] != b["accepted"]) res.failures.push_back(where + "accept/reject differs");
    Json ca = a, cb = b;
    ca.erase("advisories");
    cb.erase("advisories");
    if (ca != cb) res.failures.push_back(where + "diagnosis differs beyond advisories");
  }
  return res;
}

}  // namespace testgen
