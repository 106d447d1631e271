// Random event sequences for the session log, valid and invalid mixed.
#pragma once

#include <string>
#include <vector>

#include "logex/json_io.hpp"
#include "logex/session.hpp"
#include "logex/syntax.hpp"
#include "support/gen.hpp"

namespace testgen {

inline bool chained_from(const Formula& start, const std::vector<logex::RuleApplication>& steps) {
  const Formula* cur = &start;
  for (const auto& s : steps) {
    if (s.before != *cur) return false;
    cur = &s.after;
  }
  return true;
}

// Every chain starts at its exercise's formula and links step to step.
inline bool chains_ok(const logex::Session& s) {
  for (const auto& [id, p] : s.exercises) {
    if (const auto* proof = std::get_if<logex::ProofState>(&p.state)) {
      if (proof->lhs != p.exercise.lhs() || proof->rhs != *p.exercise.rhs) return false;
      if (!chained_from(proof->lhs, proof->forward) || !chained_from(proof->rhs, proof->backward)) return false;
    } else {
      const auto& d = std::get<logex::DerivationState>(p.state);
      if (d.start != p.exercise.start || !chained_from(d.start, d.steps)) return false;
    }
  }
  return true;
}

struct FuzzOutcome {
  std::vector<logex::LogEvent> recorded;  // events record() accepted, in order
  logex::Session session;
  std::size_t rejected = 0;
  std::string violation;  // empty when every invariant held
};

// Drives record() with `n` random events against exercises from `pool`.
// Rejected events must leave the session untouched; accepted ones must keep
// every chain well formed.
inline FuzzOutcome fuzz_session(Rng& rng, const std::vector<logex::Exercise>& pool, int n) {
  using namespace logex;
  FuzzOutcome out;
  out.session.id = "f";
  std::int64_t ts = 0;
  std::string current;
  std::optional<ChainDirection> pending;
  const FormulaOptions fopts{3, 2, false, false};

  auto head = [&](ChainDirection d) -> std::optional<Formula> {
    const auto* p = out.session.progress(current);
    if (!p || (d == ChainDirection::Backward && !p->is_proof())) return std::nullopt;
    return p->head(d);
  };
  auto direction = [&]() { return pick(rng, 3) == 0 ? ChainDirection::Backward : ChainDirection::Forward; };

  for (int i = 0; i < n; ++i) {
    ts += pick(rng, 20) == 0 ? -1000 : static_cast<std::int64_t>(pick(rng, 5000));
    LogEvent ev{ts, "f", current, EventKind::SessionCreated, Json::object()};
    std::size_t choice = pick(rng, 12);
    if (pending && pick(rng, 8) != 0) choice = 2;  // usually answer the open submission
    if (current.empty() || choice == 0) {
      const Exercise& e = pool[pick(rng, pool.size())];
      ev.exercise = e.id;
      ev.kind = EventKind::ExerciseStarted;
      ev.payload = {{"exercise", to_json(e)}};
    } else if (choice == 1) {
      ev.kind = EventKind::StepSubmitted;
      ev.payload = {{"formulaText", "p"}, {"direction", to_string(direction())}, {"mode", "lenient"}};
    } else if (choice == 2) {
      ev.kind = EventKind::Diagnosis;
      std::optional<Formula> h = pending ? head(*pending) : std::nullopt;
      std::optional<Rewrite> rw;
      if (h) rw = random_rewrite(rng, *h, fopts, 40);
      std::size_t outcome = pick(rng, 4);
      if (outcome == 0 || !rw) {
        ev.payload = {{"accepted", false}, {"kind", "not-equivalent"}};
      } else if (outcome == 1) {
        ev.payload = {{"accepted", true}, {"kind", "noop"}};
      } else {
        RuleApplication app{rw->rule->id, rw->variant->id, rw->position, rw->orientation, *h, rw->after};
        ev.payload = {{"accepted", true}, {"kind", "correct"}, {"formula", print(rw->after)}};
        if (outcome == 3) ev.payload["application"] = to_json(app);
      }
    } else if (choice <= 4) {
      ev.kind = EventKind::Undo;
      ev.payload = {{"direction", to_string(direction())}};
    } else if (choice == 5) {
      ev.kind = EventKind::HintRequested;
      ev.payload = {{"level", static_cast<int>(pick(rng, 5))}};
    } else if (choice == 6) {
      ev.kind = EventKind::NextStepRequested;
      ChainDirection d = direction();
      std::optional<Formula> h = head(d);
      std::optional<Rewrite> rw;
      if (h) rw = random_rewrite(rng, *h, fopts, 40);
      if (rw) {
        RuleApplication app{rw->rule->id, rw->variant->id, rw->position, rw->orientation, *h, rw->after};
        Json step = to_json(app);
        step["direction"] = to_string(d);
        ev.payload = {{"step", step}};
      } else {
        ev.payload = {{"step", {{"direction", "sideways"}}}};
      }
    } else if (choice == 7) {
      ev.kind = EventKind::WorkedSolutionRequested;
      ev.payload = {{"length", 0}};
    } else if (choice == 8) {
      ev.kind = EventKind::ExerciseCompleted;
    } else if (choice == 9) {
      ev.kind = EventKind::HintRequested;
      ev.exercise = "missing";
      ev.payload = {{"level", 1}};
    } else if (choice == 10) {
      ev.kind = EventKind::SessionCreated;
      ev.exercise.clear();
    } else {
      ev.kind = EventKind::Diagnosis;
      ev.payload = {{"accepted", true}, {"kind", "correct"}, {"formula", "p /\\"}};
    }

    const Json before = snapshot(out.session);
    try {
      record(out.session, ev);
    } catch (const SessionError&) {
      ++out.rejected;
      if (snapshot(out.session) != before) {
        out.violation = "event " + std::to_string(i) + " failed but changed the session";
        return out;
      }
      ts = out.session.last_ts.value_or(0);
      continue;
    }
    out.recorded.push_back(ev);
    if (ev.kind == EventKind::ExerciseStarted) current = ev.exercise;
    pending = out.session.pending ? std::optional(out.session.pending->second) : std::nullopt;
    if (!chains_ok(out.session)) {
      out.violation = "event " + std::to_string(i) + " broke a chain";
      return out;
    }
  }
  return out;
}

}  // namespace testgen
