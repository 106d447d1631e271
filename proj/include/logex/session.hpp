#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "logex/exercises.hpp"
#include "logex/json_io.hpp"
#include "logex/strategy.hpp"

namespace logex {

enum class EventKind {
  SessionCreated,
  ExerciseStarted,
  StepSubmitted,
  Diagnosis,
  HintRequested,
  NextStepRequested,
  WorkedSolutionRequested,
  Undo,
  ExerciseCompleted,
};

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view text);

/// One line of the interaction log. Timestamps are epoch milliseconds and
/// supplied by the caller.
struct LogEvent {
  std::int64_t ts = 0;
  std::string session;
  std::string exercise;  // empty for session-created
  EventKind kind = EventKind::SessionCreated;
  Json payload = Json::object();

  friend bool operator==(const LogEvent&, const LogEvent&) = default;
};

class MalformedLog : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json to_json(const LogEvent& e);
LogEvent event_from_json(const Json& j);
/// Compact single-line JSON, no trailing newline.
std::string to_line(const LogEvent& e);
/// Reads newline-delimited events; blank lines are skipped. Throws
/// MalformedLog with the line number.
std::vector<LogEvent> read_log(std::istream& in);
std::vector<LogEvent> read_log_file(const std::string& path);

using ExerciseState = std::variant<DerivationState, ProofState>;

struct ExerciseProgress {
  Exercise exercise;
  ExerciseState state;
  std::size_t accepted_steps = 0;  // accepted student steps that changed the formula
  std::size_t rejected_steps = 0;
  std::size_t noop_steps = 0;
  std::size_t hints = 0;
  std::size_t next_steps = 0;
  std::size_t worked_solutions = 0;
  std::size_t undos = 0;
  std::int64_t started_at = 0;
  std::int64_t last_event_at = 0;
  std::optional<std::int64_t> completed_at;

  bool is_proof() const { return std::holds_alternative<ProofState>(state); }
  const Formula& head(ChainDirection d = ChainDirection::Forward) const;
  std::size_t chain_length(ChainDirection d = ChainDirection::Forward) const;
  /// Normal form reached, or proof closed.
  bool finished() const;
};

struct Session {
  std::string id;
  std::string student;
  std::optional<std::string> active_exercise;
  std::map<std::string, ExerciseProgress> exercises;
  std::optional<std::int64_t> last_ts;
  /// Exercise and direction of a step-submitted still awaiting its diagnosis.
  std::optional<std::pair<std::string, ChainDirection>> pending;
  std::size_t event_count = 0;

  const ExerciseProgress* progress(const std::string& exercise) const;
};

class SessionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies one event. On error the session is left unchanged.
void record(Session& session, const LogEvent& event);

/// Replays a log, one session per session id.
std::map<std::string, Session> replay(const std::vector<LogEvent>& log);

/// Canonical dump of the full session state, used to compare replays.
Json snapshot(const Session& session);

/// Re-diagnoses every accepted step of a log against the replayed state.
/// Returns one line per inconsistency.
std::vector<std::string> audit(const std::vector<LogEvent>& log);

/// rejected / accepted; absent without accepted steps.
std::optional<double> error_fraction(const ExerciseProgress& p);

struct TimePerStep {
  double minutes = 0;
  bool partial = false;  // exercise not completed; elapsed time so far
};
std::optional<TimePerStep> time_per_correct_step(const ExerciseProgress& p);

/// accepted / worked-solution length to the student's final formula;
/// absent for unfinished exercises or a zero-length worked solution.
std::optional<double> efficiency(const ExerciseProgress& p);

/// Worked-solution length to the student's current formula (the whole proof
/// for proofs).
std::size_t worked_length_to_head(const ExerciseProgress& p);

/// Accepted steps, capped per exercise at its worked-solution length, over
/// the summed worked-solution lengths of `set`. A finished exercise counts
/// the worked length to the student's final formula. Throws on an empty set.
double completion_ratio(const Session& session, const std::vector<Exercise>& set);
std::size_t error_count(const Session& session, const std::vector<Exercise>& set);

struct ExerciseMetrics {
  std::string session;
  std::string student;
  std::string exercise;
  ExerciseKind kind = ExerciseKind::ToDnf;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  bool completed = false;
  std::optional<double> error_fraction;
  std::optional<TimePerStep> time_per_step;
  std::optional<double> efficiency;
  std::size_t worked_length = 0;
};

struct SetMetrics {
  ExerciseKind kind = ExerciseKind::ToDnf;
  double completion = 0;  // %comp as a fraction
  std::size_t errors = 0;
  std::optional<double> efficiency;  // mean over completed exercises
};

struct MetricsReport {
  std::vector<ExerciseMetrics> exercises;
  std::vector<SetMetrics> sets;
};

/// Per-exercise rows in exercise id order. Sets are the started exercises
/// grouped by kind.
MetricsReport metrics_report(const Session& session);
Json to_json(const MetricsReport& r);

/// Append-only, thread-safe NDJSON sink.
class LogSink {
 public:
  explicit LogSink(std::string path);
  void append(const LogEvent& e);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::mutex mutex_;
};

}  // namespace logex
