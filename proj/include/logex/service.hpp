#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logex/exercises.hpp"
#include "logex/json_io.hpp"
#include "logex/session.hpp"

namespace logex {

struct ApiConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string exercise_file;
  std::string log_path;  // empty: keep the log in memory only

  /// Absorption, solution-length and divergence advisories on accepted steps.
  bool advisories = true;
  bool length_warnings = true;
  bool divergence_warnings = true;
  /// Name the buggy rule even when the resulting formula is equivalent.
  bool equivalent_buggy_feedback = true;
  bool strict_dnf = false;
  bool strict_cnf = false;
  bool strict_proof = true;

  /// Step correction only: the configuration of the original pilot.
  static ApiConfig pilot();
  Mode mode_for(ExerciseKind k) const;
};

/// Overrides fields present in a JSON config file.
ApiConfig load_config_file(const std::string& path, ApiConfig base = {});
/// LOGEX_ADDR (host:port), LOGEX_EXERCISES, LOGEX_LOG and LOGEX_CONFIG.
ApiConfig config_from_env(ApiConfig base = {});
Json to_json(const ApiConfig& c);

struct Response {
  int status = 200;
  Json body;
};

/// The JSON API without the HTTP transport. Requests for one session are
/// serialized; different sessions run in parallel.
class Service {
 public:
  using Clock = std::function<std::int64_t()>;

  /// Replays `config.log_path` if it exists.
  Service(ApiConfig config, ExerciseBank bank, Clock clock = {});

  Response handle(std::string_view method, std::string_view path, std::string_view body);

  /// Every event written so far, in write order.
  std::vector<LogEvent> log() const;
  std::optional<Session> session(const std::string& id) const;
  const ApiConfig& config() const { return config_; }
  const ExerciseBank& bank() const { return bank_; }

 private:
  struct Slot {
    std::mutex mutex;
    Session session;
  };

  Slot* find_slot(const std::string& id) const;
  std::int64_t now(const Session& s) const;
  void commit(Slot& slot, LogEvent e);

  Response create_session(const Json& body);
  Response list_exercises() const;
  Response create_exercise(const Json& body);
  Response exercise_state(Slot& slot, const std::string& exercise);
  Response submit_step(Slot& slot, const std::string& exercise, const Json& body);
  Response undo(Slot& slot, const std::string& exercise, const Json& body);
  Response hint(Slot& slot, const std::string& exercise, const Json& body);
  Response next(Slot& slot, const std::string& exercise);
  Response solution(Slot& slot, const std::string& exercise);
  Response metrics(Slot& slot);

  /// Starts the exercise in the session on first access.
  const ExerciseProgress* ensure_started(Slot& slot, const std::string& exercise);
  void complete_if_finished(Slot& slot, const std::string& exercise);

  ApiConfig config_;
  ExerciseBank bank_;
  Clock clock_;
  std::unique_ptr<LogSink> sink_;

  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::unique_ptr<Slot>> sessions_;
  std::size_t next_session_ = 1;

  mutable std::mutex log_mutex_;
  std::vector<LogEvent> log_;
};

/// Exercise view shared by the service and its clients.
Json to_json(const ExerciseProgress& p);

}  // namespace logex
