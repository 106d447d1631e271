#include <doctest.h>

#include <httplib.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "logex/service.hpp"
#include "logex/syntax.hpp"

extern char** environ;

using namespace logex;

namespace {

const std::string kFixture = std::string(LOGEX_FIXTURES_DIR) + "/scoring.log";
const std::string kBankPath = std::string(LOGEX_DATA_DIR) + "/exercises.jsonl";

struct Run {
  int rc = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Runs the CLI and captures stdout; stderr is appended when `with_err` is set.
Run cli(const std::vector<std::string>& args, bool with_err = false) {
  std::string cmd = quote(LOGEX_CLI);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += with_err ? " 2>&1" : " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = ::pclose(pipe);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& content) {
  auto p = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("solve prints one rule and formula per line") {
    auto r = cli({"solve", "--to", "dnf", "~(q -> r) \\/ q \\/ r"});
    CHECK(r.rc == 0);
    CHECK(r.out ==
          "implication-def\t~(~q \\/ r) \\/ q \\/ r\n"
          "demorgan-or\t(~~q /\\ ~r) \\/ q \\/ r\n"
          "double-negation\t(q /\\ ~r) \\/ q \\/ r\n"
          "absorption-or\tq \\/ r\n"
          "# 4 steps\n");
    auto trivial = cli({"solve", "--to", "cnf", "p"});
    CHECK(trivial.rc == 0);
    CHECK(trivial.out == "# 0 steps\n");
  }

  TEST_CASE("prove prints both directions") {
    auto r = cli({"prove", "p -> q", "~q -> ~p"});
    CHECK(r.rc == 0);
    CHECK(r.out.find("forward\timplication-def") != std::string::npos);
    CHECK(r.out.find("backward\t") != std::string::npos);
    auto bad = cli({"prove", "p", "q"}, true);
    CHECK(bad.rc == 3);
    CHECK(bad.out.find("not equivalent") != std::string::npos);
  }

  TEST_CASE("check reports the DeMorgan slip") {
    auto r = cli({"check", "--before", "~(p\\/q)\\/(~~p/\\~q)\\/~q", "--after", "(~p\\/~q)\\/(~~p/\\~q)\\/~q"});
    CHECK(r.rc == 0);
    auto j = Json::parse(r.out);
    CHECK(j["kind"] == "buggy");
    CHECK(j["message"].get<std::string>().find("disjunction is transformed into a conjunction") !=
          std::string::npos);
  }

  TEST_CASE("exit codes") {
    CHECK(cli({}).rc == 1);
    CHECK(cli({"solve", "--to", "dnf"}).rc == 1);
    CHECK(cli({"check", "--before", "p"}).rc == 1);
    CHECK(cli({"solve", "--to", "nnf", "p"}).rc == 1);
    CHECK(cli({"solve", "--to", "dnf", "p /\\"}).rc == 2);
    CHECK(cli({"check", "--before", "(p", "--after", "p"}).rc == 2);
    CHECK(cli({"prove", "p", "q"}).rc == 3);
    CHECK(cli({"analyze", "/nonexistent/log", "--metric", "time"}).rc == 4);
    auto garbage = temp_file("logex_cli_garbage.log", "{\"ts\": 1}\n");
    CHECK(cli({"analyze", garbage, "--metric", "errors"}).rc == 4);
    auto bad_bank = temp_file("logex_cli_bank.jsonl",
                              R"({"id":"d1","kind":"dnf","difficulty":"easy","ordinal":1,"formula":"p"})"
                              "\n");
    CHECK(cli({"exercises", "validate", bad_bank}).rc == 3);
    auto unparsable = temp_file("logex_cli_unparsable.jsonl", "{nope\n");
    CHECK(cli({"exercises", "validate", unparsable}).rc == 2);
    CHECK(cli({"exercises", "validate", kBankPath}).rc == 0);
    std::remove(garbage.c_str());
    std::remove(bad_bank.c_str());
    std::remove(unparsable.c_str());
  }

  TEST_CASE("analyze reproduces the fixture metrics") {
    auto eff = cli({"analyze", kFixture, "--metric", "efficiency", "--csv"});
    CHECK(eff.rc == 0);
    CHECK(eff.out ==
          "session,student,exercise,kind,accepted,worked_length,efficiency\n"
          "s1,alice,dnf-1,dnf,3,3,1\n"
          "s2,bob,dnf-1,dnf,4,4,1\n"
          "s3,carol,dnf-1,dnf,6,4,1.5\n"
          "s4,dave,dnf-1,dnf,2,,\n");
    auto err = cli({"analyze", kFixture, "--metric", "errors", "--csv"});
    CHECK(err.out.find("s2,bob,dnf-1,dnf,2,4,0.5\n") != std::string::npos);
    auto time = cli({"analyze", kFixture, "--metric", "time", "--csv"});
    CHECK(time.out.find("s1,alice,dnf-1,dnf,3,2,no\n") != std::string::npos);
    CHECK(time.out.find("s4,dave,dnf-1,dnf,2,3,yes\n") != std::string::npos);
    auto comp = cli({"analyze", kFixture, "--metric", "completion", "--csv"});
    CHECK(comp.out.find("s4,dave,dnf,0.5,0\n") != std::string::npos);
  }

  TEST_CASE("analyze output is byte-stable") {
    for (const char* metric : {"errors", "time", "efficiency", "completion"}) {
      auto a = cli({"analyze", kFixture, "--metric", metric});
      auto b = cli({"analyze", kFixture, "--metric", metric});
      CHECK(a.rc == 0);
      CHECK(a.out == b.out);
    }
  }

  TEST_CASE("cli and service give identical diagnoses") {
    ApiConfig c;
    c.advisories = false;
    Service svc(c, ExerciseBank::load(kBankPath));
    struct Case {
      std::string exercise, after, rule;
    };
    const std::vector<Case> cases = {
        {"dnf-1", "~(~q \\/ r) \\/ q \\/ r", ""},
        {"dnf-1", "~(~q \\/ r) \\/ q \\/ r", "demorgan-or"},
        {"dnf-1", "(q /\\ ~r) \\/ q \\/ r", ""},
        {"dnf-1", "q", ""},
        {"dnf-1", "~(q -> r \\/ q", ""},
        {"dnf-1", "(~(q -> r) \\/ q) \\/ r", ""},
        {"proof-1", "", "double-negation"},
    };
    for (auto cs : cases) {
      const Exercise& e = *svc.bank().find(cs.exercise);
      if (cs.after.empty()) cs.after = "~~(" + print(e.start) + ")";
      std::vector<std::string> args{"check", "--before", print(e.start), "--after", cs.after};
      if (!cs.rule.empty()) args.insert(args.end(), {"--rule", cs.rule});
      if (c.mode_for(e.kind) == Mode::Strict) args.push_back("--strict");
      auto r = cli(args);
      INFO(cs.exercise << " " << cs.after);
      REQUIRE(r.rc == 0);
      auto session = svc.handle("POST", "/session", "{}").body["session"].get<std::string>();
      Json body{{"formulaText", cs.after}};
      if (!cs.rule.empty()) body["ruleId"] = cs.rule;
      auto resp = svc.handle("POST", "/session/" + session + "/exercise/" + cs.exercise + "/step", body.dump());
      CHECK(Json::parse(r.out) == resp.body["diagnosis"]);
    }
  }

  TEST_CASE("the daemon serves the API over HTTP") {
    const int port = 20000 + static_cast<int>(::getpid() % 20000);
    auto log = (std::filesystem::temp_directory_path() / "logexd_test.log").string();
    std::remove(log.c_str());
    std::string addr = "LOGEX_ADDR=127.0.0.1:" + std::to_string(port);
    std::string log_env = "LOGEX_LOG=" + log;
    std::vector<std::string> env_strings{addr, log_env, "LOGEX_EXERCISES=" + kBankPath};
    for (char** e = environ; *e; ++e) {
      std::string v = *e;
      if (!v.starts_with("LOGEX_")) env_strings.push_back(v);
    }
    std::vector<char*> envp;
    for (auto& s : env_strings) envp.push_back(s.data());
    envp.push_back(nullptr);
    std::string exe = LOGEX_DAEMON;
    char* argv[] = {exe.data(), nullptr};
    pid_t pid = 0;
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, 2, "/dev/null", O_WRONLY, 0);
    REQUIRE(posix_spawn(&pid, exe.c_str(), &actions, nullptr, argv, envp.data()) == 0);
    posix_spawn_file_actions_destroy(&actions);

    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(1);
    httplib::Result created;
    for (int i = 0; i < 100 && !created; ++i) {
      created = client.Post("/session", R"({"student":"http"})", "application/json");
      if (!created) std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    REQUIRE(created);
    CHECK(created->status == 201);
    auto session = Json::parse(created->body)["session"].get<std::string>();
    auto step = client.Post("/session/" + session + "/exercise/dnf-1/step",
                            R"({"formulaText":"~(~q \\/ r) \\/ q \\/ r"})", "application/json");
    REQUIRE(step);
    CHECK(step->status == 200);
    CHECK(Json::parse(step->body)["diagnosis"]["kind"] == "correct");
    CHECK(step->get_header_value("Access-Control-Allow-Origin") == "*");
    auto missing = client.Get("/session/zz/metrics");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    ::kill(pid, SIGTERM);
    int status = 0;
    ::waitpid(pid, &status, 0);
    auto events = read_log_file(log);
    CHECK(events.size() == 4);  // created, started, submitted, diagnosis
    std::remove(log.c_str());
  }
}
