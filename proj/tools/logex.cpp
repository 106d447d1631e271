// logex: batch interface to the tutoring engine.
#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>

#include "logex/exercises.hpp"
#include "logex/json_io.hpp"
#include "logex/recognizer.hpp"
#include "logex/semantics.hpp"
#include "logex/session.hpp"
#include "logex/strategy.hpp"
#include "logex/syntax.hpp"

using namespace logex;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kSemantic = 3, kMalformedLog = 4 };

struct Failure {
  int code;
  std::string message;
};

Formula parse_arg(const std::string& text, const char* what) {
  auto r = try_parse(text);
  if (auto* err = std::get_if<SyntaxError>(&r)) {
    throw Failure{kParse, std::string(what) + ": " + err->message()};
  }
  return std::get<Formula>(std::move(r));
}

std::string steps_text(std::size_t n) { return std::to_string(n) + (n == 1 ? " step" : " steps"); }

std::string number(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

std::string number(const std::optional<double>& v) { return v ? number(*v) : ""; }

// Rows are printed as CSV or as a space-aligned table.
void print_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                 bool csv) {
  if (csv) {
    auto line = [](const std::vector<std::string>& cells) {
      std::string out;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        const auto& c = cells[i];
        if (c.find_first_of(",\"\n") != std::string::npos) {
          std::string q = "\"";
          for (char ch : c) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
          out += q + "\"";
        } else {
          out += c;
        }
      }
      return out;
    };
    std::cout << line(header) << '\n';
    for (const auto& r : rows) std::cout << line(r) << '\n';
    return;
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], std::max<std::size_t>(r[i].size(), 1));
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      std::string c = cells[i].empty() ? "-" : cells[i];
      if (i + 1 < cells.size()) c.resize(width[i] + 2, ' ');
      out += c;
    }
    return out;
  };
  std::cout << line(header) << '\n';
  for (const auto& r : rows) std::cout << line(r) << '\n';
}

int cmd_solve(const std::string& target, const std::string& text) {
  Formula f = parse_arg(text, "formula");
  auto state = solve_normal_form(f, target == "cnf" ? NormalForm::Cnf : NormalForm::Dnf);
  for (const auto& s : state.steps) std::cout << s.rule_id << '\t' << print(s.after) << '\n';
  std::cout << "# " << steps_text(state.steps.size()) << '\n';
  return kOk;
}

int cmd_prove(const std::string& a, const std::string& b) {
  Formula lhs = parse_arg(a, "first formula");
  Formula rhs = parse_arg(b, "second formula");
  if (auto cex = counterexample(lhs, rhs)) {
    std::string w;
    for (const auto& [atom, value] : *cex) w += (w.empty() ? "" : ", ") + atom + " = " + (value ? "T" : "F");
    throw Failure{kSemantic, "the formulas are not equivalent (they differ when " + w + ")"};
  }
  auto proof = solve_proof(lhs, rhs);
  for (const auto& s : proof.forward) std::cout << "forward\t" << s.rule_id << '\t' << print(s.after) << '\n';
  for (const auto& s : proof.backward) std::cout << "backward\t" << s.rule_id << '\t' << print(s.after) << '\n';
  std::cout << "# " << steps_text(proof.step_count()) << '\n';
  return kOk;
}

int cmd_check(const std::string& before, const std::string& after, const std::string& rule, bool strict,
              bool no_equivalent_buggy) {
  StepSubmission sub{parse_arg(before, "--before"), after,
                     rule.empty() ? std::nullopt : std::optional<std::string>(rule),
                     strict ? Mode::Strict : Mode::Lenient, ChainDirection::Forward};
  DiagnoseOptions options;
  options.absorption_advisory = false;
  options.equivalent_buggy_feedback = !no_equivalent_buggy;
  std::cout << to_json(diagnose(sub, options)).dump(2) << '\n';
  return kOk;
}

int cmd_validate(const std::string& path) {
  ExerciseBank bank = [&] {
    try {
      return ExerciseBank::load(path);
    } catch (const ExerciseFileError& e) {
      throw Failure{kParse, e.what()};
    } catch (const std::runtime_error& e) {
      throw Failure{kUsage, e.what()};
    }
  }();
  auto problems = validate(bank);
  for (const auto& p : problems) std::cout << p << '\n';
  if (!problems.empty()) return kSemantic;
  std::cout << bank.all().size() << " exercises ok, version " << bank.version() << '\n';
  return kOk;
}

int cmd_analyze(const std::string& path, const std::string& metric, bool csv) {
  std::map<std::string, Session> sessions;
  try {
    sessions = replay(read_log_file(path));
  } catch (const MalformedLog& e) {
    throw Failure{kMalformedLog, e.what()};
  } catch (const SessionError& e) {
    throw Failure{kMalformedLog, e.what()};
  }
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header;
  if (metric == "completion") {
    header = {"session", "student", "set", "completion", "errors"};
    for (const auto& [id, s] : sessions) {
      for (const auto& set : metrics_report(s).sets) {
        rows.push_back({id, s.student, std::string(to_string(set.kind)), number(set.completion),
                        std::to_string(set.errors)});
      }
    }
  } else {
    if (metric == "errors") header = {"session", "student", "exercise", "kind", "rejected", "accepted", "error_fraction"};
    if (metric == "time") header = {"session", "student", "exercise", "kind", "accepted", "minutes_per_step", "partial"};
    if (metric == "efficiency") header = {"session", "student", "exercise", "kind", "accepted", "worked_length", "efficiency"};
    for (const auto& [id, s] : sessions) {
      for (const auto& [ex, p] : s.exercises) {
        std::vector<std::string> row{id, s.student, ex, std::string(to_string(p.exercise.kind))};
        if (metric == "errors") {
          row.push_back(std::to_string(p.rejected_steps));
          row.push_back(std::to_string(p.accepted_steps));
          row.push_back(number(error_fraction(p)));
        } else if (metric == "time") {
          auto t = time_per_correct_step(p);
          row.push_back(std::to_string(p.accepted_steps));
          row.push_back(t ? number(t->minutes) : "");
          row.push_back(t ? (t->partial ? "yes" : "no") : "");
        } else {
          bool done = p.completed_at && p.finished();
          row.push_back(std::to_string(p.accepted_steps));
          row.push_back(done ? std::to_string(worked_length_to_head(p)) : "");
          row.push_back(done ? number(efficiency(p)) : "");
        }
        rows.push_back(std::move(row));
      }
    }
  }
  print_table(header, rows, csv);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Propositional logic rewriting tutor: solve, prove, check steps, analyze logs."};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 ok, 1 usage, 2 parse error, 3 semantic error (non-equivalent or invalid "
      "exercises), 4 malformed log.\n"
      "analyze columns:\n"
      "  errors      session,student,exercise,kind,rejected,accepted,error_fraction\n"
      "  time        session,student,exercise,kind,accepted,minutes_per_step,partial\n"
      "  efficiency  session,student,exercise,kind,accepted,worked_length,efficiency\n"
      "  completion  session,student,set,completion,errors\n"
      "Empty cells are undefined values (printed as - in table mode).");

  std::string target = "dnf", formula;
  auto* solve = app.add_subcommand("solve", "Rewrite a formula to DNF or CNF, one rule per line");
  solve->add_option("--to", target, "Normal form")->check(CLI::IsMember({"dnf", "cnf"}));
  solve->add_option("formula", formula, "Formula")->required();

  std::string lhs, rhs;
  auto* prove = app.add_subcommand("prove", "Prove two formulas equivalent");
  prove->add_option("lhs", lhs, "Left formula")->required();
  prove->add_option("rhs", rhs, "Right formula")->required();

  std::string before, after, rule;
  bool strict = false, no_eq_buggy = false;
  auto* check = app.add_subcommand("check", "Diagnose a single rewriting step");
  check->add_option("--before", before, "Formula before the step")->required();
  check->add_option("--after", after, "Formula after the step")->required();
  check->add_option("--rule", rule, "Claimed rule id");
  check->add_flag("--strict", strict, "Require a correct rule name");
  check->add_flag("--no-equivalent-buggy", no_eq_buggy,
                  "Do not report buggy rules when the result is still equivalent");

  std::string file;
  auto* exercises = app.add_subcommand("exercises", "Exercise file tools");
  exercises->require_subcommand(1);
  auto* validate_cmd = exercises->add_subcommand("validate", "Check an exercise file");
  validate_cmd->add_option("file", file, "JSON-lines exercise file")->required();

  std::string log, metric;
  bool csv = false;
  auto* analyze = app.add_subcommand("analyze", "Compute metrics from an interaction log");
  analyze->add_option("log", log, "Log file")->required();
  analyze->add_option("--metric", metric, "Metric")
      ->required()
      ->check(CLI::IsMember({"errors", "time", "efficiency", "completion"}));
  analyze->add_flag("--csv", csv, "CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*solve) return cmd_solve(target, formula);
    if (*prove) return cmd_prove(lhs, rhs);
    if (*check) return cmd_check(before, after, rule, strict, no_eq_buggy);
    if (*validate_cmd) return cmd_validate(file);
    if (*analyze) return cmd_analyze(log, metric, csv);
  } catch (const Failure& f) {
    std::cerr << "logex: " << f.message << '\n';
    return f.code;
  } catch (const TooManyAtoms& e) {
    std::cerr << "logex: " << e.what() << '\n';
    return kSemantic;
  }
  return kUsage;
}
