#include "logex/exercises.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "logex/semantics.hpp"
#include "logex/syntax.hpp"

namespace logex {

std::string_view to_string(ExerciseKind k) {
  switch (k) {
    case ExerciseKind::ToDnf: return "dnf";
    case ExerciseKind::ToCnf: return "cnf";
    case ExerciseKind::Proof: return "proof";
  }
  return "";
}

std::string_view to_string(Difficulty d) {
  switch (d) {
    case Difficulty::Easy: return "easy";
    case Difficulty::Medium: return "medium";
    case Difficulty::Hard: return "hard";
  }
  return "";
}

std::optional<ExerciseKind> parse_kind(std::string_view text) {
  if (text == "dnf") return ExerciseKind::ToDnf;
  if (text == "cnf") return ExerciseKind::ToCnf;
  if (text == "proof") return ExerciseKind::Proof;
  return std::nullopt;
}

std::optional<Difficulty> parse_difficulty(std::string_view text) {
  if (text == "easy") return Difficulty::Easy;
  if (text == "medium") return Difficulty::Medium;
  if (text == "hard") return Difficulty::Hard;
  return std::nullopt;
}

NormalForm normal_form_of(ExerciseKind k) {
  return k == ExerciseKind::ToCnf ? NormalForm::Cnf : NormalForm::Dnf;
}

Difficulty difficulty_for_length(std::size_t steps) {
  if (steps <= 3) return Difficulty::Easy;
  if (steps <= 7) return Difficulty::Medium;
  return Difficulty::Hard;
}

std::size_t worked_length(const Exercise& e) {
  if (e.kind == ExerciseKind::Proof) return solve_proof(e.start, *e.rhs).step_count();
  return solve_normal_form(e.start, normal_form_of(e.kind)).steps.size();
}

std::string_view to_string(RejectedExercise::Reason r) {
  switch (r) {
    case RejectedExercise::Reason::SyntaxError: return "syntax-error";
    case RejectedExercise::Reason::NotEquivalent: return "non-equivalent";
    case RejectedExercise::Reason::TooManyAtoms: return "too-many-atoms";
    case RejectedExercise::Reason::MissingFormula: return "missing-formula";
  }
  return "";
}

namespace {

std::size_t atom_count(const Formula& a, const std::optional<Formula>& b) {
  auto xs = atoms(a);
  if (b) {
    auto ys = atoms(*b);
    xs.insert(xs.end(), ys.begin(), ys.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  }
  return xs.size();
}

}  // namespace

ExerciseResult create_user_exercise(std::string id, ExerciseKind kind, std::string_view text,
                                    std::optional<std::string_view> rhs_text) {
  using Reason = RejectedExercise::Reason;
  auto first = try_parse(text);
  if (auto* err = std::get_if<SyntaxError>(&first)) {
    return RejectedExercise{Reason::SyntaxError, err->message()};
  }
  Exercise e{std::move(id), kind, Difficulty::Easy, 0, std::get<Formula>(std::move(first)),
             std::nullopt, true};
  if (kind == ExerciseKind::Proof) {
    if (!rhs_text) return RejectedExercise{Reason::MissingFormula, "a proof needs two formulas"};
    auto second = try_parse(*rhs_text);
    if (auto* err = std::get_if<SyntaxError>(&second)) {
      return RejectedExercise{Reason::SyntaxError, err->message()};
    }
    e.rhs = std::get<Formula>(std::move(second));
  }
  if (atom_count(e.start, e.rhs) > kMaxEquivalenceAtoms) {
    return RejectedExercise{Reason::TooManyAtoms,
                            "at most " + std::to_string(kMaxEquivalenceAtoms) + " atoms are supported"};
  }
  if (e.rhs && !equivalent(e.start, *e.rhs)) {
    std::string msg = "the two formulas are not equivalent";
    if (auto cex = counterexample(e.start, *e.rhs)) {
      std::string w;
      for (const auto& [atom, value] : *cex) {
        if (!w.empty()) w += ", ";
        w += atom + " = " + (value ? "T" : "F");
      }
      msg += " (they differ when " + w + ")";
    }
    return RejectedExercise{Reason::NotEquivalent, msg};
  }
  e.difficulty = difficulty_for_length(worked_length(e));
  return e;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExerciseBank ExerciseBank::parse(std::string_view text) {
  ExerciseBank bank;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ExerciseFileError(lineno, std::string("invalid JSON: ") + e.what());
    }
    auto field = [&](const char* name) -> std::string {
      if (!j.contains(name) || !j[name].is_string()) {
        throw ExerciseFileError(lineno, std::string("missing string field '") + name + "'");
      }
      return j[name].get<std::string>();
    };
    auto formula = [&](const char* name) {
      auto r = try_parse(field(name));
      if (auto* err = std::get_if<SyntaxError>(&r)) {
        throw ExerciseFileError(lineno, std::string(name) + ": " + err->message());
      }
      return std::get<Formula>(std::move(r));
    };
    auto kind = parse_kind(field("kind"));
    if (!kind) throw ExerciseFileError(lineno, "unknown kind '" + field("kind") + "'");
    auto difficulty = parse_difficulty(field("difficulty"));
    if (!difficulty) throw ExerciseFileError(lineno, "unknown difficulty '" + field("difficulty") + "'");
    if (!j.contains("ordinal") || !j["ordinal"].is_number_integer()) {
      throw ExerciseFileError(lineno, "missing integer field 'ordinal'");
    }
    Exercise e{field("id"), *kind, *difficulty, j["ordinal"].get<int>(),
               *kind == ExerciseKind::Proof ? formula("lhs") : formula("formula"), std::nullopt,
               false};
    if (*kind == ExerciseKind::Proof) e.rhs = formula("rhs");
    bank.exercises_.push_back(std::move(e));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
  bank.hash_ = buf;
  return bank;
}

ExerciseBank ExerciseBank::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open exercise file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::vector<Exercise> ExerciseBank::fixed_set(ExerciseKind kind) const {
  std::vector<Exercise> out;
  std::copy_if(exercises_.begin(), exercises_.end(), std::back_inserter(out),
               [&](const Exercise& e) { return e.kind == kind; });
  std::stable_sort(out.begin(), out.end(),
                   [](const Exercise& a, const Exercise& b) { return a.ordinal < b.ordinal; });
  return out;
}

const Exercise* ExerciseBank::find(std::string_view id) const {
  auto it = std::find_if(exercises_.begin(), exercises_.end(),
                         [&](const Exercise& e) { return e.id == id; });
  return it == exercises_.end() ? nullptr : &*it;
}

std::vector<std::string> validate(const ExerciseBank& bank) {
  std::vector<std::string> problems;
  std::set<std::string> ids;
  for (const auto& e : bank.all()) {
    if (!ids.insert(e.id).second) problems.push_back(e.id + ": duplicate id");
  }
  for (auto kind : {ExerciseKind::ToDnf, ExerciseKind::ToCnf, ExerciseKind::Proof}) {
    auto set = bank.fixed_set(kind);
    if (set.size() != 5) {
      problems.push_back(std::string(to_string(kind)) + ": expected 5 exercises, found " +
                         std::to_string(set.size()));
    }
    for (std::size_t i = 1; i < set.size(); ++i) {
      if (set[i].ordinal == set[i - 1].ordinal) {
        problems.push_back(set[i].id + ": ordinal " + std::to_string(set[i].ordinal) + " is not unique");
      }
    }
  }
  for (const auto& e : bank.all()) {
    try {
      if (atom_count(e.start, e.rhs) > kMaxEquivalenceAtoms) {
        problems.push_back(e.id + ": too many atoms");
        continue;
      }
      if (e.kind == ExerciseKind::Proof && !equivalent(e.start, *e.rhs)) {
        problems.push_back(e.id + ": lhs and rhs are not equivalent");
        continue;
      }
      std::size_t n = worked_length(e);
      if (n > kMaxFixedSolutionLength) {
        problems.push_back(e.id + ": worked solution has " + std::to_string(n) + " steps");
      }
      if (difficulty_for_length(n) != e.difficulty) {
        problems.push_back(e.id + ": labelled " + std::string(to_string(e.difficulty)) +
                           " but the worked solution has " + std::to_string(n) + " steps");
      }
    } catch (const std::exception& ex) {
      problems.push_back(e.id + ": " + ex.what());
    }
  }
  return problems;
}

}  // namespace logex
