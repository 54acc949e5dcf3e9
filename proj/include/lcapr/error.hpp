#pragma once

#include <stdexcept>
#include <string>

namespace lcapr {

// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration text could not be parsed or validated.
class ParseError : public Error {
 public:
  ParseError(std::string field, int line, const std::string& what)
      : Error(format(field, line, what)), field_(std::move(field)), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& field, int line, const std::string& what) {
    std::string s = "config";
    if (line > 0) s += ":" + std::to_string(line);
    if (!field.empty()) s += " [" + field + "]";
    return s + ": " + what;
  }

  std::string field_;
  int line_;
};

// Pipeline stages of the phase retrieval, in execution order.
enum class Stage { setup, forward, autocorrelation, relations, assemble };

inline const char* stage_name(Stage s) {
  switch (s) {
    case Stage::setup: return "setup";
    case Stage::forward: return "forward";
    case Stage::autocorrelation: return "autocorrelation";
    case Stage::relations: return "relations";
    case Stage::assemble: return "assemble";
  }
  return "unknown";
}

// Stage-1 is the autocorrelation interpolation, stage-2 the C(g,s) solves,
// stage-3 the rank-one assembly.
inline int stage_number(Stage s) {
  switch (s) {
    case Stage::autocorrelation: return 1;
    case Stage::relations: return 2;
    case Stage::assemble: return 3;
    default: return 0;
  }
}

class RetrievalError : public Error {
 public:
  RetrievalError(Stage stage, const std::string& what)
      : Error(std::string(stage_name(stage)) + ": " + what), stage_(stage) {}

  Stage stage() const noexcept { return stage_; }

 private:
  Stage stage_;
};

}  // namespace lcapr
