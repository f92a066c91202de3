#pragma once

#include <stdexcept>
#include <string>

namespace wpn {

// Parse failure in any of the text formats; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  explicit ParseError(const std::string& what)
      : std::runtime_error(what), line_(0) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Non-finite value produced by an iteration; names where it happened.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

}  // namespace wpn
