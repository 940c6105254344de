#pragma once

#include <stdexcept>
#include <string>

namespace umt {

// Base of every error raised by the library. The CLI maps subclasses onto
// exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourcePos {
  int line = 0;
  int column = 0;
};

// Syntax errors in metamodel, model, spec and expression text.
class ParseError : public Error {
 public:
  ParseError(SourcePos pos, const std::string& message)
      : Error("line " + std::to_string(pos.line) + ", column " +
              std::to_string(pos.column) + ": " + message),
        pos_(pos) {}

  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

// Structural violations against a metamodel (unknown entity, abstract
// instantiation, type mismatch, duplicate key, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

// Name resolution, type checking or classification failures while loading a
// transformation spec.
class SpecError : public Error {
 public:
  using Error::Error;
};

// Failures during expression evaluation or constructive execution.
class EvalError : public Error {
 public:
  using Error::Error;
};

// Entity-order cycles and other planning failures.
class PlanError : public Error {
 public:
  using Error::Error;
};

}  // namespace umt
