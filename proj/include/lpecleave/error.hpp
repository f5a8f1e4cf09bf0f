// Copyright (c) lpecleave contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpecleave {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class SortError : public Error {
  public:
    using Error::Error;
};

class UnboundVariable : public Error {
  public:
    explicit UnboundVariable(const std::string& name)
        : Error("unbound variable '" + name + "'"), name_(name) {}
    const std::string& name() const { return name_; }

  private:
    std::string name_;
};

class IndexOutOfRange : public Error {
  public:
    using Error::Error;
};

/// A position in a source text, 1-based.
struct SourceLocation {
    std::size_t line = 1;
    std::size_t column = 1;
};

class ParseError : public Error {
  public:
    ParseError(SourceLocation loc, const std::string& message)
        : Error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message), loc_(loc) {}
    SourceLocation location() const { return loc_; }

  private:
    SourceLocation loc_;
};

class NameResolutionError : public ParseError {
  public:
    using ParseError::ParseError;
};

class SpecSortError : public ParseError {
  public:
    using ParseError::ParseError;
};

class MalformedAut : public Error {
  public:
    MalformedAut(std::size_t line, const std::string& message)
        : Error("aut line " + std::to_string(line) + ": " + message), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

class PartitionInvalid : public Error {
  public:
    using Error::Error;
};

class FreshNameCollision : public Error {
  public:
    using Error::Error;
};

class InvariantViolatedAtInit : public Error {
  public:
    using Error::Error;
};

class ValidationError : public Error {
  public:
    using Error::Error;
};

} // namespace lpecleave
