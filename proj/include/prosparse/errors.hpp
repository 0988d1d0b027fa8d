#pragma once

#include <stdexcept>
#include <string>

namespace prosparse {

// Error taxonomy shared by the library and the CLI. Every failure that a
// caller can provoke through arguments maps to one of these; internal logic
// errors stay as assertions.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidDimensionError : public Error {
public:
  using Error::Error;
};

class InvalidSupportError : public Error {
public:
  using Error::Error;
};

class InvalidSparsityError : public Error {
public:
  using Error::Error;
};

class InvalidWindowError : public Error {
public:
  using Error::Error;
};

class InvalidInputError : public Error {
public:
  using Error::Error;
};

class InvalidParameterError : public Error {
public:
  using Error::Error;
};

// Circular max gap is undefined for an empty support.
class UndefinedCircularError : public Error {
public:
  using Error::Error;
};

class ResourceError : public Error {
public:
  using Error::Error;
};

}  // namespace prosparse
