#pragma once

#include <stdexcept>
#include <string>

namespace singconv {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Expression text failed to parse. `position` is a 0-based character offset.
class ParseError : public Error {
  public:
    ParseError(const std::string& msg, std::size_t position)
        : Error(msg + " (at position " + std::to_string(position) + ")"),
          position(position) {}
    std::size_t position;
};

// Expression evaluation failed (division by zero, unknown variable, domain
// error). The message carries the variable bindings in effect.
class EvalError : public Error {
  public:
    using Error::Error;
};

// Integrand returned a non-finite value. Carries the offending point.
class QuadratureError : public Error {
  public:
    QuadratureError(const std::string& msg, double t, double s)
        : Error(msg), t(t), s(s) {}
    double t;
    double s;
};

// Malformed experiment configuration.
class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace singconv
