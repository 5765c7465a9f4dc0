#pragma once

#include <stdexcept>
#include <string>

namespace hdeuler {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A target or particle sits on (or too close to) the symmetry axis r = 0.
class AxisError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Adaptive quadrature (or table validation) failed to reach its tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : Error(what + " (achieved relative error " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Invalid run configuration; carries the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A file could not be read or written, or does not match its schema.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hdeuler
