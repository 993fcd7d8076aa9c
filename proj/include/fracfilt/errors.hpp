#pragma once

#include <stdexcept>
#include <string>

namespace fracfilt {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Requested a configuration the library does not implement.
class FeatureError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Array sizes or grids that do not belong together.
class SizeMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Parameter combination rejected before any computation starts.
class ConfigError : public std::invalid_argument {
public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// An iterative solve or quadrature did not reach its tolerance.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracfilt
