#ifndef KLJN_ERRORS_HPP_
#define KLJN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace kljn {

/// Precondition or argument-domain violation.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A statistic could not be formed from the data (e.g. zero variance).
class estimation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A consumable ran out (e.g. one-time-pad key bits).
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or inconsistent run configuration.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kljn

#endif  // KLJN_ERRORS_HPP_
