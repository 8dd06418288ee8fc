#pragma once

#include <stdexcept>
#include <string>

namespace nemem {

/// Malformed or out-of-contract arguments (negative stretches, non-unit
/// directors, violated laminate constraints).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// The in-plane deformation gradient has rank < 2 where full rank is required.
class RankDeficient : public std::domain_error {
 public:
  explicit RankDeficient(const std::string& what) : std::domain_error(what) {}
};

/// Evaluation requested outside the set on which the quantity is defined
/// (e.g. stress at equal singular values).
class OutOfDomain : public std::domain_error {
 public:
  explicit OutOfDomain(const std::string& what) : std::domain_error(what) {}
};

}  // namespace nemem
