#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "paraconvex/point.hpp"

namespace paraconvex {

enum class ErrorKind {
  invalid_argument,
  dimension_mismatch,
  empty_intersection,
  non_convergence,
  precondition_failed,
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. `witness` carries the offending point
/// when there is one (the iterate whose ball went empty, the probe where a
/// precondition broke).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<Point> witness = std::nullopt)
      : std::runtime_error(what), kind_(kind), witness_(witness) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<Point>& witness() const noexcept { return witness_; }

 private:
  ErrorKind kind_;
  std::optional<Point> witness_;
};

}  // namespace paraconvex
