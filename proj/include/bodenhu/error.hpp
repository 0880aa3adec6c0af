#pragma once

#include <stdexcept>
#include <string>

namespace bodenhu {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands disagree on the number of weights N.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A value violates the documented invariant of a type or precondition of an operation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input (rationals, weight vectors).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An enumeration was requested for N above the configured cap.
class CapExceeded : public Error {
 public:
  CapExceeded(int n, int cap)
      : Error("N = " + std::to_string(n) + " exceeds enumeration cap " + std::to_string(cap)),
        n_(n),
        cap_(cap) {}

  int n() const noexcept { return n_; }
  int cap() const noexcept { return cap_; }

 private:
  int n_;
  int cap_;
};

/// A weight vector that must be generic lies on a wall.
class NotGeneric : public Error {
 public:
  using Error::Error;
};

/// (N, s) lies outside the range a construction covers.
class OutsideCoveredRange : public Error {
 public:
  using Error::Error;
};

inline constexpr int kDefaultCap = 14;

inline void require_within_cap(int n, int cap) {
  if (n > cap) throw CapExceeded(n, cap);
}

}  // namespace bodenhu
