#pragma once

#include <stdexcept>
#include <string>

namespace seqdec {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {
  using Error::Error;
};

// Bracketed root search found f(lo) and f(hi) of the same sign.
struct NoSignChange : Error {
  using Error::Error;
};

// The lambda equation has no root inside [0, sqrt(2 gamma)).
struct NoRoot : Error {
  using Error::Error;
};

struct LengthMismatch : Error {
  using Error::Error;
};

struct TapLengthError : Error {
  using Error::Error;
};

struct SizeError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace seqdec
