#pragma once

#include <stdexcept>
#include <string>

namespace sobolcap {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands disagree on the number of criteria or alternatives.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A value lies outside the domain an operation accepts (e.g. v_ij not in [0,1]).
class DomainError : public Error {
public:
  using Error::Error;
};

class ArgumentError : public Error {
public:
  using Error::Error;
};

/// Data-generation spec is inconsistent (bad bounds, non-PD correlation).
class SpecError : public Error {
public:
  using Error::Error;
};

/// Identification configuration admits no feasible capacity.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Estimator or optimizer failure at run time.
class NumericalError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

}  // namespace sobolcap
