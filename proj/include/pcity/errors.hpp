#pragma once

#include <stdexcept>
#include <string>

namespace pcity {

// Base for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Argument lies outside the represented range of a curve.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

// The curve must be extended further toward s = 0 before the query can be answered.
class NeedsExtension : public Error {
 public:
  using Error::Error;
};

// An adaptive extension loop hit its step cap or produced a non-finite state.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class NoEnvelope : public Error {
 public:
  using Error::Error;
};

}  // namespace pcity
