#pragma once

#include <stdexcept>
#include <string>

namespace vdw {

// Every failure surfaced by the library derives from Error so callers (the CLI
// in particular) can catch one type and print what().
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class RetriesExhausted : public Error {
 public:
  using Error::Error;
};

class InconsistentInstance : public Error {
 public:
  using Error::Error;
};

class BoxTooLarge : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

class NotNormalizable : public Error {
 public:
  using Error::Error;
};

class NotInLattice : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class CertificateError : public Error {
 public:
  using Error::Error;
};

}  // namespace vdw
