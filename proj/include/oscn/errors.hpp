#pragma once

#include <stdexcept>
#include <string>

namespace oscn {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedLanguage : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Signatures (or a query and a database) were built with different hash families.
class SignatureMismatch : public Error {
 public:
  using Error::Error;
};

class DuplicateComponent : public Error {
 public:
  using Error::Error;
};

class IngestError : public Error {
 public:
  using Error::Error;
};

/// Not a database file, or a database version this build cannot read.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Truncated or corrupted database file.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace oscn
