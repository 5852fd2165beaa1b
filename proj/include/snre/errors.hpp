// Copyright 2026 The snr_enhance Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SNRE_ERRORS_HPP
#define SNRE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace snre {

// Base for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration (bad frame geometry, dims, flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input values outside an operation's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Mismatched vector/matrix geometry.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// An operation that needs data received none.
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Input is formally valid but unusable (silent speech, zero-energy noise).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// File system / stream failures.
class IoError : public Error {
 public:
  using Error::Error;
};

// A file exists but its contents are not what they claim to be.
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

// Model file failed validation (magic, version, truncation).
class CorruptModelError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Corpus manifest or referenced audio cannot supply a mixture.
class CorpusError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss.
class TrainingDivergedError : public Error {
 public:
  TrainingDivergedError(const std::string& what, int epoch)
      : Error(what), epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

}  // namespace snre

#endif  // SNRE_ERRORS_HPP
