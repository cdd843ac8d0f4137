#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace topcap {

// Every failure raised by the library derives from Error so callers can
// separate input problems from programming errors (std::logic_error).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// WAV ingestion
class MalformedWav : public Error {
 public:
  using Error::Error;
};

class UnsupportedEncoding : public Error {
 public:
  using Error::Error;
};

// TextGrid ingestion
class TextGridSyntaxError : public Error {
 public:
  TextGridSyntaxError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class MissingTiers : public Error {
 public:
  using Error::Error;
};

// Signal analysis
class DegenerateSeries : public Error {
 public:
  using Error::Error;
};

class NoPeriod : public Error {
 public:
  using Error::Error;
};

class SeriesTooShort : public Error {
 public:
  using Error::Error;
};

class WindowExceedsSeries : public Error {
 public:
  using Error::Error;
};

// Persistence
class EmptyInput : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

// Learning
class InsufficientData : public Error {
 public:
  using Error::Error;
};

}  // namespace topcap
