#pragma once

#include <stdexcept>
#include <string>

namespace jpf {

// Every failure surfaced by the library carries one of these classes so the
// CLI can print a single machine-parsable line.
enum class ErrorKind {
  BadFasta,
  WrongRecordCount,
  BadAlphabet,
  ParseError,
  MissingFile,
  InvalidGap,
  CapacityExceeded,
  NumericalUnderflow,
  LimitExceeded,
  InvalidArgument,
  IoError,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace jpf
