#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace copro {

enum class ErrorKind {
  DanglingReference,
  DuplicateId,
  TaxonomyMiss,
  InvalidAffiliation,
  InvalidRecord,
  UnknownField,
  AcademicNotOnPublication,
  NotProductive,
  EmptyField,
  EmptyInput,
  TooFewGroups,
  LengthMismatch,
  ConstantInput,
  DomainError,
  BadConfig,
  UnreadableStream,
  UsageError,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-checkable kind next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace copro
