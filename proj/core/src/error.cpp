#include "copro/error.hpp"

namespace copro {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::TaxonomyMiss: return "TaxonomyMiss";
    case ErrorKind::InvalidAffiliation: return "InvalidAffiliation";
    case ErrorKind::InvalidRecord: return "InvalidRecord";
    case ErrorKind::UnknownField: return "UnknownField";
    case ErrorKind::AcademicNotOnPublication: return "AcademicNotOnPublication";
    case ErrorKind::NotProductive: return "NotProductive";
    case ErrorKind::EmptyField: return "EmptyField";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::TooFewGroups: return "TooFewGroups";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ConstantInput: return "ConstantInput";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::BadConfig: return "BadConfig";
    case ErrorKind::UnreadableStream: return "UnreadableStream";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace copro
