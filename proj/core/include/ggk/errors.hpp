#pragma once

#include <stdexcept>
#include <string>

namespace ggk {

// Failure codes for structured error handling.  Every throwing operation in
// the library raises Error with one of these codes and a message naming the
// offending data (witness triple, element index, relation, ...).
enum class ErrorCode {
  // finite group layer
  BadTable,
  NotAssociative,
  NoIdentity,
  NoInverse,
  ElementOutOfRange,
  NotBijective,
  NotHomomorphism,
  NotSubgroup,
  NotNormal,
  OrderBoundExceeded,
  NotAutomorphism,

  // virtually cyclic layer
  BadVariant,
  RelationViolated,
  NotZorDinfty,
  NotInjective,
  PreimageNotFinite,
  NotWellDefined,

  // graph / gog layer
  GraphInvariantViolated,
  Disconnected,
  UnknownVertex,
  UnknownEdge,
  MonoNotInjective,
  EdgeGroupNotFinite,
  EdgeGroupFinite,
  VertexGroupFinite,
  VertexNotZorDinfty,

  // pi1 / tree layer
  TokenTypeMismatch,
  EdgeCosetEnumerationCapExceeded,
  NotMember,
  ProjectionMismatch,

  // constructions / certificates
  InducedMapNotInjective,
  KernelClassMismatch,
  ClaimViolated,
  GroupFinite,
  NotNormalCyclic,
  RuleShapeMismatch,
  SideConditionFailed,
  HashMismatch,
  CycleDetected,
  UnknownRule,

  // io
  SchemaError,
  ParseError,

  Internal,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

// Internal invariant check.  These fire only on library bugs, never on bad
// user input.
inline void require_internal(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::Internal, what);
}

}  // namespace ggk
