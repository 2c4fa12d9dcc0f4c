#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace htqd {

enum class Code {
  // surface validation
  NonClosedFace,
  NonConvexCorner,
  ZeroVector,
  BadTwinVector,
  PoleNotPunctured,
  Disconnected,
  TypeConditionViolated,
  MalformedComplex,
  // covering validation / construction
  NotEquivariant,
  VectorMismatch,
  SignInconsistency,
  LocalDegreeViolation,
  DegreeMismatch,
  StructureMismatch,
  TargetMismatch,
  SourceMismatch,
  // partitions / quotients
  StatusClash,
  IterationLimitExceeded,
  // refinement scripts
  DegenerateSplit,
  ChordIsExistingEdge,
  PointNotInterior,
  // linear action
  NonPositiveDeterminant,
  // affine automorphisms
  DerivativeMismatch,
  StatusBroken,
  NotSymmetricUnderPowers,
  // documents
  SchemaError,
  RationalParseError,
  // everything that indicates a bug rather than bad input
  InternalError,
};

const char* code_name(Code c);

struct Issue {
  Code code;
  std::string message;
  std::vector<long long> ids;  // offending flag / vertex representative ids
  bool warning = false;
};

std::string issue_str(const Issue& issue);

class Error : public std::runtime_error {
 public:
  Error(Code code, std::string message, std::vector<long long> ids = {})
      : std::runtime_error(std::string(code_name(code)) + ": " + message),
        code_(code),
        ids_(std::move(ids)) {}

  Code code() const { return code_; }
  const std::vector<long long>& ids() const { return ids_; }

 private:
  Code code_;
  std::vector<long long> ids_;
};

}  // namespace htqd
