#include "htqd/errors.hpp"

#include <sstream>

namespace htqd {

const char* code_name(Code c) {
  switch (c) {
    case Code::NonClosedFace: return "NonClosedFace";
    case Code::NonConvexCorner: return "NonConvexCorner";
    case Code::ZeroVector: return "ZeroVector";
    case Code::BadTwinVector: return "BadTwinVector";
    case Code::PoleNotPunctured: return "PoleNotPunctured";
    case Code::Disconnected: return "Disconnected";
    case Code::TypeConditionViolated: return "TypeConditionViolated";
    case Code::MalformedComplex: return "MalformedComplex";
    case Code::NotEquivariant: return "NotEquivariant";
    case Code::VectorMismatch: return "VectorMismatch";
    case Code::SignInconsistency: return "SignInconsistency";
    case Code::LocalDegreeViolation: return "LocalDegreeViolation";
    case Code::DegreeMismatch: return "DegreeMismatch";
    case Code::StructureMismatch: return "StructureMismatch";
    case Code::TargetMismatch: return "TargetMismatch";
    case Code::SourceMismatch: return "SourceMismatch";
    case Code::StatusClash: return "StatusClash";
    case Code::IterationLimitExceeded: return "IterationLimitExceeded";
    case Code::DegenerateSplit: return "DegenerateSplit";
    case Code::ChordIsExistingEdge: return "ChordIsExistingEdge";
    case Code::PointNotInterior: return "PointNotInterior";
    case Code::NonPositiveDeterminant: return "NonPositiveDeterminant";
    case Code::DerivativeMismatch: return "DerivativeMismatch";
    case Code::StatusBroken: return "StatusBroken";
    case Code::NotSymmetricUnderPowers: return "NotSymmetricUnderPowers";
    case Code::SchemaError: return "SchemaError";
    case Code::RationalParseError: return "RationalParseError";
    case Code::InternalError: return "InternalError";
  }
  return "UnknownCode";
}

std::string issue_str(const Issue& issue) {
  std::ostringstream out;
  out << (issue.warning ? "warning " : "error ") << code_name(issue.code) << ": " << issue.message;
  if (!issue.ids.empty()) {
    out << " [ids:";
    for (long long id : issue.ids) out << " " << id;
    out << "]";
  }
  return out.str();
}

}  // namespace htqd
