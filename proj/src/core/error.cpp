#include "error.hpp"

namespace kloostlab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain: return "DomainError";
    case ErrorCode::kNotInvertible: return "NotInvertible";
    case ErrorCode::kNotCoprime: return "NotCoprime";
    case ErrorCode::kNotSquarefree: return "NotSquarefree";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kIo: return "IoError";
  }
  return "UnknownError";
}

}  // namespace kloostlab
