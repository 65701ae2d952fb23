#include "radlap/error.hpp"

namespace radlap {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NonFiniteEvaluation: return "NonFiniteEvaluation";
    case ErrorKind::DivergentExponent: return "DivergentExponent";
    case ErrorKind::DivergentTail: return "DivergentTail";
    case ErrorKind::Pole: return "PoleError";
    case ErrorKind::Singularity: return "SingularityError";
    case ErrorKind::Integrability: return "IntegrabilityError";
    case ErrorKind::MissingDerivative: return "MissingDerivative";
    case ErrorKind::InfiniteDerivative: return "InfiniteDerivative";
    case ErrorKind::Precondition: return "PreconditionError";
    case ErrorKind::Evaluation: return "EvaluationError";
  }
  return "Error";
}

}  // namespace radlap
