#include "errors.hpp"

namespace idob {

const char* error_code_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::IntegrationBlowup: return "integration-blowup";
    case ErrorCode::InfeasibleThrust: return "infeasible-thrust";
    case ErrorCode::DegenerateDenominator: return "degenerate-denominator";
    case ErrorCode::InvalidCutoff: return "invalid-cutoff";
    case ErrorCode::EstimatorFault: return "estimator-fault";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::NumericalFailure: return "numerical-failure";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::SynthesisFailure: return "synthesis-failure";
    case ErrorCode::Instability: return "instability";
    case ErrorCode::ShapeMismatch: return "shape-mismatch";
    case ErrorCode::TrainingFailure: return "training-failure";
    case ErrorCode::Io: return "io";
    case ErrorCode::Config: return "config";
    }
    return "unknown";
}

}  // namespace idob
