#pragma once

#include <stdexcept>
#include <string>

namespace idob {

enum class ErrorCode {
    InvalidInput = 1,
    IntegrationBlowup,
    InfeasibleThrust,
    DegenerateDenominator,
    InvalidCutoff,
    EstimatorFault,
    DimensionMismatch,
    NumericalFailure,
    Precondition,
    SynthesisFailure,
    Instability,
    ShapeMismatch,
    TrainingFailure,
    Io,
    Config,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Error that also carries a step index (integration blowup, divergence).
class StepError : public Error {
public:
    StepError(ErrorCode code, const std::string& msg, long step)
        : Error(code, msg + " at step " + std::to_string(step)), step_(step) {}
    long step() const { return step_; }

private:
    long step_;
};

}  // namespace idob
