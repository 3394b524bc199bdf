#include "gcsensor/errors.hpp"

namespace gcs {

const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::NonHermitianInput: return "NON_HERMITIAN_INPUT";
        case ErrorCode::NegativeRate: return "NEGATIVE_RATE";
        case ErrorCode::ZeroKappa: return "ZERO_KAPPA";
        case ErrorCode::SingularSystem: return "SINGULAR";
        case ErrorCode::NonpositiveNoise: return "NONPOSITIVE_NOISE";
        case ErrorCode::StepTooLarge: return "STEP_TOO_LARGE";
        case ErrorCode::InvalidHorizon: return "INVALID_HORIZON";
        case ErrorCode::NotConverged: return "NOT_CONVERGED";
        case ErrorCode::NotUnimodal: return "NOT_UNIMODAL";
        case ErrorCode::DivisionByZeroRow: return "DIV_BY_ZERO";
        case ErrorCode::UnknownKey: return "UNKNOWN_KEY";
        case ErrorCode::TypeError: return "TYPE_ERROR";
        case ErrorCode::ValidationError: return "VALIDATION_ERROR";
        case ErrorCode::IoError: return "IO_ERROR";
    }
    return "UNKNOWN";
}

int exit_code(ErrorCode c) {
    switch (c) {
        case ErrorCode::NonHermitianInput:
        case ErrorCode::NegativeRate:
        case ErrorCode::ZeroKappa:
        case ErrorCode::UnknownKey:
        case ErrorCode::TypeError:
        case ErrorCode::ValidationError:
            return 2;
        case ErrorCode::SingularSystem:
        case ErrorCode::NonpositiveNoise:
        case ErrorCode::StepTooLarge:
        case ErrorCode::InvalidHorizon:
        case ErrorCode::NotConverged:
        case ErrorCode::NotUnimodal:
        case ErrorCode::DivisionByZeroRow:
            return 3;
        case ErrorCode::IoError:
            return 4;
    }
    return 1;
}

}  // namespace gcs
