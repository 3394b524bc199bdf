#pragma once

#include <stdexcept>
#include <string>

namespace gcs {

enum class ErrorCode {
    NonHermitianInput,
    NegativeRate,
    ZeroKappa,
    SingularSystem,
    NonpositiveNoise,
    StepTooLarge,
    InvalidHorizon,
    NotConverged,
    NotUnimodal,
    DivisionByZeroRow,
    UnknownKey,
    TypeError,
    ValidationError,
    IoError,
};

/// Short marker used in CSV error columns and messages.
const char* to_string(ErrorCode c);

/// Process exit code class: 2 validation, 3 numerical, 4 I/O.
int exit_code(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode c, const std::string& msg) {
    throw Error(c, std::string(to_string(c)) + ": " + msg);
}

}  // namespace gcs
