#pragma once

#include <stdexcept>
#include <string>

namespace wnaction {

enum class ErrorKind {
    InvalidConfig,
    OutOfWindow,
    InvalidScale,
    InvalidArgument,
    InstanceTooLarge,
    DegenerateDesign,
    EmptySample,
    InsufficientSamples,
    MissingData,
    SchemaMismatch,
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::OutOfWindow: return "out-of-window";
    case ErrorKind::InvalidScale: return "invalid-scale";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InstanceTooLarge: return "instance-too-large";
    case ErrorKind::DegenerateDesign: return "degenerate-design";
    case ErrorKind::EmptySample: return "empty-sample";
    case ErrorKind::InsufficientSamples: return "insufficient-samples";
    case ErrorKind::MissingData: return "missing-data";
    case ErrorKind::SchemaMismatch: return "schema-mismatch";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

inline bool is_power_of_two(long long v) noexcept { return v > 0 && (v & (v - 1)) == 0; }

} // namespace wnaction
