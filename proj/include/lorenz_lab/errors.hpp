#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lorenz_lab {

/// Base class of every error raised by the toolkit. `kind()` is a stable
/// machine-readable tag used in the CLI's JSON error objects.
class Error : public std::runtime_error {
public:
    Error(std::string_view kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& m) : Error("domain", m) {}
};

class ConfigurationError : public Error {
public:
    explicit ConfigurationError(const std::string& m) : Error("configuration", m) {}
};

/// Raised when the state norm exceeds the divergence guard.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& m, double blowup_time)
        : Error("divergence", m), blowup_time_(blowup_time) {}

    [[nodiscard]] double blowup_time() const noexcept { return blowup_time_; }

private:
    double blowup_time_;
};

class InsufficientDataError : public Error {
public:
    explicit InsufficientDataError(const std::string& m) : Error("insufficient_data", m) {}
};

class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& m) : Error("degenerate", m) {}
};

class RootTrackingError : public Error {
public:
    explicit RootTrackingError(const std::string& m) : Error("root_tracking", m) {}
};

class ConsistencyError : public Error {
public:
    explicit ConsistencyError(const std::string& m) : Error("consistency", m) {}
};

class ResonanceError : public Error {
public:
    explicit ResonanceError(const std::string& m) : Error("resonance", m) {}
};

class ContradictionError : public Error {
public:
    explicit ContradictionError(const std::string& m) : Error("contradiction", m) {}
};

class BracketError : public Error {
public:
    explicit BracketError(const std::string& m) : Error("bracket", m) {}
};

}  // namespace lorenz_lab
