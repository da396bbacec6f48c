#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace flucbound {

// Every error thrown by the library derives from Error. The code() string is
// stable and is what the CLI prints in its machine-readable error line.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& message)
        : Error("dimension_mismatch", message) {}
};

class InvariantViolation : public Error {
public:
    explicit InvariantViolation(const std::string& message)
        : Error("invariant_violation", message) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& message)
        : Error("domain_error", message) {}
};

/// Raised by the integrator when a state leaves the density-matrix set.
class IntegrationError : public Error {
public:
    IntegrationError(double time, const std::string& message)
        : Error("integration_error", message + " at t=" + std::to_string(time)),
          time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Scenario validation failure; carries every violated invariant, not just the first.
class ScenarioError : public Error {
public:
    explicit ScenarioError(std::vector<std::string> issues)
        : Error("scenario_invalid", join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out;
        for (const auto& s : issues) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> issues_;
};

}  // namespace flucbound
