#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace varmech {

/// Root of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad expression text, bad system document.
class InputError : public Error {
public:
    using Error::Error;
};

/// The mathematics could not be carried through for a well-formed input.
class AnalysisError : public Error {
public:
    using Error::Error;
};

class ParseError : public InputError {
public:
    enum class Kind { syntax, unknown_identifier, too_many_primes, arity };

    ParseError(Kind kind, std::size_t position, std::string message, std::vector<std::string> expected = {});

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t position() const noexcept { return position_; }
    [[nodiscard]] const std::vector<std::string>& expected() const noexcept { return expected_; }
    /// Message without the position prefix.
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    Kind kind_;
    std::string detail_;
    std::size_t position_;
    std::vector<std::string> expected_;
};

class SchemaError : public InputError {
public:
    using InputError::InputError;
};

class EvaluationDomainError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class UnassignedVariableError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class JerkInInputError : public AnalysisError {
public:
    JerkInInputError() : AnalysisError("expression contains third-order derivatives") {}
};

class AccelerationInLagrangianError : public AnalysisError {
public:
    AccelerationInLagrangianError() : AnalysisError("Lagrangian depends on accelerations") {}
};

class NonlinearAccelerationError : public AnalysisError {
public:
    NonlinearAccelerationError(int i, int j, int k);
    int i, j, k;
};

class NotExactError : public AnalysisError {
public:
    NotExactError(int i, int j, std::string residual);
    int i, j;
    std::string residual;
};

class UnsupportedIntegrandError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class VelocityDependentResidueError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class ClosureFailureError : public AnalysisError {
public:
    ClosureFailureError(std::string which, std::vector<int> indices, std::string residual);
    std::string which;
    std::vector<int> indices;
    std::string residual;
};

class PostconditionFailureError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class ValidationFailureError : public AnalysisError {
public:
    explicit ValidationFailureError(std::vector<std::string> residuals);
    std::vector<std::string> residuals;  // E_i - F_i, one per equation
};

class NotOneDimensionalError : public AnalysisError {
public:
    explicit NotOneDimensionalError(int n);
};

class VelocityStructureUnsupportedError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class IntegrationUnsupportedError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class ConditionsFailedError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

}  // namespace varmech
