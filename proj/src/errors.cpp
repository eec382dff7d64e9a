#include "varmech/errors.hpp"

#include <utility>

namespace varmech {

namespace {

std::string join_indices(const std::vector<int>& idx)
{
    std::string s;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        s += (k == 0 ? "" : ",") + std::to_string(idx[k]);
    }
    return s;
}

}  // namespace

ParseError::ParseError(Kind kind, std::size_t position, std::string message, std::vector<std::string> expected)
    : InputError("at position " + std::to_string(position) + ": " + message), kind_(kind), detail_(std::move(message)),
      position_(position),
      expected_(std::move(expected))
{
}

NonlinearAccelerationError::NonlinearAccelerationError(int i_, int j_, int k_)
    : AnalysisError("equation " + std::to_string(i_) + " is nonlinear in accelerations (d2F/dx" + std::to_string(j_) +
                    "''dx" + std::to_string(k_) + "'' is nonzero); no Lagrangian exists"),
      i(i_), j(j_), k(k_)
{
}

NotExactError::NotExactError(int i_, int j_, std::string residual_)
    : AnalysisError("form is not exact: df" + std::to_string(i_) + "/dv" + std::to_string(j_) + " - df" +
                    std::to_string(j_) + "/dv" + std::to_string(i_) + " = " + residual_),
      i(i_), j(j_), residual(std::move(residual_))
{
}

ClosureFailureError::ClosureFailureError(std::string which_, std::vector<int> indices_, std::string residual_)
    : AnalysisError(which_ + " closure fails at (" + join_indices(indices_) + "): residual " + residual_),
      which(std::move(which_)), indices(std::move(indices_)), residual(std::move(residual_))
{
}

ValidationFailureError::ValidationFailureError(std::vector<std::string> residuals_)
    : AnalysisError("constructed Lagrangian does not reproduce the equations"), residuals(std::move(residuals_))
{
}

NotOneDimensionalError::NotOneDimensionalError(int n)
    : AnalysisError("multiplier search needs a one-dimensional system, got n = " + std::to_string(n))
{
}

}  // namespace varmech
