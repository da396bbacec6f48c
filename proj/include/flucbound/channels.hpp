#pragma once

#include <span>
#include <vector>

#include "flucbound/linalg.hpp"

namespace flucbound {

inline constexpr double kKrausTolerance = 1e-10;

/// max_ij |(sum_k E_k^dagger E_k - I)_ij|. Works on any operator list, valid
/// channel or not.
double completeness_residual(std::span<const Matrix> operators);

/// A CPTP map rho -> sum_k E_k rho E_k^dagger. Operator sets that are not
/// trace preserving within kKrausTolerance are rejected, never renormalized.
class KrausChannel {
public:
    explicit KrausChannel(std::vector<Matrix> operators);

    DensityMatrix apply(const DensityMatrix& rho) const;

    const std::vector<Matrix>& operators() const noexcept { return operators_; }
    Eigen::Index dim() const noexcept { return operators_.front().rows(); }

private:
    std::vector<Matrix> operators_;
};

double completeness_residual(const KrausChannel& channel);

/// E_0 = diag(1, sqrt(1-gamma)), E_1 = sqrt(gamma) |0><1|, gamma in [0, 1].
KrausChannel amplitude_damping(double gamma);

/// gamma(t) = 1 - exp(-rate t)
double damping_probability(double rate, double t);

}  // namespace flucbound
