#include "flucbound/channels.hpp"

#include <cmath>
#include <sstream>

namespace flucbound {

double completeness_residual(std::span<const Matrix> operators) {
    if (operators.empty()) return INFINITY;
    const auto n = operators.front().rows();
    Matrix sum = -ops::identity(n);
    for (const auto& e : operators) {
        require_same_dim(e, operators.front(), "completeness_residual");
        sum += e.adjoint() * e;
    }
    return max_abs(sum);
}

double completeness_residual(const KrausChannel& channel) {
    return completeness_residual(std::span<const Matrix>(channel.operators()));
}

KrausChannel::KrausChannel(std::vector<Matrix> operators) : operators_(std::move(operators)) {
    if (operators_.empty()) throw DomainError("Kraus channel needs at least one operator");
    for (const auto& e : operators_) {
        require_same_dim(e, operators_.front(), "KrausChannel");
        if (!is_finite(e)) throw DomainError("KrausChannel: non-finite operator entries");
    }
    const double residual = completeness_residual(std::span<const Matrix>(operators_));
    if (residual > kKrausTolerance) {
        std::ostringstream os;
        os << "KrausChannel: completeness violated (residual " << residual << ")";
        throw InvariantViolation(os.str());
    }
}

DensityMatrix KrausChannel::apply(const DensityMatrix& rho) const {
    if (rho.dim() != dim()) throw DimensionMismatch("KrausChannel::apply");
    Matrix out = Matrix::Zero(dim(), dim());
    for (const auto& e : operators_) out += e * rho.matrix() * e.adjoint();
    return DensityMatrix(out);
}

KrausChannel amplitude_damping(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw DomainError("amplitude_damping: gamma must lie in [0, 1]");
    Matrix e0 = Matrix::Zero(2, 2);
    e0(0, 0) = 1.0;
    e0(1, 1) = std::sqrt(1.0 - gamma);
    Matrix e1 = Matrix::Zero(2, 2);
    e1(0, 1) = std::sqrt(gamma);
    return KrausChannel({e0, e1});
}

double damping_probability(double rate, double t) { return -std::expm1(-rate * t); }

}  // namespace flucbound
