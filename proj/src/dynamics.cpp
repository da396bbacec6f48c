#include "flucbound/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace flucbound {

LindbladModel::LindbladModel(TimeDependentObservable hamiltonian,
                             std::vector<Matrix> jump_operators)
    : hamiltonian_(std::move(hamiltonian)), jumps_(std::move(jump_operators)) {
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
        const auto label = "jump operator " + std::to_string(k);
        require_square(jumps_[k], label);
        if (jumps_[k].rows() != hamiltonian_.dim())
            throw DimensionMismatch(label + ": dimension differs from the Hamiltonian");
        if (!is_finite(jumps_[k])) throw DomainError(label + ": non-finite entries");
    }
}

LindbladModel LindbladModel::amplitude_damping(double rate, double omega) {
    if (!(rate >= 0.0)) throw DomainError("amplitude damping rate must be >= 0");
    TimeDependentObservable h =
        omega == 0.0 ? TimeDependentObservable(2)
                     : TimeDependentObservable({{coeff::Constant{omega / 2.0}, ops::sigma_z()}});
    return LindbladModel(std::move(h), {std::sqrt(rate) * ops::sigma_minus()});
}

std::optional<AmplitudeDampingParameters> match_amplitude_damping(const LindbladModel& model) {
    if (model.dim() != 2 || model.jump_operators().size() != 1) return std::nullopt;
    if (!model.hamiltonian().is_time_independent()) return std::nullopt;

    const Matrix& l = model.jump_operators().front();
    if (l(0, 0) != 0.0 || l(1, 0) != 0.0 || l(1, 1) != 0.0) return std::nullopt;

    const Matrix h = model.hamiltonian().evaluate(0.0);
    if (h(0, 1) != 0.0 || h(1, 0) != 0.0) return std::nullopt;
    if (h(0, 0).imag() != 0.0 || h(1, 1).imag() != 0.0) return std::nullopt;
    if (h(0, 0).real() != -h(1, 1).real()) return std::nullopt;

    return AmplitudeDampingParameters{std::norm(l(0, 1)), 2.0 * h(0, 0).real()};
}

Trajectory::Trajectory(double t0, double dt, std::vector<DensityMatrix> states,
                       std::optional<LindbladModel> model)
    : t0_(t0), dt_(dt), states_(std::move(states)), model_(std::move(model)) {
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw DomainError("trajectory step must be > 0");
    if (states_.empty()) throw DomainError("trajectory needs at least one state");
    for (const auto& s : states_)
        if (s.dim() != states_.front().dim())
            throw DimensionMismatch("trajectory states differ in dimension");
    if (model_ && model_->dim() != states_.front().dim())
        throw DimensionMismatch("trajectory model dimension differs from its states");
}

std::size_t Trajectory::index_of(double t) const {
    const double k = std::round((t - t0_) / dt_);
    if (k <= 0.0) return 0;
    return std::min(static_cast<std::size_t>(k), size() - 1);
}

Matrix lindblad_rhs(const LindbladModel& model, const Matrix& rho, double t) {
    if (rho.rows() != model.dim() || rho.cols() != model.dim())
        throw DimensionMismatch("lindblad_rhs: state and model dimensions differ");
    const Matrix h = model.hamiltonian().evaluate(t);
    Matrix out = -kI * (h * rho - rho * h);
    for (const auto& l : model.jump_operators()) {
        const Matrix ldl = l.adjoint() * l;
        out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
    }
    return out;
}

Matrix lindblad_rhs(const LindbladModel& model, const DensityMatrix& rho, double t) {
    return lindblad_rhs(model, rho.matrix(), t);
}

namespace {

std::size_t step_count(double t_max, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step must be > 0");
    if (!(t_max >= dt) || !std::isfinite(t_max)) throw DomainError("t_max must be >= dt");
    return static_cast<std::size_t>(std::llround(t_max / dt));
}

}  // namespace

Trajectory integrate(const LindbladModel& model, const DensityMatrix& rho0, double t_max,
                     double dt, double t0) {
    if (rho0.dim() != model.dim()) throw DimensionMismatch("integrate: rho0 vs model");
    const std::size_t steps = step_count(t_max, dt);

    std::vector<DensityMatrix> states;
    states.reserve(steps + 1);
    states.push_back(rho0);

    Matrix rho = rho0.matrix();
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        const Matrix k1 = lindblad_rhs(model, rho, t);
        const Matrix k2 = lindblad_rhs(model, rho + 0.5 * dt * k1, t + 0.5 * dt);
        const Matrix k3 = lindblad_rhs(model, rho + 0.5 * dt * k2, t + 0.5 * dt);
        const Matrix k4 = lindblad_rhs(model, rho + dt * k3, t + dt);
        rho = hermitian_part(rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));

        const double t_next = t0 + static_cast<double>(k + 1) * dt;
        const auto issues = DensityMatrix::violations(rho, kPsdRunTolerance);
        if (!issues.empty()) {
            std::string msg = "state left the density-matrix set (";
            for (std::size_t i = 0; i < issues.size(); ++i) msg += (i ? "," : "") + issues[i];
            throw IntegrationError(t_next, msg + ")");
        }
        states.emplace_back(rho, kPsdRunTolerance);
    }
    return Trajectory(t0, dt, std::move(states), model);
}

DensityMatrix analytic_amplitude_damping(const DensityMatrix& rho0, double rate, double omega,
                                         double t) {
    if (rho0.dim() != 2) throw DimensionMismatch("analytic_amplitude_damping needs a qubit");
    if (!(rate >= 0.0)) throw DomainError("analytic_amplitude_damping: rate must be >= 0");
    if (t == 0.0) return rho0;

    const Matrix& r = rho0.matrix();
    const double survive = std::exp(-rate * t);
    const double gamma = -std::expm1(-rate * t);
    const Complex coherence = std::exp(-0.5 * rate * t) * std::exp(-kI * omega * t);

    Matrix out(2, 2);
    out(0, 0) = r(0, 0) + gamma * r(1, 1);
    out(0, 1) = coherence * r(0, 1);
    out(1, 0) = std::conj(coherence) * r(1, 0);
    out(1, 1) = survive * r(1, 1);
    return DensityMatrix(out);
}

Trajectory analytic_amplitude_damping_trajectory(const DensityMatrix& rho0, double rate,
                                                 double omega, double t_max, double dt) {
    const std::size_t steps = step_count(t_max, dt);
    std::vector<DensityMatrix> states;
    states.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k)
        states.push_back(analytic_amplitude_damping(rho0, rate, omega, static_cast<double>(k) * dt));
    return Trajectory(0.0, dt, std::move(states), LindbladModel::amplitude_damping(rate, omega));
}

namespace {

void require_gapped(const SpectralDecomposition& s, const char* which) {
    for (std::size_t j = 0; j + 1 < s.eigenvalues.size(); ++j) {
        if (s.eigenvalues[j] - s.eigenvalues[j + 1] < kMinEigenGap) {
            std::ostringstream os;
            os << "extract_pseudo_hamiltonian: degenerate spectrum in " << which
               << " (gap " << s.eigenvalues[j] - s.eigenvalues[j + 1] << ")";
            throw DomainError(os.str());
        }
    }
}

}  // namespace

PseudoHamiltonian extract_pseudo_hamiltonian(const DensityMatrix& rho_a,
                                             const DensityMatrix& rho_b, double dt) {
    if (!(dt > 0.0)) throw DomainError("extract_pseudo_hamiltonian: dt must be > 0");
    if (rho_a.dim() != rho_b.dim()) throw DimensionMismatch("extract_pseudo_hamiltonian");

    auto before = hermitian_eigendecomposition(rho_a.matrix());
    const auto after = hermitian_eigendecomposition(rho_b.matrix());
    require_gapped(before, "rho(t)");
    require_gapped(after, "rho(t+dt)");

    const auto n = static_cast<std::size_t>(rho_a.dim());
    std::vector<bool> taken(n, false);
    std::vector<Vector> paired(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t best = 0;
        double best_overlap = -1.0;
        double runner_up = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double o = std::abs(before.eigenvectors[j].dot(after.eigenvectors[k]));
            if (o > best_overlap) {
                runner_up = std::max(runner_up, best_overlap);
                best_overlap = o;
                best = k;
            } else {
                runner_up = std::max(runner_up, o);
            }
        }
        if (runner_up >= 0.9 * best_overlap || taken[best])
            throw DomainError("extract_pseudo_hamiltonian: ambiguous eigenvector pairing");
        taken[best] = true;

        const Complex overlap = before.eigenvectors[j].dot(after.eigenvectors[best]);
        paired[j] = after.eigenvectors[best] * (std::conj(overlap) / std::abs(overlap));
    }

    const auto dim = rho_a.dim();
    Matrix transfer = Matrix::Zero(dim, dim);
    for (std::size_t j = 0; j < n; ++j) transfer += paired[j] * before.eigenvectors[j].adjoint();

    PseudoHamiltonian out;
    out.omega = hermitian_part(kI * (transfer - ops::identity(dim)) / dt);
    out.transfer = std::move(transfer);
    const Matrix step = ops::identity(dim) - kI * dt * out.omega;
    for (std::size_t j = 0; j < n; ++j)
        out.residuals.push_back((step * before.eigenvectors[j] - paired[j]).norm());
    out.before = std::move(before);
    return out;
}

}  // namespace flucbound
