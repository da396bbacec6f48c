#pragma once

// Continuous-time open-system evolution: the Lindblad generator, a fixed-step
// RK4 integrator, the closed-form amplitude-damping solution, and extraction
// of the eigenvector generator (pseudo-Hamiltonian) from sampled states.

#include <optional>
#include <vector>

#include "flucbound/linalg.hpp"
#include "flucbound/observables.hpp"

namespace flucbound {

/// Positivity tolerance for states produced by the integrator.
inline constexpr double kPsdRunTolerance = 1e-8;
/// Minimum eigenvalue gap for pseudo-Hamiltonian extraction.
inline constexpr double kMinEigenGap = 1e-6;

class LindbladModel {
public:
    LindbladModel(TimeDependentObservable hamiltonian, std::vector<Matrix> jump_operators);

    /// H = (omega/2) sigma_z (absent when omega == 0), L = sqrt(rate) sigma_minus.
    static LindbladModel amplitude_damping(double rate, double omega);

    const TimeDependentObservable& hamiltonian() const noexcept { return hamiltonian_; }
    const std::vector<Matrix>& jump_operators() const noexcept { return jumps_; }
    Eigen::Index dim() const noexcept { return hamiltonian_.dim(); }
    bool is_closed() const noexcept { return jumps_.empty(); }

private:
    TimeDependentObservable hamiltonian_;
    std::vector<Matrix> jumps_;
};

struct AmplitudeDampingParameters {
    double rate;
    double omega;
};

/// Recognizes models that are exactly amplitude damping with an optional
/// (omega/2) sigma_z Hamiltonian, so the closed form can replace integration.
std::optional<AmplitudeDampingParameters> match_amplitude_damping(const LindbladModel& model);

/// Uniform-grid sequence of states. times[k] = t0 + k dt.
class Trajectory {
public:
    Trajectory(double t0, double dt, std::vector<DensityMatrix> states,
               std::optional<LindbladModel> model);

    std::size_t size() const noexcept { return states_.size(); }
    double dt() const noexcept { return dt_; }
    double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * dt_; }
    const DensityMatrix& state(std::size_t k) const { return states_.at(k); }
    const std::vector<DensityMatrix>& states() const noexcept { return states_; }
    /// nullopt means the states were supplied externally.
    const std::optional<LindbladModel>& model() const noexcept { return model_; }
    bool is_interior(std::size_t k) const noexcept { return k > 0 && k + 1 < size(); }
    /// Index of the grid point nearest to t.
    std::size_t index_of(double t) const;

private:
    double t0_;
    double dt_;
    std::vector<DensityMatrix> states_;
    std::optional<LindbladModel> model_;
};

/// -i[H(t), rho] + sum_k (L rho L^dagger - 1/2 {L^dagger L, rho})
Matrix lindblad_rhs(const LindbladModel& model, const Matrix& rho, double t);
Matrix lindblad_rhs(const LindbladModel& model, const DensityMatrix& rho, double t);

/// Classical RK4 with fixed step. The number of steps is round(t_max / dt).
/// States are re-symmetrized but never renormalized; a state that fails the
/// density-matrix checks (positivity at kPsdRunTolerance) aborts with an
/// IntegrationError stamped with the failing time.
Trajectory integrate(const LindbladModel& model, const DensityMatrix& rho0, double t_max,
                     double dt, double t0 = 0.0);

/// Closed-form amplitude damping with H = (omega/2) sigma_z.
DensityMatrix analytic_amplitude_damping(const DensityMatrix& rho0, double rate, double omega,
                                         double t);

/// Samples analytic_amplitude_damping on the same grid integrate() would use,
/// with the matching model attached.
Trajectory analytic_amplitude_damping_trajectory(const DensityMatrix& rho0, double rate,
                                                 double omega, double t_max, double dt);

struct PseudoHamiltonian {
    /// Hermitian generator of the eigenvector flow.
    Matrix omega;
    /// T = sum_j |psi_j(t+dt)><psi_j(t)| after pairing and phase fixing.
    Matrix transfer;
    /// || (I - i omega dt) psi_j(t) - psi_j(t+dt) || per eigenvector.
    std::vector<double> residuals;
    /// Eigen-decomposition at the earlier time.
    SpectralDecomposition before;
};

/// Pairs eigenvectors of rho_a and rho_b by maximal overlap, fixes each pair's
/// relative phase so <psi_j(t)|psi_j(t+dt)> is real positive, and returns the
/// Hermitian part of i(T - I)/dt. Throws DomainError for a degenerate spectrum
/// (gap < kMinEigenGap) or an ambiguous pairing (runner-up overlap within 10%).
PseudoHamiltonian extract_pseudo_hamiltonian(const DensityMatrix& rho_a,
                                             const DensityMatrix& rho_b, double dt);

}  // namespace flucbound
