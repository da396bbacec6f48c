#pragma once

// Observable statistics along trajectories and the fluctuation-growth
// inequalities evaluated on them.
//
// Two bounds are reported:
//   open   (d sigma_A/dt)^2 <= 2 [ <(dA/dt)^2> + tr(rho_dot dA^2)^2 / (4 sigma_A^2) ]
//   closed (d sigma_A/dt)^2 <= sigma_{A_dot}^2, with A_dot the adjoint-Lindblad rate.
// The open bound holds for any generator; the closed one may fail once jump
// operators are present, and such failures are reported rather than thrown.

#include <optional>
#include <string>

#include "flucbound/dynamics.hpp"
#include "flucbound/linalg.hpp"
#include "flucbound/observables.hpp"

namespace flucbound {

/// Bound evaluation is skipped where sigma_A falls below this floor.
inline constexpr double kSigmaFloor = 1e-6;
/// A bound is satisfied iff margin >= -kBoundTolerance.
inline constexpr double kBoundTolerance = 1e-9;
/// Largest |tr(rho_dot)| accepted by rho_dot_delta_sq.
inline constexpr double kRhoDotTraceTolerance = 1e-10;

double expectation(const DensityMatrix& rho, const Matrix& m);
/// tr(rho m^2) - tr(rho m)^2; throws if it drops below -1e-12.
double variance(const DensityMatrix& rho, const Matrix& m);
/// 1/2 <{a, b}> - <a><b>
double covariance_sym(const DensityMatrix& rho, const Matrix& a, const Matrix& b);
/// Re(<a b>) - <a><b>. Kept only to cross-check covariance_sym.
double covariance_real_part(const DensityMatrix& rho, const Matrix& a, const Matrix& b);
/// tr(rho_dot (a - <a>)^2) = tr(rho_dot a^2) - 2 <a> tr(rho_dot a) for traceless rho_dot.
double rho_dot_delta_sq(const Matrix& rho_dot, const DensityMatrix& rho, const Matrix& a);

enum class RhoDotMode {
    automatic,  // analytic when the trajectory carries a model, otherwise finite difference
    analytic,
    finite_difference,
};

/// d rho/dt at grid point k.
Matrix rho_dot(const Trajectory& traj, std::size_t k, RhoDotMode mode = RhoDotMode::automatic);

struct StatPoint {
    double t = 0.0;
    double mean = 0.0;
    /// Clamped at 0 for reporting.
    double variance = 0.0;
    double sigma = 0.0;
    /// Cov(A, dA/dt), symmetrized.
    double cov = 0.0;
    /// tr(rho_dot dA^2)
    double rho_dot_term = 0.0;
    /// rho_dot_term + 2 cov
    double var_rate = 0.0;
    /// Central difference of the variance; only at interior grid points.
    std::optional<double> var_rate_fd;
};

StatPoint variance_rate(const Trajectory& traj, const TimeDependentObservable& a, std::size_t k,
                        RhoDotMode mode = RhoDotMode::automatic);

enum class BoundKind { open_bound, closed_bound };

struct BoundReport {
    BoundKind kind = BoundKind::open_bound;
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool satisfied = true;
    bool skipped = false;
    std::string skip_reason;
};

BoundReport open_bound(const StatPoint& stats, double squared_partial,
                       double eps_sigma = kSigmaFloor);
BoundReport open_bound(const Trajectory& traj, const TimeDependentObservable& a, std::size_t k,
                       double eps_sigma = kSigmaFloor, RhoDotMode mode = RhoDotMode::automatic);

/// A_dot = dA/dt + i[H, A] + sum_k (L^dagger A L - 1/2 {L^dagger L, A})
Matrix adjoint_heisenberg_rate(const LindbladModel& model, const TimeDependentObservable& a,
                               double t);

BoundReport closed_bound(const StatPoint& stats, const DensityMatrix& rho, const Matrix& a_dot,
                         double eps_sigma = kSigmaFloor);
BoundReport closed_bound(const Trajectory& traj, const LindbladModel& model,
                         const TimeDependentObservable& a, std::size_t k,
                         double eps_sigma = kSigmaFloor, RhoDotMode mode = RhoDotMode::automatic);

/// |tr(rho_dot dA^2) + 2 Cov(A, dA/dt) - central difference of sigma_A^2|.
/// Throws DomainError at boundary points.
double eq36_residual(const Trajectory& traj, const TimeDependentObservable& a, std::size_t k,
                     RhoDotMode mode = RhoDotMode::automatic);

/// <{A - <A>, A_dot}> with A_dot = dA/dt + i[H, A]. Closed models only.
double closed_system_anticommutator_rate(const Trajectory& traj, const LindbladModel& model,
                                         const TimeDependentObservable& a, std::size_t k);

/// sigma_A^2 <(dA/dt)^2> - Cov(A, dA/dt)^2; non-negative by Cauchy-Schwarz.
double cauchy_schwarz_margin(const DensityMatrix& rho, const TimeDependentObservable& a,
                             double t);

}  // namespace flucbound
