#include "flucbound/stats.hpp"

#include <cmath>
#include <sstream>

namespace flucbound {

namespace {

void require_compatible(const DensityMatrix& rho, const Matrix& m, const char* what) {
    require_square(m, what);
    if (m.rows() != rho.dim())
        throw DimensionMismatch(std::string(what) + ": observable and state dimensions differ");
}

double raw_variance(const DensityMatrix& rho, const Matrix& m) {
    const double mean = trace(rho.matrix() * m).real();
    return trace(rho.matrix() * m * m).real() - mean * mean;
}

}  // namespace

double expectation(const DensityMatrix& rho, const Matrix& m) {
    require_compatible(rho, m, "expectation");
    require_hermitian(m, "expectation");
    return trace(rho.matrix() * m).real();
}

double variance(const DensityMatrix& rho, const Matrix& m) {
    require_compatible(rho, m, "variance");
    require_hermitian(m, "variance");
    const double v = raw_variance(rho, m);
    const double scale = std::max(1.0, max_abs(m) * max_abs(m));
    if (v < -1e-12 * scale) {
        std::ostringstream os;
        os << "variance: negative value " << v;
        throw InvariantViolation(os.str());
    }
    return v;
}

double covariance_sym(const DensityMatrix& rho, const Matrix& a, const Matrix& b) {
    require_compatible(rho, a, "covariance_sym");
    require_compatible(rho, b, "covariance_sym");
    const Matrix& r = rho.matrix();
    const double sym = 0.5 * trace(r * (a * b + b * a)).real();
    return sym - trace(r * a).real() * trace(r * b).real();
}

double covariance_real_part(const DensityMatrix& rho, const Matrix& a, const Matrix& b) {
    require_compatible(rho, a, "covariance_real_part");
    require_compatible(rho, b, "covariance_real_part");
    const Matrix& r = rho.matrix();
    return trace(r * a * b).real() - trace(r * a).real() * trace(r * b).real();
}

double rho_dot_delta_sq(const Matrix& rho_dot, const DensityMatrix& rho, const Matrix& a) {
    require_compatible(rho, a, "rho_dot_delta_sq");
    require_compatible(rho, rho_dot, "rho_dot_delta_sq");
    if (std::abs(trace(rho_dot)) > kRhoDotTraceTolerance) {
        std::ostringstream os;
        os << "rho_dot_delta_sq: rho_dot is not traceless (|tr| = " << std::abs(trace(rho_dot))
           << ")";
        throw DomainError(os.str());
    }
    const double mean = trace(rho.matrix() * a).real();
    return trace(rho_dot * a * a).real() - 2.0 * mean * trace(rho_dot * a).real();
}

Matrix rho_dot(const Trajectory& traj, std::size_t k, RhoDotMode mode) {
    if (k >= traj.size()) throw DomainError("rho_dot: grid index out of range");
    if (mode == RhoDotMode::automatic)
        mode = traj.model() ? RhoDotMode::analytic : RhoDotMode::finite_difference;

    if (mode == RhoDotMode::analytic) {
        if (!traj.model())
            throw DomainError("rho_dot: analytic mode needs a trajectory with a model");
        return lindblad_rhs(*traj.model(), traj.state(k), traj.time(k));
    }
    if (!traj.is_interior(k)) {
        std::ostringstream os;
        os << "rho_dot: finite difference needs two-sided neighbours (t=" << traj.time(k) << ")";
        throw DomainError(os.str());
    }
    return (traj.state(k + 1).matrix() - traj.state(k - 1).matrix()) / (2.0 * traj.dt());
}

StatPoint variance_rate(const Trajectory& traj, const TimeDependentObservable& a, std::size_t k,
                        RhoDotMode mode) {
    if (k >= traj.size()) throw DomainError("variance_rate: grid index out of range");
    if (a.dim() != traj.state(0).dim()) throw DimensionMismatch("variance_rate");

    const double t = traj.time(k);
    const DensityMatrix& rho = traj.state(k);
    const Matrix obs = a.evaluate(t);
    const Matrix dobs = a.partial_time(t);

    StatPoint p;
    p.t = t;
    p.mean = trace(rho.matrix() * obs).real();
    p.variance = std::max(0.0, variance(rho, obs));
    p.sigma = std::sqrt(p.variance);
    p.cov = covariance_sym(rho, obs, dobs);
    p.rho_dot_term = rho_dot_delta_sq(rho_dot(traj, k, mode), rho, obs);
    p.var_rate = p.rho_dot_term + 2.0 * p.cov;
    if (traj.is_interior(k)) {
        const double ahead = raw_variance(traj.state(k + 1), a.evaluate(traj.time(k + 1)));
        const double behind = raw_variance(traj.state(k - 1), a.evaluate(traj.time(k - 1)));
        p.var_rate_fd = (ahead - behind) / (2.0 * traj.dt());
    }
    return p;
}

namespace {

BoundReport skipped_report(BoundKind kind, const StatPoint& stats) {
    BoundReport r;
    r.kind = kind;
    r.t = stats.t;
    r.skipped = true;
    r.satisfied = true;
    r.skip_reason = "sigma_below_floor";
    return r;
}

BoundReport finish(BoundKind kind, double t, double lhs, double rhs) {
    BoundReport r;
    r.kind = kind;
    r.t = t;
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.satisfied = r.margin >= -kBoundTolerance;
    return r;
}

}  // namespace

BoundReport open_bound(const StatPoint& stats, double squared_partial, double eps_sigma) {
    if (stats.sigma < eps_sigma) return skipped_report(BoundKind::open_bound, stats);
    const double four_var = 4.0 * stats.variance;
    const double lhs = stats.var_rate * stats.var_rate / four_var;
    const double rhs =
        2.0 * (squared_partial + stats.rho_dot_term * stats.rho_dot_term / four_var);
    return finish(BoundKind::open_bound, stats.t, lhs, rhs);
}

BoundReport open_bound(const Trajectory& traj, const TimeDependentObservable& a, std::size_t k,
                       double eps_sigma, RhoDotMode mode) {
    const StatPoint stats = variance_rate(traj, a, k, mode);
    return open_bound(stats, squared_partial_expectation(a, stats.t, traj.state(k)), eps_sigma);
}

Matrix adjoint_heisenberg_rate(const LindbladModel& model, const TimeDependentObservable& a,
                               double t) {
    if (a.dim() != model.dim()) throw DimensionMismatch("adjoint_heisenberg_rate");
    const Matrix obs = a.evaluate(t);
    const Matrix h = model.hamiltonian().evaluate(t);
    Matrix out = a.partial_time(t) + kI * (h * obs - obs * h);
    for (const auto& l : model.jump_operators()) {
        const Matrix ldl = l.adjoint() * l;
        out += l.adjoint() * obs * l - 0.5 * (ldl * obs + obs * ldl);
    }
    return hermitian_part(out);
}

BoundReport closed_bound(const StatPoint& stats, const DensityMatrix& rho, const Matrix& a_dot,
                         double eps_sigma) {
    if (stats.sigma < eps_sigma) return skipped_report(BoundKind::closed_bound, stats);
    const double lhs = stats.var_rate * stats.var_rate / (4.0 * stats.variance);
    const double rhs = std::max(0.0, variance(rho, a_dot));
    return finish(BoundKind::closed_bound, stats.t, lhs, rhs);
}

BoundReport closed_bound(const Trajectory& traj, const LindbladModel& model,
                         const TimeDependentObservable& a, std::size_t k, double eps_sigma,
                         RhoDotMode mode) {
    const StatPoint stats = variance_rate(traj, a, k, mode);
    return closed_bound(stats, traj.state(k), adjoint_heisenberg_rate(model, a, stats.t),
                        eps_sigma);
}

double eq36_residual(const Trajectory& traj, const TimeDependentObservable& a, std::size_t k,
                     RhoDotMode mode) {
    if (!traj.is_interior(k)) {
        std::ostringstream os;
        os << "eq36_residual: boundary grid point (t=" << traj.time(std::min(k, traj.size() - 1))
           << ")";
        throw DomainError(os.str());
    }
    const StatPoint p = variance_rate(traj, a, k, mode);
    return std::abs(p.var_rate - *p.var_rate_fd);
}

double closed_system_anticommutator_rate(const Trajectory& traj, const LindbladModel& model,
                                         const TimeDependentObservable& a, std::size_t k) {
    if (!model.is_closed())
        throw DomainError("closed_system_anticommutator_rate: model has jump operators");
    if (k >= traj.size()) throw DomainError("closed_system_anticommutator_rate: bad index");
    const double t = traj.time(k);
    const DensityMatrix& rho = traj.state(k);
    const Matrix obs = a.evaluate(t);
    const Matrix a_dot = adjoint_heisenberg_rate(model, a, t);
    const Matrix delta = obs - expectation(rho, obs) * ops::identity(obs.rows());
    return trace(rho.matrix() * anticommutator(delta, a_dot)).real();
}

double cauchy_schwarz_margin(const DensityMatrix& rho, const TimeDependentObservable& a,
                             double t) {
    const Matrix obs = a.evaluate(t);
    const Matrix dobs = a.partial_time(t);
    const double cov = covariance_sym(rho, obs, dobs);
    return std::max(0.0, raw_variance(rho, obs)) * squared_partial_expectation(a, t, rho) -
           cov * cov;
}

}  // namespace flucbound
