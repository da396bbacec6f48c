#include "flucbound/kernels.hpp"

#include <exception>

#include <omp.h>

namespace flucbound {

PointEvaluation evaluate_point(const Trajectory& traj, const TimeDependentObservable& a,
                               std::size_t k, const EvaluationOptions& options) {
    PointEvaluation out;
    out.stats = variance_rate(traj, a, k, options.rho_dot_mode);
    const double t = out.stats.t;
    const DensityMatrix& rho = traj.state(k);

    if (options.bounds.open)
        out.open = open_bound(out.stats, squared_partial_expectation(a, t, rho), options.eps_sigma);
    if (options.bounds.closed) {
        if (!traj.model()) throw DomainError("closed bound needs a trajectory with a model");
        out.closed = closed_bound(out.stats, rho, adjoint_heisenberg_rate(*traj.model(), a, t),
                                  options.eps_sigma);
    }
    if (options.bounds.eq36 && out.stats.var_rate_fd)
        out.eq36_residual = std::abs(out.stats.var_rate - *out.stats.var_rate_fd);
    if (options.bounds.cauchy_schwarz) out.cauchy_schwarz_margin = cauchy_schwarz_margin(rho, a, t);
    return out;
}

std::vector<PointEvaluation> evaluate_trajectory_serial(const Trajectory& traj,
                                                        const TimeDependentObservable& a,
                                                        const EvaluationOptions& options) {
    std::vector<PointEvaluation> out;
    if (traj.size() < 3) return out;
    out.reserve(traj.size() - 2);
    for (std::size_t k = 1; k + 1 < traj.size(); ++k)
        out.push_back(evaluate_point(traj, a, k, options));
    return out;
}

std::vector<PointEvaluation> evaluate_trajectory_parallel(const Trajectory& traj,
                                                          const TimeDependentObservable& a,
                                                          const EvaluationOptions& options) {
    if (traj.size() < 3) return {};
    const auto n = static_cast<std::ptrdiff_t>(traj.size() - 2);
    std::vector<PointEvaluation> out(static_cast<std::size_t>(n));

    // Exceptions cannot cross the parallel region; keep the one from the
    // earliest grid point so the reported failure matches the serial kernel.
    std::exception_ptr failure;
    std::ptrdiff_t failed_at = n;

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] =
                evaluate_point(traj, a, static_cast<std::size_t>(i + 1), options);
        } catch (...) {
#pragma omp critical(flucbound_kernel_failure)
            {
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace flucbound
