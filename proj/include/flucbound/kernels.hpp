#pragma once

// Whole-trajectory evaluation. Grid points are independent, so the parallel
// kernel is an OpenMP loop writing into a pre-sized vector; the serial kernel
// is the reference it is tested against (results must be bit-identical).

#include <optional>
#include <vector>

#include "flucbound/stats.hpp"

namespace flucbound {

struct BoundSelection {
    bool open = true;
    bool closed = false;
    bool eq36 = true;
    bool cauchy_schwarz = true;
};

struct EvaluationOptions {
    BoundSelection bounds;
    RhoDotMode rho_dot_mode = RhoDotMode::automatic;
    double eps_sigma = kSigmaFloor;
};

struct PointEvaluation {
    StatPoint stats;
    std::optional<BoundReport> open;
    std::optional<BoundReport> closed;
    std::optional<double> eq36_residual;
    std::optional<double> cauchy_schwarz_margin;
};

/// Evaluate at one interior grid point. Closed-bound evaluation needs the
/// trajectory's model.
PointEvaluation evaluate_point(const Trajectory& traj, const TimeDependentObservable& a,
                               std::size_t k, const EvaluationOptions& options);

/// One entry per interior grid point (k = 1 .. size-2), in time order.
std::vector<PointEvaluation> evaluate_trajectory_serial(const Trajectory& traj,
                                                        const TimeDependentObservable& a,
                                                        const EvaluationOptions& options);

std::vector<PointEvaluation> evaluate_trajectory_parallel(const Trajectory& traj,
                                                          const TimeDependentObservable& a,
                                                          const EvaluationOptions& options);

inline std::vector<PointEvaluation> evaluate_trajectory(const Trajectory& traj,
                                                        const TimeDependentObservable& a,
                                                        const EvaluationOptions& options) {
    return evaluate_trajectory_parallel(traj, a, options);
}

}  // namespace flucbound
