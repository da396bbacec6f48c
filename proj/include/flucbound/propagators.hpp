#pragma once

// Short-time propagators U(t0 + dt, t0) for a (possibly time-dependent)
// Hamiltonian: truncated Taylor and Dyson expansions, and the exact
// exponential baseline for time-independent generators.

#include <string_view>
#include <vector>

#include "flucbound/linalg.hpp"
#include "flucbound/observables.hpp"

namespace flucbound {

enum class PropagatorScheme { exact, taylor1, taylor2, dyson1, dyson2 };

std::string_view to_string(PropagatorScheme scheme);

struct PropagatorStep {
    Matrix matrix;
    PropagatorScheme scheme;
    double t_begin;
    double t_end;
};

inline constexpr int kDefaultQuadraturePoints = 16;

/// Gauss-Legendre nodes and weights on [0, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
QuadratureRule gauss_legendre_unit(int points);

/// exp(-i H dt). Requires a time-independent H.
PropagatorStep exact_propagator(const TimeDependentObservable& h, double t0, double dt);

/// order 1: I - i H(t0) dt
/// order 2: adds (-i H'(t0) + (-i H(t0))^2) dt^2 / 2, H' from exact coefficient derivatives.
PropagatorStep taylor_propagator(const TimeDependentObservable& h, double t0, double dt,
                                 int order);

/// I + (1/i) int H + (1/i)^2 int_{t2 <= t1} H(t1) H(t2), truncated at `order`.
/// The triangle is mapped onto the unit square (t1 = dt u, t2 = t1 v) and both
/// axes use quad_points Gauss-Legendre nodes.
PropagatorStep dyson_propagator(const TimeDependentObservable& h, double t0, double dt,
                                int order, int quad_points = kDefaultQuadraturePoints);

/// int_{t0}^{t0+dt} H(t) dt by the same quadrature the Dyson propagator uses.
Matrix dyson_first_order_integral(const TimeDependentObservable& h, double t0, double dt,
                                  int quad_points = kDefaultQuadraturePoints);

}  // namespace flucbound
