#include "flucbound/propagators.hpp"

#include <cmath>
#include <numbers>

namespace flucbound {

std::string_view to_string(PropagatorScheme scheme) {
    switch (scheme) {
        case PropagatorScheme::exact: return "exact";
        case PropagatorScheme::taylor1: return "taylor1";
        case PropagatorScheme::taylor2: return "taylor2";
        case PropagatorScheme::dyson1: return "dyson1";
        case PropagatorScheme::dyson2: return "dyson2";
    }
    return "unknown";
}

QuadratureRule gauss_legendre_unit(int points) {
    if (points < 2) throw DomainError("Gauss-Legendre quadrature needs >= 2 points");
    const auto n = static_cast<std::size_t>(points);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);

    // Newton iteration on P_n from the Chebyshev-like initial guess; nodes on
    // [-1, 1] are then mapped to [0, 1].
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node for the weight.
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double kk = static_cast<double>(k);
            const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
            p0 = p1;
            p1 = p2;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);

        rule.nodes[i] = 0.5 * (1.0 - x);
        rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = 0.5 * w;
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

PropagatorStep exact_propagator(const TimeDependentObservable& h, double t0, double dt) {
    if (!h.is_time_independent())
        throw DomainError("exact_propagator requires a time-independent Hamiltonian");
    return {matrix_exponential_antihermitian(h.evaluate(t0), dt), PropagatorScheme::exact, t0,
            t0 + dt};
}

PropagatorStep taylor_propagator(const TimeDependentObservable& h, double t0, double dt,
                                 int order) {
    if (order != 1 && order != 2) throw DomainError("taylor_propagator: order must be 1 or 2");
    if (!(dt >= 0.0)) throw DomainError("taylor_propagator: dt must be >= 0");
    const auto n = h.dim();
    const Matrix h0 = h.evaluate(t0);
    Matrix u = ops::identity(n) - kI * dt * h0;
    if (order == 2) {
        const Matrix hdot = h.partial_time(t0);
        u += (-kI * hdot - h0 * h0) * (0.5 * dt * dt);
    }
    return {u, order == 1 ? PropagatorScheme::taylor1 : PropagatorScheme::taylor2, t0, t0 + dt};
}

Matrix dyson_first_order_integral(const TimeDependentObservable& h, double t0, double dt,
                                  int quad_points) {
    const auto rule = gauss_legendre_unit(quad_points);
    Matrix acc = Matrix::Zero(h.dim(), h.dim());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * h.evaluate(t0 + dt * rule.nodes[i]);
    return dt * acc;
}

PropagatorStep dyson_propagator(const TimeDependentObservable& h, double t0, double dt,
                                int order, int quad_points) {
    if (order != 1 && order != 2) throw DomainError("dyson_propagator: order must be 1 or 2");
    if (!(dt >= 0.0)) throw DomainError("dyson_propagator: dt must be >= 0");
    const auto n = h.dim();
    const auto rule = gauss_legendre_unit(quad_points);

    std::vector<Matrix> outer;
    outer.reserve(rule.nodes.size());
    for (double u : rule.nodes) outer.push_back(h.evaluate(t0 + dt * u));

    Matrix first = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < outer.size(); ++i) first += rule.weights[i] * outer[i];
    first *= dt;

    Matrix out = ops::identity(n) - kI * first;
    if (order == 2) {
        // int_0^dt dt1 int_0^t1 dt2 H(t1) H(t2), with t1 = dt u, t2 = t1 v:
        // Jacobian dt * t1 = dt^2 u.
        Matrix second = Matrix::Zero(n, n);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double t1 = dt * rule.nodes[i];
            Matrix inner = Matrix::Zero(n, n);
            for (std::size_t j = 0; j < rule.nodes.size(); ++j)
                inner += rule.weights[j] * h.evaluate(t0 + t1 * rule.nodes[j]);
            second += (rule.weights[i] * rule.nodes[i]) * (outer[i] * inner);
        }
        out -= (dt * dt) * second;
    }
    return {out, order == 1 ? PropagatorScheme::dyson1 : PropagatorScheme::dyson2, t0, t0 + dt};
}

}  // namespace flucbound
