#pragma once

// Time-dependent Hermitian observables A(t) = sum_k c_k(t) B_k with exact
// analytic coefficient derivatives, so that the partial derivative of A
// carries no discretization error.

#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "flucbound/linalg.hpp"

namespace flucbound {

namespace coeff {

struct Constant {
    double value = 0.0;
};

/// amplitude * cos(omega t + phase)
struct Cosine {
    double amplitude = 1.0;
    double omega = 1.0;
    double phase = 0.0;
};

/// amplitude * sin(omega t + phase)
struct Sine {
    double amplitude = 1.0;
    double omega = 1.0;
    double phase = 0.0;
};

/// amplitude * exp(-rate t)
struct ExponentialDecay {
    double amplitude = 1.0;
    double rate = 0.0;
};

/// sum_k coefficients[k] t^k, degree at most kMaxDegree.
struct Polynomial {
    static constexpr std::size_t kMaxDegree = 8;
    std::vector<double> coefficients;
};

}  // namespace coeff

class CoefficientFunction {
public:
    using Kind = std::variant<coeff::Constant, coeff::Cosine, coeff::Sine,
                              coeff::ExponentialDecay, coeff::Polynomial>;

    CoefficientFunction() : kind_(coeff::Constant{1.0}) {}
    // Throws DomainError on non-finite parameters or polynomial degree > 8.
    CoefficientFunction(Kind kind);  // NOLINT(google-explicit-constructor)
    template <class T>
        requires(std::is_constructible_v<Kind, T &&> &&
                 !std::is_same_v<std::decay_t<T>, CoefficientFunction> &&
                 !std::is_same_v<std::decay_t<T>, Kind>)
    CoefficientFunction(T&& kind)  // NOLINT(google-explicit-constructor)
        : CoefficientFunction(Kind(std::forward<T>(kind))) {}

    double value(double t) const;
    double derivative(double t) const;

    const Kind& kind() const noexcept { return kind_; }
    std::string name() const;
    bool is_constant() const noexcept;

private:
    Kind kind_;
};

class TimeDependentObservable {
public:
    struct Term {
        CoefficientFunction coefficient;
        Matrix basis;
    };

    /// The zero observable on a dim-dimensional space.
    explicit TimeDependentObservable(Eigen::Index dim);
    /// Throws on empty term list, unequal dimensions or non-Hermitian basis matrices.
    explicit TimeDependentObservable(std::vector<Term> terms);

    static TimeDependentObservable constant(const Matrix& m);

    Matrix evaluate(double t) const;
    Matrix partial_time(double t) const;

    Eigen::Index dim() const noexcept { return dim_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool is_time_independent() const noexcept;

private:
    Eigen::Index dim_;
    std::vector<Term> terms_;
};

/// tr(rho (dA/dt)^2)
double squared_partial_expectation(const TimeDependentObservable& a, double t,
                                   const DensityMatrix& rho);

}  // namespace flucbound
