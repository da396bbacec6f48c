#include "flucbound/observables.hpp"

#include <cmath>
#include <sstream>

namespace flucbound {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

bool all_finite(std::initializer_list<double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

CoefficientFunction::CoefficientFunction(Kind kind) : kind_(std::move(kind)) {
    const bool ok = std::visit(
        overloaded{
            [](const coeff::Constant& c) { return all_finite({c.value}); },
            [](const coeff::Cosine& c) { return all_finite({c.amplitude, c.omega, c.phase}); },
            [](const coeff::Sine& c) { return all_finite({c.amplitude, c.omega, c.phase}); },
            [](const coeff::ExponentialDecay& c) { return all_finite({c.amplitude, c.rate}); },
            [](const coeff::Polynomial& p) {
                if (p.coefficients.size() > coeff::Polynomial::kMaxDegree + 1)
                    throw DomainError("polynomial coefficient function: degree exceeds 8");
                for (double c : p.coefficients)
                    if (!std::isfinite(c)) return false;
                return true;
            },
        },
        kind_);
    if (!ok) throw DomainError("coefficient function " + name() + ": non-finite parameter");
}

double CoefficientFunction::value(double t) const {
    return std::visit(
        overloaded{
            [](const coeff::Constant& c) { return c.value; },
            [t](const coeff::Cosine& c) { return c.amplitude * std::cos(c.omega * t + c.phase); },
            [t](const coeff::Sine& c) { return c.amplitude * std::sin(c.omega * t + c.phase); },
            [t](const coeff::ExponentialDecay& c) { return c.amplitude * std::exp(-c.rate * t); },
            [t](const coeff::Polynomial& p) {
                double acc = 0.0;
                for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it)
                    acc = acc * t + *it;
                return acc;
            },
        },
        kind_);
}

double CoefficientFunction::derivative(double t) const {
    return std::visit(
        overloaded{
            [](const coeff::Constant&) { return 0.0; },
            [t](const coeff::Cosine& c) {
                return -c.amplitude * c.omega * std::sin(c.omega * t + c.phase);
            },
            [t](const coeff::Sine& c) {
                return c.amplitude * c.omega * std::cos(c.omega * t + c.phase);
            },
            [t](const coeff::ExponentialDecay& c) {
                return -c.rate * c.amplitude * std::exp(-c.rate * t);
            },
            [t](const coeff::Polynomial& p) {
                double acc = 0.0;
                for (std::size_t k = p.coefficients.size(); k-- > 1;)
                    acc = acc * t + static_cast<double>(k) * p.coefficients[k];
                return acc;
            },
        },
        kind_);
}

std::string CoefficientFunction::name() const {
    return std::visit(overloaded{
                          [](const coeff::Constant&) { return std::string("constant"); },
                          [](const coeff::Cosine&) { return std::string("cosine"); },
                          [](const coeff::Sine&) { return std::string("sine"); },
                          [](const coeff::ExponentialDecay&) {
                              return std::string("exponential_decay");
                          },
                          [](const coeff::Polynomial&) { return std::string("polynomial"); },
                      },
                      kind_);
}

bool CoefficientFunction::is_constant() const noexcept {
    if (std::holds_alternative<coeff::Constant>(kind_)) return true;
    if (const auto* p = std::get_if<coeff::Polynomial>(&kind_)) {
        for (std::size_t k = 1; k < p->coefficients.size(); ++k)
            if (p->coefficients[k] != 0.0) return false;
        return true;
    }
    if (const auto* c = std::get_if<coeff::Cosine>(&kind_)) return c->omega == 0.0 || c->amplitude == 0.0;
    if (const auto* s = std::get_if<coeff::Sine>(&kind_)) return s->omega == 0.0 || s->amplitude == 0.0;
    if (const auto* e = std::get_if<coeff::ExponentialDecay>(&kind_))
        return e->rate == 0.0 || e->amplitude == 0.0;
    return false;
}

TimeDependentObservable::TimeDependentObservable(Eigen::Index dim) : dim_(dim) {
    if (dim < 1) throw DimensionMismatch("observable dimension must be >= 1");
    terms_.push_back({coeff::Constant{0.0}, ops::zero(dim)});
}

TimeDependentObservable::TimeDependentObservable(std::vector<Term> terms)
    : dim_(0), terms_(std::move(terms)) {
    if (terms_.empty()) throw DomainError("observable needs at least one term");
    dim_ = terms_.front().basis.rows();
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const auto label = "observable term " + std::to_string(k);
        require_square(terms_[k].basis, label);
        if (terms_[k].basis.rows() != dim_)
            throw DimensionMismatch(label + ": dimension differs from term 0");
        if (!is_finite(terms_[k].basis)) throw DomainError(label + ": non-finite entries");
        require_hermitian(terms_[k].basis, label);
    }
}

TimeDependentObservable TimeDependentObservable::constant(const Matrix& m) {
    return TimeDependentObservable({{coeff::Constant{1.0}, m}});
}

Matrix TimeDependentObservable::evaluate(double t) const {
    Matrix out = Matrix::Zero(dim_, dim_);
    for (const auto& term : terms_) out += term.coefficient.value(t) * term.basis;
    return out;
}

Matrix TimeDependentObservable::partial_time(double t) const {
    Matrix out = Matrix::Zero(dim_, dim_);
    for (const auto& term : terms_) out += term.coefficient.derivative(t) * term.basis;
    return out;
}

bool TimeDependentObservable::is_time_independent() const noexcept {
    for (const auto& term : terms_)
        if (!term.coefficient.is_constant()) return false;
    return true;
}

double squared_partial_expectation(const TimeDependentObservable& a, double t,
                                   const DensityMatrix& rho) {
    if (a.dim() != rho.dim()) throw DimensionMismatch("squared_partial_expectation");
    const Matrix d = a.partial_time(t);
    return trace(rho.matrix() * d * d).real();
}

}  // namespace flucbound
