#include "flucbound/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace flucbound {

using nlohmann::json;

Matrix JumpSpec::effective() const {
    return rate ? Matrix(std::sqrt(std::max(0.0, *rate)) * matrix) : matrix;
}

KrausChannel ChannelSpec::build() const {
    if (type == Type::amplitude_damping) return amplitude_damping(gamma);
    return KrausChannel(operators);
}

// ---------------------------------------------------------------------------
// JSON decoding. Problems are accumulated rather than thrown so a single load
// reports everything wrong with a file.

namespace {

class Decoder {
public:
    std::vector<std::string> issues;

    void fail(const std::string& path, const std::string& what) {
        issues.push_back(path + ": " + what);
    }

    std::optional<double> number(const json& j, const std::string& key, const std::string& path,
                                 bool required = true) {
        if (!j.contains(key)) {
            if (required) fail(path + "." + key, "missing");
            return std::nullopt;
        }
        const auto& v = j.at(key);
        if (!v.is_number()) {
            fail(path + "." + key, "expected a number");
            return std::nullopt;
        }
        const double x = v.get<double>();
        if (!std::isfinite(x)) {
            fail(path + "." + key, "not finite");
            return std::nullopt;
        }
        return x;
    }

    std::optional<Matrix> matrix(const json& j, const std::string& path, int dim) {
        if (!j.is_object() || !j.contains("re")) {
            fail(path, "expected {\"re\": [[...]], \"im\": [[...]]}");
            return std::nullopt;
        }
        auto grid = [&](const json& g, const std::string& where) -> std::optional<Eigen::MatrixXd> {
            if (!g.is_array() || static_cast<int>(g.size()) != dim) {
                fail(where, "expected " + std::to_string(dim) + " rows");
                return std::nullopt;
            }
            Eigen::MatrixXd out(dim, dim);
            for (int r = 0; r < dim; ++r) {
                const auto& row = g[static_cast<std::size_t>(r)];
                if (!row.is_array() || static_cast<int>(row.size()) != dim) {
                    fail(where + "[" + std::to_string(r) + "]",
                         "expected " + std::to_string(dim) + " columns");
                    return std::nullopt;
                }
                for (int c = 0; c < dim; ++c) {
                    const auto& x = row[static_cast<std::size_t>(c)];
                    if (!x.is_number()) {
                        fail(where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                             "expected a number");
                        return std::nullopt;
                    }
                    out(r, c) = x.get<double>();
                }
            }
            return out;
        };
        const auto re = grid(j.at("re"), path + ".re");
        std::optional<Eigen::MatrixXd> im = Eigen::MatrixXd::Zero(dim, dim);
        if (j.contains("im")) im = grid(j.at("im"), path + ".im");
        if (!re || !im) return std::nullopt;
        Matrix m(dim, dim);
        m.real() = *re;
        m.imag() = *im;
        if (!is_finite(m)) {
            fail(path, "non-finite entries");
            return std::nullopt;
        }
        return m;
    }

    std::optional<CoefficientFunction> function(const json& j, const std::string& path) {
        if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
            fail(path + ".kind", "missing or not a string");
            return std::nullopt;
        }
        const auto kind = j.at("kind").get<std::string>();
        const auto n_before = issues.size();
        std::optional<CoefficientFunction::Kind> k;
        if (kind == "constant") {
            const auto v = number(j, "value", path);
            if (v) k = coeff::Constant{*v};
        } else if (kind == "cosine" || kind == "sine") {
            const auto a = number(j, "amplitude", path);
            const auto w = number(j, "omega", path);
            const auto p = number(j, "phase", path, false);
            if (a && w) {
                if (kind == "cosine")
                    k = coeff::Cosine{*a, *w, p.value_or(0.0)};
                else
                    k = coeff::Sine{*a, *w, p.value_or(0.0)};
            }
        } else if (kind == "exponential_decay") {
            const auto a = number(j, "amplitude", path);
            const auto r = number(j, "rate", path);
            if (a && r) k = coeff::ExponentialDecay{*a, *r};
        } else if (kind == "polynomial") {
            if (!j.contains("coefficients") || !j.at("coefficients").is_array()) {
                fail(path + ".coefficients", "expected an array of numbers");
            } else {
                coeff::Polynomial p;
                for (const auto& c : j.at("coefficients")) {
                    if (!c.is_number()) {
                        fail(path + ".coefficients", "expected an array of numbers");
                        break;
                    }
                    p.coefficients.push_back(c.get<double>());
                }
                if (p.coefficients.size() > coeff::Polynomial::kMaxDegree + 1)
                    fail(path + ".coefficients", "polynomial degree exceeds 8");
                else if (issues.size() == n_before)
                    k = std::move(p);
            }
        } else {
            fail(path + ".kind", "unknown function kind '" + kind + "'");
        }
        if (!k) return std::nullopt;
        try {
            return CoefficientFunction(std::move(*k));
        } catch (const Error& e) {
            fail(path, e.what());
            return std::nullopt;
        }
    }

    std::optional<TimeDependentObservable> observable(const json& j, const std::string& path,
                                                      int dim) {
        if (!j.is_object() || !j.contains("terms") || !j.at("terms").is_array() ||
            j.at("terms").empty()) {
            fail(path + ".terms", "expected a non-empty array");
            return std::nullopt;
        }
        std::vector<TimeDependentObservable::Term> terms;
        bool ok = true;
        for (std::size_t k = 0; k < j.at("terms").size(); ++k) {
            const auto& t = j.at("terms")[k];
            const auto tp = path + ".terms[" + std::to_string(k) + "]";
            if (!t.is_object() || !t.contains("function") || !t.contains("matrix")) {
                fail(tp, "expected {\"function\": ..., \"matrix\": ...}");
                ok = false;
                continue;
            }
            auto f = function(t.at("function"), tp + ".function");
            auto m = matrix(t.at("matrix"), tp + ".matrix", dim);
            if (m && !is_hermitian(*m)) {
                fail(tp + ".matrix", "not Hermitian");
                m.reset();
            }
            if (!f || !m) {
                ok = false;
                continue;
            }
            terms.push_back({std::move(*f), std::move(*m)});
        }
        if (!ok) return std::nullopt;
        return TimeDependentObservable(std::move(terms));
    }
};

json matrix_json(const Matrix& m) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json rr = json::array();
        json ir = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            rr.push_back(m(r, c).real());
            ir.push_back(m(r, c).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ir));
    }
    return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

json function_json(const CoefficientFunction& f) {
    return std::visit(
        overloaded{
            [](const coeff::Constant& c) { return json{{"kind", "constant"}, {"value", c.value}}; },
            [](const coeff::Cosine& c) {
                return json{{"kind", "cosine"},
                            {"amplitude", c.amplitude},
                            {"omega", c.omega},
                            {"phase", c.phase}};
            },
            [](const coeff::Sine& c) {
                return json{{"kind", "sine"},
                            {"amplitude", c.amplitude},
                            {"omega", c.omega},
                            {"phase", c.phase}};
            },
            [](const coeff::ExponentialDecay& c) {
                return json{{"kind", "exponential_decay"}, {"amplitude", c.amplitude}, {"rate", c.rate}};
            },
            [](const coeff::Polynomial& p) {
                return json{{"kind", "polynomial"}, {"coefficients", p.coefficients}};
            },
        },
        f.kind());
}

json observable_json(const TimeDependentObservable& a) {
    json terms = json::array();
    for (const auto& t : a.terms())
        terms.push_back(json{{"function", function_json(t.coefficient)}, {"matrix", matrix_json(t.basis)}});
    return json{{"terms", std::move(terms)}};
}

std::vector<std::string> bound_names(const BoundSelection& b) {
    std::vector<std::string> out;
    if (b.open) out.emplace_back("open");
    if (b.closed) out.emplace_back("closed");
    if (b.eq36) out.emplace_back("eq36");
    if (b.cauchy_schwarz) out.emplace_back("cauchy_schwarz");
    return out;
}

}  // namespace

std::vector<std::string> validate(const ScenarioSpec& spec) {
    std::vector<std::string> issues;
    const auto dim = static_cast<Eigen::Index>(spec.dimension);
    if (spec.dimension < 1) {
        issues.emplace_back("dimension: must be >= 1");
        return issues;
    }
    if (spec.name.empty()) issues.emplace_back("name: must not be empty");

    if (spec.initial_state.rows() != dim || spec.initial_state.cols() != dim) {
        issues.emplace_back("initial_state: dimension mismatch");
    } else {
        for (const auto& v : DensityMatrix::violations(spec.initial_state)) {
            std::string detail;
            if (v == "trace") {
                std::ostringstream os;
                os << " (tr = " << trace(spec.initial_state).real() << ")";
                detail = os.str();
            }
            issues.push_back("initial_state: " + v + detail);
        }
    }
    if (spec.hamiltonian && spec.hamiltonian->dim() != dim)
        issues.emplace_back("hamiltonian: dimension mismatch");
    for (std::size_t k = 0; k < spec.jump_operators.size(); ++k) {
        const auto& j = spec.jump_operators[k];
        const auto p = "jump_operators[" + std::to_string(k) + "]";
        if (j.matrix.rows() != dim || j.matrix.cols() != dim)
            issues.push_back(p + ".matrix: dimension mismatch");
        else if (!is_finite(j.matrix))
            issues.push_back(p + ".matrix: non-finite entries");
        if (j.rate && !(*j.rate >= 0.0 && std::isfinite(*j.rate)))
            issues.push_back(p + ".rate: must be finite and >= 0");
    }
    if (spec.channel) {
        if (spec.channel->type == ChannelSpec::Type::amplitude_damping) {
            if (dim != 2) issues.emplace_back("channel: amplitude_damping needs dimension 2");
            if (!(spec.channel->gamma >= 0.0 && spec.channel->gamma <= 1.0))
                issues.emplace_back("channel.gamma: must lie in [0, 1]");
        } else {
            bool dims_ok = !spec.channel->operators.empty();
            for (const auto& e : spec.channel->operators)
                dims_ok = dims_ok && e.rows() == dim && e.cols() == dim;
            if (!dims_ok)
                issues.emplace_back("channel.operators: dimension mismatch");
            else if (completeness_residual(std::span<const Matrix>(spec.channel->operators)) >
                     kKrausTolerance)
                issues.emplace_back("channel.operators: completeness violated");
        }
    }
    if (spec.observable.dim() != dim) issues.emplace_back("observable: dimension mismatch");
    if (!(spec.dt > 0.0) || !std::isfinite(spec.dt)) issues.emplace_back("dt: must be > 0");
    if (!(spec.t_max >= 10.0 * spec.dt) || !std::isfinite(spec.t_max))
        issues.emplace_back("t_max: must be >= 10 dt");
    if (spec.rho_dot_mode == RhoDotMode::automatic)
        issues.emplace_back("rho_dot_mode: must be analytic or finite_difference");
    return issues;
}

ScenarioSpec parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError({std::string("parse: ") + e.what()});
    }
    if (!j.is_object()) throw ScenarioError({"parse: top level must be an object"});

    Decoder d;
    ScenarioSpec spec;

    if (j.contains("name") && j.at("name").is_string())
        spec.name = j.at("name").get<std::string>();
    else
        d.fail("name", "missing or not a string");

    if (!j.contains("dimension") || !j.at("dimension").is_number_integer() ||
        j.at("dimension").get<int>() < 1) {
        d.fail("dimension", "missing or not a positive integer");
        throw ScenarioError(d.issues);
    }
    spec.dimension = j.at("dimension").get<int>();
    const int dim = spec.dimension;

    if (j.contains("initial_state")) {
        if (auto m = d.matrix(j.at("initial_state"), "initial_state", dim)) spec.initial_state = *m;
    } else {
        d.fail("initial_state", "missing");
    }

    if (j.contains("hamiltonian") && !j.at("hamiltonian").is_null())
        spec.hamiltonian = d.observable(j.at("hamiltonian"), "hamiltonian", dim);

    if (j.contains("jump_operators")) {
        const auto& arr = j.at("jump_operators");
        if (!arr.is_array()) {
            d.fail("jump_operators", "expected an array");
        } else {
            for (std::size_t k = 0; k < arr.size(); ++k) {
                const auto p = "jump_operators[" + std::to_string(k) + "]";
                const auto& e = arr[k];
                // Either {"matrix": M, "rate": r} or a bare matrix {"re": ..., "im": ...}.
                const bool wrapped = e.is_object() && e.contains("matrix");
                auto m = d.matrix(wrapped ? e.at("matrix") : e, wrapped ? p + ".matrix" : p, dim);
                JumpSpec js;
                if (wrapped && e.contains("rate")) {
                    js.rate = d.number(e, "rate", p);
                    if (js.rate && *js.rate < 0.0) d.fail(p + ".rate", "must be >= 0");
                }
                if (m) {
                    js.matrix = *m;
                    spec.jump_operators.push_back(std::move(js));
                }
            }
        }
    }

    if (j.contains("channel") && !j.at("channel").is_null()) {
        const auto& c = j.at("channel");
        const auto type = c.is_object() && c.contains("type") && c.at("type").is_string()
                              ? c.at("type").get<std::string>()
                              : std::string();
        ChannelSpec ch;
        if (type == "amplitude_damping") {
            ch.type = ChannelSpec::Type::amplitude_damping;
            if (auto g = d.number(c, "gamma", "channel")) {
                ch.gamma = *g;
                spec.channel = ch;
            }
        } else if (type == "kraus") {
            ch.type = ChannelSpec::Type::kraus;
            if (!c.contains("operators") || !c.at("operators").is_array()) {
                d.fail("channel.operators", "expected an array of matrices");
            } else {
                for (std::size_t k = 0; k < c.at("operators").size(); ++k)
                    if (auto m = d.matrix(c.at("operators")[k],
                                          "channel.operators[" + std::to_string(k) + "]", dim))
                        ch.operators.push_back(*m);
                spec.channel = ch;
            }
        } else {
            d.fail("channel.type", "expected \"amplitude_damping\" or \"kraus\"");
        }
    }

    if (j.contains("observable")) {
        if (auto a = d.observable(j.at("observable"), "observable", dim)) spec.observable = *a;
    } else {
        d.fail("observable", "missing");
    }

    if (auto v = d.number(j, "t_max", "scenario")) spec.t_max = *v;
    if (auto v = d.number(j, "dt", "scenario")) spec.dt = *v;

    spec.bounds = BoundSelection{false, false, false, false};
    if (j.contains("bounds")) {
        const auto& b = j.at("bounds");
        if (!b.is_array()) d.fail("bounds", "expected an array");
        for (const auto& name : b) {
            const auto s = name.is_string() ? name.get<std::string>() : std::string();
            if (s == "open") spec.bounds.open = true;
            else if (s == "closed") spec.bounds.closed = true;
            else if (s == "eq36") spec.bounds.eq36 = true;
            else if (s == "cauchy_schwarz") spec.bounds.cauchy_schwarz = true;
            else d.fail("bounds", "unknown bound '" + s + "'");
        }
    } else {
        spec.bounds = BoundSelection{};
    }

    spec.rho_dot_mode = RhoDotMode::analytic;
    if (j.contains("rho_dot_mode")) {
        const auto& m = j.at("rho_dot_mode");
        const auto s = m.is_string() ? m.get<std::string>() : std::string();
        if (s == "analytic") spec.rho_dot_mode = RhoDotMode::analytic;
        else if (s == "finite_difference") spec.rho_dot_mode = RhoDotMode::finite_difference;
        else d.fail("rho_dot_mode", "expected \"analytic\" or \"finite_difference\"");
    }

    // Invariant violations are reported too, except on fields that already
    // failed to decode.
    const auto field_of = [](const std::string& issue) {
        const auto end = issue.find_first_of(":.[");
        return issue.substr(0, end);
    };
    std::vector<std::string> failed;
    for (const auto& i : d.issues) failed.push_back(field_of(i));
    for (auto& i : validate(spec)) {
        if (std::find(failed.begin(), failed.end(), field_of(i)) == failed.end())
            d.issues.push_back(std::move(i));
    }
    if (!d.issues.empty()) throw ScenarioError(d.issues);
    return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("io_error", "cannot open scenario file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string serialize_scenario(const ScenarioSpec& spec) {
    json j;
    j["name"] = spec.name;
    j["dimension"] = spec.dimension;
    j["initial_state"] = matrix_json(spec.initial_state);
    j["hamiltonian"] = spec.hamiltonian ? observable_json(*spec.hamiltonian) : json(nullptr);
    json jumps = json::array();
    for (const auto& js : spec.jump_operators) {
        json e{{"matrix", matrix_json(js.matrix)}};
        if (js.rate) e["rate"] = *js.rate;
        jumps.push_back(std::move(e));
    }
    j["jump_operators"] = std::move(jumps);
    if (spec.channel) {
        if (spec.channel->type == ChannelSpec::Type::amplitude_damping) {
            j["channel"] = json{{"type", "amplitude_damping"}, {"gamma", spec.channel->gamma}};
        } else {
            json opsj = json::array();
            for (const auto& e : spec.channel->operators) opsj.push_back(matrix_json(e));
            j["channel"] = json{{"type", "kraus"}, {"operators", std::move(opsj)}};
        }
    }
    j["observable"] = observable_json(spec.observable);
    j["t_max"] = spec.t_max;
    j["dt"] = spec.dt;
    j["bounds"] = bound_names(spec.bounds);
    j["rho_dot_mode"] =
        spec.rho_dot_mode == RhoDotMode::finite_difference ? "finite_difference" : "analytic";
    return j.dump(2) + "\n";
}

LindbladModel model_of(const ScenarioSpec& spec) {
    const auto dim = static_cast<Eigen::Index>(spec.dimension);
    std::vector<Matrix> jumps;
    for (const auto& js : spec.jump_operators) jumps.push_back(js.effective());
    return LindbladModel(spec.hamiltonian ? *spec.hamiltonian : TimeDependentObservable(dim),
                         std::move(jumps));
}

DensityMatrix initial_state_of(const ScenarioSpec& spec) {
    DensityMatrix rho(spec.initial_state);
    if (spec.channel) return spec.channel->build().apply(rho);
    return rho;
}

// ---------------------------------------------------------------------------
// Built-in reproductions.

std::vector<std::string> builtin_names() { return {"example1", "example2", "appendixC"}; }

ScenarioSpec builtin_scenario(std::string_view name, const BuiltinOverrides& overrides) {
    const double rate = overrides.gamma.value_or(1.0);
    ScenarioSpec spec;
    spec.name = std::string(name);
    spec.dimension = 2;
    spec.initial_state = ops::ket_bra(1, 1, 2);
    spec.jump_operators.push_back({ops::sigma_minus(), rate});
    spec.dt = 1e-3;
    spec.rho_dot_mode = RhoDotMode::analytic;

    if (name == "example1") {
        spec.observable = TimeDependentObservable::constant(ops::sigma_z());
        spec.t_max = 5.0;
        spec.bounds = BoundSelection{true, false, true, true};
    } else if (name == "example2") {
        spec.hamiltonian = TimeDependentObservable({{coeff::Constant{0.5}, ops::sigma_z()}});
        spec.observable = TimeDependentObservable({{coeff::Cosine{1.0, 1.0, 0.0}, ops::sigma_x()},
                                                   {coeff::Sine{1.0, 1.0, 0.0}, ops::sigma_y()}});
        spec.t_max = 5.0;
        spec.bounds = BoundSelection{true, false, true, true};
    } else if (name == "appendixC") {
        spec.observable = TimeDependentObservable::constant(ops::sigma_z());
        spec.t_max = 3.0;
        spec.bounds = BoundSelection{true, true, true, true};
    } else {
        throw DomainError("unknown builtin scenario '" + std::string(name) + "'");
    }
    BuiltinOverrides rest = overrides;
    rest.gamma.reset();
    apply_overrides(spec, rest);
    return spec;
}

void apply_override(ScenarioSpec& spec, std::string_view param, double value) {
    if (!std::isfinite(value)) throw DomainError("override value must be finite");
    if (param == "dt") {
        spec.dt = value;
    } else if (param == "t_max" || param == "t-max") {
        spec.t_max = value;
    } else if (param == "gamma") {
        if (value < 0.0) throw DomainError("gamma must be >= 0");
        bool any = false;
        for (auto& js : spec.jump_operators)
            if (js.rate) {
                js.rate = value;
                any = true;
            }
        if (!any) throw DomainError("gamma override: scenario has no rated jump operator");
    } else if (param == "omega") {
        if (!spec.hamiltonian) {
            if (spec.dimension != 2)
                throw DomainError("omega override: scenario has no Hamiltonian to scale");
            spec.hamiltonian =
                TimeDependentObservable({{coeff::Constant{value / 2.0}, ops::sigma_z()}});
            return;
        }
        const auto& terms = spec.hamiltonian->terms();
        if (terms.size() != 1 || !std::holds_alternative<coeff::Constant>(terms[0].coefficient.kind()))
            throw DomainError("omega override needs a single constant Hamiltonian term");
        spec.hamiltonian = TimeDependentObservable({{coeff::Constant{value / 2.0}, terms[0].basis}});
    } else {
        throw DomainError("unknown parameter '" + std::string(param) + "'");
    }
}

void apply_overrides(ScenarioSpec& spec, const BuiltinOverrides& overrides) {
    if (overrides.dt) apply_override(spec, "dt", *overrides.dt);
    if (overrides.t_max) apply_override(spec, "t_max", *overrides.t_max);
    if (overrides.gamma) apply_override(spec, "gamma", *overrides.gamma);
    if (overrides.omega) apply_override(spec, "omega", *overrides.omega);
}

// ---------------------------------------------------------------------------
// Execution.

double eq36_tolerance(double dt) { return 10.0 * dt * dt; }

namespace {

ResultRow to_row(const PointEvaluation& p) {
    ResultRow r;
    r.t = p.stats.t;
    r.mean = p.stats.mean;
    r.sigma = p.stats.sigma;
    r.sigma_sq = p.stats.variance;
    r.var_rate = p.stats.var_rate;
    if (p.open && !p.open->skipped) {
        r.lhs_open = p.open->lhs;
        r.rhs_open = p.open->rhs;
        r.margin_open = p.open->margin;
    } else {
        r.skipped_flags |= skipped::open;
    }
    if (p.closed && !p.closed->skipped) {
        r.lhs_closed = p.closed->lhs;
        r.rhs_closed = p.closed->rhs;
        r.margin_closed = p.closed->margin;
    } else {
        r.skipped_flags |= skipped::closed;
    }
    if (p.eq36_residual)
        r.eq36_residual = *p.eq36_residual;
    else
        r.skipped_flags |= skipped::eq36;
    return r;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioSpec& spec) {
    if (auto issues = validate(spec); !issues.empty()) throw ScenarioError(std::move(issues));

    const LindbladModel model = model_of(spec);
    const DensityMatrix rho0 = initial_state_of(spec);

    ScenarioResult result;
    std::optional<Trajectory> traj;
    if (const auto ad = match_amplitude_damping(model)) {
        traj = analytic_amplitude_damping_trajectory(rho0, ad->rate, ad->omega, spec.t_max, spec.dt);
        result.used_closed_form = true;
    } else {
        traj = integrate(model, rho0, spec.t_max, spec.dt);
    }

    EvaluationOptions options;
    options.bounds = spec.bounds;
    options.rho_dot_mode = spec.rho_dot_mode;
    // Rows carry the variance statistics even when no bound is requested.
    result.points = evaluate_trajectory(*traj, spec.observable, options);
    result.rows.reserve(result.points.size());
    for (const auto& p : result.points) result.rows.push_back(to_row(p));
    return result;
}

namespace {

std::vector<ScenarioSpec> sweep_specs(const ScenarioSpec& base, std::string_view param,
                                      const std::vector<double>& values) {
    std::vector<ScenarioSpec> specs;
    specs.reserve(values.size());
    for (double v : values) {
        ScenarioSpec s = base;
        apply_override(s, param, v);
        specs.push_back(std::move(s));
    }
    return specs;
}

}  // namespace

std::vector<ScenarioResult> run_sweep_serial(const ScenarioSpec& base, std::string_view param,
                                             const std::vector<double>& values) {
    std::vector<ScenarioResult> out;
    for (const auto& s : sweep_specs(base, param, values)) out.push_back(run_scenario(s));
    return out;
}

std::vector<ScenarioResult> run_sweep(const ScenarioSpec& base, std::string_view param,
                                      const std::vector<double>& values) {
    const auto specs = sweep_specs(base, param, values);
    const auto n = static_cast<std::ptrdiff_t>(specs.size());
    std::vector<ScenarioResult> out(specs.size());
    std::vector<std::exception_ptr> failures(specs.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(std::max<std::ptrdiff_t>(n, 1)))
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k] = run_scenario(specs[k]);
        } catch (...) {
            failures[k] = std::current_exception();
        }
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    return out;
}

VerifyOutcome verify(const ScenarioSpec& spec, const ScenarioResult& result) {
    VerifyOutcome v;
    const double eq36_tol = eq36_tolerance(spec.dt);
    auto check = [&](double t, const char* bound, double margin) {
        ++v.checked;
        if (margin >= -kBoundTolerance) return;
        if (v.passed) v.first_violation = Violation{t, bound, margin};
        v.passed = false;
    };
    for (const auto& p : result.points) {
        const double t = p.stats.t;
        if (spec.bounds.open && p.open) {
            if (p.open->skipped) ++v.skipped;
            else check(t, "open", p.open->margin);
        }
        if (spec.bounds.closed && p.closed) {
            if (p.closed->skipped) ++v.skipped;
            else check(t, "closed", p.closed->margin);
        }
        if (spec.bounds.eq36 && p.eq36_residual) check(t, "eq36", eq36_tol - *p.eq36_residual);
        if (spec.bounds.cauchy_schwarz && p.cauchy_schwarz_margin)
            check(t, "cauchy_schwarz", *p.cauchy_schwarz_margin);
    }
    return v;
}

// ---------------------------------------------------------------------------
// CSV.

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.11e", x);
    return buf;
}

std::string format_csv(const std::vector<ResultRow>& rows) {
    std::string out(kResultHeader);
    out += '\n';
    for (const auto& r : rows) {
        for (double x : {r.t, r.mean, r.sigma, r.sigma_sq, r.var_rate, r.lhs_open, r.rhs_open,
                         r.margin_open, r.lhs_closed, r.rhs_closed, r.margin_closed,
                         r.eq36_residual}) {
            out += format_real(x);
            out += ',';
        }
        out += std::to_string(r.skipped_flags);
        out += '\n';
    }
    return out;
}

std::vector<Figure1Point> figure1_curves(double rate, double t_max, double dt) {
    if (!(rate > 0.0)) throw DomainError("figure1_curves: rate must be > 0");
    if (!(dt > 0.0) || !(t_max >= dt)) throw DomainError("figure1_curves: need 0 < dt <= t_max");
    const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));
    std::vector<Figure1Point> out;
    out.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        Figure1Point p;
        p.t = static_cast<double>(k) * dt;
        const double u = std::exp(-rate * p.t);       // population of |1>
        const double gamma = -std::expm1(-rate * p.t);  // 1 - u
        p.mu = 1.0 - 2.0 * u;
        p.sigma = 2.0 * std::exp(-0.5 * rate * p.t) * std::sqrt(gamma);
        p.v = 2.0 * rate * std::exp(-0.5 * rate * p.t);
        const double mu_dot = 2.0 * rate * u;
        // d sigma/dt = -rate u (1 - 2u) / sqrt(u (1 - u)); unbounded at t = 0.
        const double denom = std::sqrt(u * gamma);
        const double sigma_dot = denom > 0.0 ? -rate * u * (1.0 - 2.0 * u) / denom : INFINITY;
        p.arrow_sq = mu_dot * mu_dot + sigma_dot * sigma_dot;
        p.v_sq = p.v * p.v;
        p.inside = p.arrow_sq <= p.v_sq;
        out.push_back(p);
    }
    return out;
}

std::string format_figure1_csv(const std::vector<Figure1Point>& points) {
    std::string out(kFigure1Header);
    out += '\n';
    for (const auto& p : points) {
        for (double x : {p.t, p.mu, p.sigma, p.v, p.arrow_sq, p.v_sq}) {
            out += format_real(x);
            out += ',';
        }
        out += p.inside ? "1\n" : "0\n";
    }
    return out;
}

}  // namespace flucbound
