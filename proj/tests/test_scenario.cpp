#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "flucbound/scenario.hpp"
#include "test_support.hpp"

using namespace flucbound;
using namespace flucbound::testing;
using nlohmann::json;

namespace {

std::vector<std::string> issues_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ScenarioError& e) {
        return e.issues();
    }
    return {};
}

bool any_contains(const std::vector<std::string>& issues, const std::string& needle) {
    for (const auto& s : issues)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("builtin scenarios round-trip through serialize and parse") {
    for (const auto& name : builtin_names()) {
        const auto spec = builtin_scenario(name);
        const auto text = serialize_scenario(spec);
        const auto back = parse_scenario(text);
        CHECK(serialize_scenario(back) == text);
        CHECK(back.name == spec.name);
        CHECK(back.dt == spec.dt);
        CHECK(back.t_max == spec.t_max);
        CHECK(max_abs_diff(back.initial_state, spec.initial_state) == 0.0);
    }
    // Doubles survive exactly, including ones without a short decimal form.
    auto spec = builtin_scenario("example1");
    spec.dt = 1.0 / 3.0 * 1e-3;
    spec.jump_operators[0].rate = std::numbers::pi;
    const auto back = parse_scenario(serialize_scenario(spec));
    CHECK(back.dt == spec.dt);
    CHECK(*back.jump_operators[0].rate == std::numbers::pi);
}

TEST_CASE("committed scenario files match the builtins") {
    for (const auto& name : builtin_names()) {
        const std::string path = std::string(FLUCBOUND_SOURCE_DIR) + "/scenarios/" + name + ".json";
        CHECK_MESSAGE(read_file(path) == serialize_scenario(builtin_scenario(name)), path);
        CHECK(serialize_scenario(load_scenario(path)) == serialize_scenario(builtin_scenario(name)));
    }
}

TEST_CASE("invalid scenarios are rejected with named diagnostics") {
    json j = json::parse(serialize_scenario(builtin_scenario("example1")));

    json bad_trace = j;
    bad_trace["initial_state"]["re"][1][1] = 0.9;
    const auto trace_issues = issues_of(bad_trace.dump());
    REQUIRE_FALSE(trace_issues.empty());
    CHECK(any_contains(trace_issues, "initial_state: trace"));

    json bad_rate = j;
    bad_rate["jump_operators"][0]["rate"] = -1.0;
    CHECK(any_contains(issues_of(bad_rate.dump()), "jump_operators[0].rate"));

    // Every violated invariant is listed, not just the first.
    json several = bad_trace;
    several["jump_operators"][0]["rate"] = -1.0;
    several["dt"] = -0.1;
    const auto many = issues_of(several.dump());
    CHECK(any_contains(many, "trace"));
    CHECK(any_contains(many, "rate"));
    CHECK(any_contains(many, "dt"));

    json short_run = j;
    short_run["t_max"] = 5e-3;
    CHECK(any_contains(issues_of(short_run.dump()), "t_max"));

    json no_obs = j;
    no_obs.erase("observable");
    CHECK(any_contains(issues_of(no_obs.dump()), "observable"));

    json bad_bound = j;
    bad_bound["bounds"] = {"open", "bogus"};
    CHECK(any_contains(issues_of(bad_bound.dump()), "bogus"));

    json non_herm = j;
    non_herm["observable"]["terms"][0]["matrix"]["re"][0][1] = 1.0;
    CHECK(any_contains(issues_of(non_herm.dump()), "observable"));

    CHECK(any_contains(issues_of("{not json"), "parse"));
    CHECK(any_contains(issues_of("[1, 2]"), "parse"));
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), Error);
}

TEST_CASE("preparation channel is applied to the initial state") {
    auto spec = builtin_scenario("example1");
    spec.channel = ChannelSpec{ChannelSpec::Type::amplitude_damping, 0.25, {}};
    const auto back = parse_scenario(serialize_scenario(spec));
    REQUIRE(back.channel.has_value());
    CHECK(initial_state_of(back)(1, 1).real() == doctest::Approx(0.75));

    json j = json::parse(serialize_scenario(spec));
    j["channel"]["gamma"] = 1.5;
    CHECK(any_contains(issues_of(j.dump()), "channel.gamma"));
}

TEST_CASE("run_scenario examples") {
    const auto ex1 = run_scenario(builtin_scenario("example1"));
    CHECK(ex1.used_closed_form);
    REQUIRE(ex1.rows.size() == 4999);
    for (const auto& r : ex1.rows) {
        if (r.skipped_flags & skipped::open) continue;
        CHECK(std::abs(r.rhs_open - 2.0 * r.lhs_open) <= 1e-8);
        CHECK((r.skipped_flags & skipped::closed) != 0U);
    }

    const auto ex2 = run_scenario(builtin_scenario("example2"));
    for (const auto& r : ex2.rows) {
        CHECK(std::abs(r.lhs_open) <= 1e-8);
        CHECK(std::abs(r.rhs_open - 2.0) <= 1e-8);
    }

    const auto spec_c = builtin_scenario("appendixC");
    const auto ac = run_scenario(spec_c);
    const double t_star = std::log(4.0 / 3.0);
    std::size_t sign_changes = 0;
    for (std::size_t i = 1; i < ac.rows.size(); ++i) {
        if ((ac.rows[i - 1].margin_closed < 0) != (ac.rows[i].margin_closed < 0)) {
            ++sign_changes;
            CHECK(ac.rows[i - 1].t <= t_star + 1e-12);
            CHECK(ac.rows[i].t >= t_star - spec_c.dt);
        }
    }
    CHECK(sign_changes == 1);
}

TEST_CASE("integrated path agrees with the closed-form path") {
    auto spec = builtin_scenario("example1", {.dt = 1e-3, .t_max = 1.0, .gamma = {}, .omega = {}});
    const auto closed_form = run_scenario(spec);
    // Splitting the jump into two halves leaves the dissipator unchanged but
    // is not recognized as amplitude damping, so it goes through the integrator.
    spec.jump_operators[0].rate = 0.5;
    spec.jump_operators.push_back(spec.jump_operators[0]);
    const auto integrated = run_scenario(spec);
    CHECK(closed_form.used_closed_form);
    CHECK_FALSE(integrated.used_closed_form);
    REQUIRE(closed_form.rows.size() == integrated.rows.size());
    for (std::size_t i = 0; i < closed_form.rows.size(); i += 50) {
        CHECK(std::abs(closed_form.rows[i].mean - integrated.rows[i].mean) <= 1e-8);
        CHECK(std::abs(closed_form.rows[i].lhs_open - integrated.rows[i].lhs_open) <=
              1e-6 * std::max(1.0, closed_form.rows[i].lhs_open));
    }
}

TEST_CASE("run_scenario is deterministic and CSV is byte-stable") {
    const auto spec = builtin_scenario("example2", {.dt = 1e-2, .t_max = 2.0, .gamma = {}, .omega = {}});
    const auto a = format_csv(run_scenario(spec).rows);
    const auto b = format_csv(run_scenario(spec).rows);
    CHECK(a == b);
    CHECK(a.rfind(std::string(kResultHeader) + "\n", 0) == 0);
    CHECK(a.find('\r') == std::string::npos);
    CHECK(a.back() == '\n');

    std::istringstream lines(a);
    std::string header;
    std::getline(lines, header);
    std::string row;
    std::getline(lines, row);
    CHECK(std::count(row.begin(), row.end(), ',') == 12);
}

TEST_CASE("format_real uses 12 significant digits in scientific notation") {
    CHECK(format_real(1.0) == "1.00000000000e+00");
    CHECK(format_real(-0.000123456789012345) == "-1.23456789012e-04");
    CHECK(format_real(0.0) == "0.00000000000e+00");
}

TEST_CASE("ResultRow flags") {
    auto spec = builtin_scenario("example1", {.dt = 1e-2, .t_max = 1.0, .gamma = {}, .omega = {}});
    spec.bounds = {true, false, false, false};
    const auto result = run_scenario(spec);
    for (const auto& r : result.rows) {
        CHECK((r.skipped_flags & skipped::closed) != 0U);
        CHECK((r.skipped_flags & skipped::eq36) != 0U);
        CHECK((r.skipped_flags & skipped::open) == 0U);
    }
}

TEST_CASE("overrides") {
    const auto spec = builtin_scenario("example1", {.dt = 2e-3, .t_max = 3.0, .gamma = 0.5, .omega = {}});
    CHECK(spec.dt == 2e-3);
    CHECK(spec.t_max == 3.0);
    CHECK(*spec.jump_operators[0].rate == 0.5);
    CHECK_FALSE(spec.hamiltonian.has_value());

    const auto with_h = builtin_scenario("example1", {.dt = {}, .t_max = {}, .gamma = {}, .omega = 2.0});
    REQUIRE(with_h.hamiltonian.has_value());
    CHECK(max_abs_diff(with_h.hamiltonian->evaluate(0.0), ops::sigma_z()) == 0.0);

    auto ex2 = builtin_scenario("example2");
    apply_override(ex2, "omega", 3.0);
    CHECK(max_abs_diff(ex2.hamiltonian->evaluate(0.0), 1.5 * ops::sigma_z()) == 0.0);
    apply_override(ex2, "t-max", 1.0);
    CHECK(ex2.t_max == 1.0);
    CHECK_THROWS_AS(apply_override(ex2, "bogus", 1.0), Error);
    apply_override(ex2, "dt", -1.0);
    CHECK_THROWS_AS(run_scenario(ex2), ScenarioError);
    CHECK_THROWS_AS(builtin_scenario("figure2"), Error);
}

TEST_CASE("sweep: parallel equals serial and values land in order") {
    const auto base = builtin_scenario("example1", {.dt = 1e-2, .t_max = 1.0, .gamma = {}, .omega = {}});
    const std::vector<double> rates{0.5, 1.0, 2.0};
    const auto par = run_sweep(base, "gamma", rates);
    const auto ser = run_sweep_serial(base, "gamma", rates);
    REQUIRE(par.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(format_csv(par[i].rows) == format_csv(ser[i].rows));
    auto single = base;
    apply_override(single, "gamma", 2.0);
    CHECK(format_csv(par[2].rows) == format_csv(run_scenario(single).rows));
}

TEST_CASE("verify") {
    const auto ex1 = builtin_scenario("example1");
    const auto ok = verify(ex1, run_scenario(ex1));
    CHECK(ok.passed);
    CHECK(ok.checked > 0);

    const auto ac = builtin_scenario("appendixC");
    const auto bad = verify(ac, run_scenario(ac));
    CHECK_FALSE(bad.passed);
    REQUIRE(bad.first_violation.has_value());
    CHECK(bad.first_violation->bound == "closed");
    CHECK(bad.first_violation->t < std::log(4.0 / 3.0));
    CHECK(bad.first_violation->margin < -kBoundTolerance);

    // Exit-code rule: passed iff every non-skipped requested margin >= -tau.
    const auto result = run_scenario(ac);
    bool all_ok = true;
    for (const auto& r : result.rows) {
        if (!(r.skipped_flags & skipped::open)) all_ok = all_ok && r.margin_open >= -kBoundTolerance;
        if (!(r.skipped_flags & skipped::closed)) all_ok = all_ok && r.margin_closed >= -kBoundTolerance;
        if (!(r.skipped_flags & skipped::eq36)) all_ok = all_ok && r.eq36_residual <= eq36_tolerance(ac.dt);
    }
    CHECK(all_ok == bad.passed);
}

TEST_CASE("figure1 curves") {
    const auto pts = figure1_curves(1.0, 5.0, 1e-2);
    REQUIRE(pts.size() == 501);
    CHECK(pts[0].mu == -1.0);
    CHECK(pts[0].sigma == 0.0);
    CHECK(pts[0].v == 2.0);
    for (double rate : {0.5, 2.0}) {
        const auto far = figure1_curves(rate, 50.0 / rate, 0.5 / rate);
        CHECK(std::abs(far.back().mu - 1.0) <= 1e-10);
        CHECK(far.back().sigma <= 1e-10);
    }
    for (const auto& p : pts) {
        const auto rho = analytic_amplitude_damping(DensityMatrix::basis_state(1, 2), 1.0, 0.0, p.t);
        CHECK(std::abs(p.sigma - std::sqrt(variance(rho, ops::sigma_z()))) <= 1e-12);
    }
    const auto csv = format_figure1_csv(pts);
    CHECK(csv.rfind(std::string(kFigure1Header) + "\n", 0) == 0);
}
