#pragma once

// Scenario files (JSON), the built-in reproductions, batch execution and CSV
// emission.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flucbound/channels.hpp"
#include "flucbound/dynamics.hpp"
#include "flucbound/kernels.hpp"

namespace flucbound {

struct JumpSpec {
    Matrix matrix;
    /// When present the jump operator is sqrt(rate) * matrix.
    std::optional<double> rate;

    Matrix effective() const;
};

/// Optional channel applied to the initial state before evolution.
struct ChannelSpec {
    enum class Type { amplitude_damping, kraus };
    Type type = Type::amplitude_damping;
    double gamma = 0.0;
    std::vector<Matrix> operators;

    KrausChannel build() const;
};

struct ScenarioSpec {
    std::string name;
    int dimension = 2;
    Matrix initial_state;
    std::optional<TimeDependentObservable> hamiltonian;
    std::vector<JumpSpec> jump_operators;
    std::optional<ChannelSpec> channel;
    TimeDependentObservable observable{2};
    double t_max = 1.0;
    double dt = 1e-3;
    BoundSelection bounds;
    /// Only analytic or finite_difference are serialized.
    RhoDotMode rho_dot_mode = RhoDotMode::analytic;
};

/// Every violated invariant, each prefixed by the offending field.
std::vector<std::string> validate(const ScenarioSpec& spec);

/// Throws ScenarioError listing parse problems and invariant violations.
ScenarioSpec parse_scenario(const std::string& json_text);
ScenarioSpec load_scenario(const std::filesystem::path& path);
/// Pretty-printed JSON; doubles round-trip exactly.
std::string serialize_scenario(const ScenarioSpec& spec);

LindbladModel model_of(const ScenarioSpec& spec);
/// The initial state after the optional preparation channel.
DensityMatrix initial_state_of(const ScenarioSpec& spec);

struct BuiltinOverrides {
    std::optional<double> dt;
    std::optional<double> t_max;
    std::optional<double> gamma;
    std::optional<double> omega;
};

/// "example1", "example2", "appendixC". Figure 1 has its own entry point.
ScenarioSpec builtin_scenario(std::string_view name, const BuiltinOverrides& overrides = {});
std::vector<std::string> builtin_names();

/// Parameters: "dt", "t_max" (or "t-max"), "gamma" (rate of every rated jump
/// operator), "omega" (coefficient of a single constant Hamiltonian term,
/// which is set to omega/2; a qubit without Hamiltonian gets (omega/2) sigma_z).
void apply_override(ScenarioSpec& spec, std::string_view param, double value);
void apply_overrides(ScenarioSpec& spec, const BuiltinOverrides& overrides);

/// Bit values of ResultRow::skipped_flags: set when the bound was not requested
/// or was skipped because sigma_A fell below the floor.
namespace skipped {
inline constexpr unsigned open = 1U;
inline constexpr unsigned closed = 2U;
inline constexpr unsigned eq36 = 4U;
}  // namespace skipped

struct ResultRow {
    double t = 0.0;
    double mean = 0.0;
    double sigma = 0.0;
    double sigma_sq = 0.0;
    double var_rate = 0.0;
    double lhs_open = 0.0;
    double rhs_open = 0.0;
    double margin_open = 0.0;
    double lhs_closed = 0.0;
    double rhs_closed = 0.0;
    double margin_closed = 0.0;
    double eq36_residual = 0.0;
    unsigned skipped_flags = 0;
};

struct ScenarioResult {
    std::vector<ResultRow> rows;
    std::vector<PointEvaluation> points;
    /// True when the amplitude-damping closed form replaced integration.
    bool used_closed_form = false;
};

/// Threshold for the eq36 check in verify: 10 dt^2.
double eq36_tolerance(double dt);

/// Integrates (or uses the closed form) and evaluates every interior grid
/// point. Errors carry the failing time.
ScenarioResult run_scenario(const ScenarioSpec& spec);

/// One result per value; runs concurrently, one worker per value.
std::vector<ScenarioResult> run_sweep(const ScenarioSpec& base, std::string_view param,
                                      const std::vector<double>& values);
std::vector<ScenarioResult> run_sweep_serial(const ScenarioSpec& base, std::string_view param,
                                             const std::vector<double>& values);

struct Violation {
    double t = 0.0;
    std::string bound;
    double margin = 0.0;
};

struct VerifyOutcome {
    bool passed = true;
    std::size_t checked = 0;
    std::size_t skipped = 0;
    std::optional<Violation> first_violation;
};

/// Passed iff every requested, non-skipped margin is >= -kBoundTolerance.
VerifyOutcome verify(const ScenarioSpec& spec, const ScenarioResult& result);

inline constexpr std::string_view kResultHeader =
    "t,mean,sigma,sigma_sq,var_rate,lhs_open,rhs_open,margin_open,lhs_closed,rhs_closed,"
    "margin_closed,eq36_residual,skipped_flags";

std::string format_csv(const std::vector<ResultRow>& rows);

struct Figure1Point {
    double t = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
    double v = 0.0;
    /// <A_dot>^2 + (d sigma_A/dt)^2, compared against v^2.
    double arrow_sq = 0.0;
    double v_sq = 0.0;
    bool inside = false;
};

/// Closed-form (mu_A, sigma_A, v_A) for sigma_z under amplitude damping from |1><1|.
std::vector<Figure1Point> figure1_curves(double rate, double t_max, double dt);

inline constexpr std::string_view kFigure1Header = "t,mu,sigma,v,arrow_sq,v_sq,inside";

std::string format_figure1_csv(const std::vector<Figure1Point>& points);

/// 12 significant digits, scientific notation.
std::string format_real(double x);

}  // namespace flucbound
