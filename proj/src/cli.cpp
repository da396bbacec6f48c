#include "flucbound/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "flucbound/scenario.hpp"

namespace flucbound {

namespace {

struct OverrideFlags {
    double dt = 0.0;
    double t_max = 0.0;
    double gamma = 0.0;
    double omega = 0.0;
    CLI::Option* dt_opt = nullptr;
    CLI::Option* t_max_opt = nullptr;
    CLI::Option* gamma_opt = nullptr;
    CLI::Option* omega_opt = nullptr;

    void attach(CLI::App* app) {
        dt_opt = app->add_option("--dt", dt, "Override the time step");
        t_max_opt = app->add_option("--t-max", t_max, "Override the final time");
        gamma_opt = app->add_option("--gamma", gamma, "Override the decay rate");
        omega_opt = app->add_option("--omega", omega, "Override the qubit frequency");
    }

    BuiltinOverrides get() const {
        BuiltinOverrides o;
        if (dt_opt->count()) o.dt = dt;
        if (t_max_opt->count()) o.t_max = t_max;
        if (gamma_opt->count()) o.gamma = gamma;
        if (omega_opt->count()) o.omega = omega;
        return o;
    }
};

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("io_error", "cannot write " + path);
    f << text;
    if (!f) throw Error("io_error", "write failed for " + path);
}

void report_error(std::ostream& err, const std::string& code, const std::string& message,
                  const std::vector<std::string>& issues = {}) {
    nlohmann::json j{{"error", code}, {"message", message}};
    if (!issues.empty()) j["issues"] = issues;
    err << j.dump() << '\n';
}

ScenarioSpec resolve_scenario(const std::string& path, const std::string& name,
                              const BuiltinOverrides& overrides) {
    if (!path.empty()) {
        ScenarioSpec spec = load_scenario(path);
        apply_overrides(spec, overrides);
        return spec;
    }
    return builtin_scenario(name, overrides);
}

std::string sweep_file_name(const ScenarioSpec& spec, const std::string& param, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return spec.name + "_" + param + "_" + buf + ".csv";
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Open quantum system fluctuation-growth bound checker", "flucbound"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run a scenario file and write result rows as CSV");
    std::string run_scenario_path;
    std::string run_out;
    OverrideFlags run_flags;
    run->add_option("--scenario", run_scenario_path, "Scenario JSON file")->required();
    run->add_option("--out", run_out, "Output CSV (default: stdout)");
    run_flags.attach(run);

    // builtin
    auto* builtin = app.add_subcommand("builtin", "Run one of the built-in reproductions");
    std::string builtin_name;
    std::string builtin_out;
    std::string builtin_scenario_out;
    OverrideFlags builtin_flags;
    builtin->add_option("--name", builtin_name, "Built-in name")
        ->required()
        ->check(CLI::IsMember({"example1", "example2", "appendixC", "figure1"}));
    builtin->add_option("--out", builtin_out, "Output CSV (default: stdout)");
    builtin->add_option("--scenario-out", builtin_scenario_out,
                        "Also write the scenario as JSON (not for figure1)");
    builtin_flags.attach(builtin);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Exit 0 iff every requested bound holds");
    std::string verify_path;
    std::string verify_name;
    OverrideFlags verify_flags;
    auto* vs = verify_cmd->add_option("--scenario", verify_path, "Scenario JSON file");
    auto* vn = verify_cmd->add_option("--name", verify_name, "Built-in name instead of a file")
                   ->check(CLI::IsMember({"example1", "example2", "appendixC"}));
    vs->excludes(vn);
    verify_flags.attach(verify_cmd);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run a scenario for several parameter values");
    std::string sweep_path;
    std::string sweep_name;
    std::string sweep_param;
    std::vector<double> sweep_values;
    std::string sweep_dir;
    auto* ss = sweep->add_option("--scenario", sweep_path, "Scenario JSON file");
    auto* sn = sweep->add_option("--name", sweep_name, "Built-in name instead of a file")
                   ->check(CLI::IsMember({"example1", "example2", "appendixC"}));
    ss->excludes(sn);
    sweep->add_option("--param", sweep_param, "dt, t_max, gamma or omega")
        ->required()
        ->check(CLI::IsMember({"dt", "t_max", "t-max", "gamma", "omega"}));
    sweep->add_option("--values", sweep_values, "Comma-separated values")
        ->required()
        ->delimiter(',');
    sweep->add_option("--out-dir", sweep_dir, "Directory for per-value CSV files")->required();

    std::vector<std::string> argv_store = args;
    argv_store.insert(argv_store.begin(), "flucbound");
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        report_error(err, "usage", e.what());
        return 2;
    }

    try {
        if (*run) {
            ScenarioSpec spec = load_scenario(run_scenario_path);
            apply_overrides(spec, run_flags.get());
            write_text(run_out, format_csv(run_scenario(spec).rows), out);
            return 0;
        }
        if (*builtin) {
            const auto overrides = builtin_flags.get();
            if (builtin_name == "figure1") {
                const double rate = overrides.gamma.value_or(1.0);
                const double t_max = overrides.t_max.value_or(5.0);
                const double dt = overrides.dt.value_or(1e-2);
                write_text(builtin_out, format_figure1_csv(figure1_curves(rate, t_max, dt)), out);
                return 0;
            }
            const ScenarioSpec spec = builtin_scenario(builtin_name, overrides);
            if (!builtin_scenario_out.empty())
                write_text(builtin_scenario_out, serialize_scenario(spec), out);
            write_text(builtin_out, format_csv(run_scenario(spec).rows), out);
            return 0;
        }
        if (*verify_cmd) {
            if (verify_path.empty() && verify_name.empty()) {
                report_error(err, "usage", "verify needs --scenario or --name");
                return 2;
            }
            const ScenarioSpec spec = resolve_scenario(verify_path, verify_name, verify_flags.get());
            const auto outcome = verify(spec, run_scenario(spec));
            if (outcome.passed) {
                out << "PASS scenario=" << spec.name << " checked=" << outcome.checked
                    << " skipped=" << outcome.skipped << '\n';
                return 0;
            }
            const auto& v = *outcome.first_violation;
            out << "FAIL scenario=" << spec.name << " first_violation t=" << format_real(v.t)
                << " bound=" << v.bound << " margin=" << format_real(v.margin) << '\n';
            return 1;
        }
        if (*sweep) {
            if (sweep_path.empty() && sweep_name.empty()) {
                report_error(err, "usage", "sweep needs --scenario or --name");
                return 2;
            }
            const ScenarioSpec base = resolve_scenario(sweep_path, sweep_name, {});
            std::filesystem::create_directories(sweep_dir);
            const auto results = run_sweep(base, sweep_param, sweep_values);
            for (std::size_t k = 0; k < results.size(); ++k) {
                const auto path = std::filesystem::path(sweep_dir) /
                                  sweep_file_name(base, sweep_param, sweep_values[k]);
                write_text(path.string(), format_csv(results[k].rows), out);
                out << path.string() << '\n';
            }
            return 0;
        }
    } catch (const ScenarioError& e) {
        report_error(err, e.code(), e.what(), e.issues());
        return 2;
    } catch (const Error& e) {
        report_error(err, e.code(), e.what());
        return 2;
    } catch (const std::exception& e) {
        report_error(err, "internal", e.what());
        return 2;
    }
    return 2;
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cli_main(args, std::cout, std::cerr);
}

}  // namespace flucbound
