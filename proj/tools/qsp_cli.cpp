#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qsp/cli.hpp"
#include "qsp/exceptions.hpp"

namespace {

int finish(const qsp::cli::RunOutcome& outcome, bool print_report) {
    if (print_report && !outcome.report.is_null()) {
        std::cout << outcome.report.dump(2) << "\n";
    }
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadratic stochastic process toolkit"};
    app.require_subcommand(1);

    auto* list_cmd = app.add_subcommand("list", "print the family catalog");

    std::string config_path;
    double tol_override = 0.0;
    bool strict = false;
    auto* verify_cmd = app.add_subcommand("verify", "run stochasticity and Kolmogorov-Chapman sweeps");
    verify_cmd->add_option("--config", config_path, "config file (JSON)")->required();
    verify_cmd->add_flag("--strict", strict, "escalate construction warnings to failures");
    auto* tol_opt = verify_cmd->add_option("--tol", tol_override, "override the KCE tolerance");

    std::string sim_config, sim_out;
    auto* simulate_cmd = app.add_subcommand("simulate", "emit a distribution trajectory as CSV");
    simulate_cmd->add_option("--config", sim_config, "config file (JSON)")->required();
    simulate_cmd->add_option("--out", sim_out, "output CSV path")->required();

    std::string eval_config, eval_out;
    double eval_s = 0.0, eval_t = 1.0;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate the family matrix at (s,t)");
    eval_cmd->add_option("--config", eval_config, "config file (JSON)")->required();
    eval_cmd->add_option("--s", eval_s, "start time")->required();
    eval_cmd->add_option("--t", eval_t, "end time")->required();
    eval_cmd->add_option("--out", eval_out, "output matrix file (.json for JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            std::cout << qsp::cli::list_families();
            return qsp::cli::kExitPass;
        }
        if (verify_cmd->parsed()) {
            qsp::cli::RunConfig cfg = qsp::cli::load_config(config_path);
            if (strict) cfg.strict = true;
            if (tol_opt->count() > 0) {
                if (!(tol_override > 0.0)) throw qsp::ConfigError("--tol: must be positive");
                cfg.kce_tol = tol_override;
            }
            return finish(qsp::cli::run_verify(cfg), !cfg.report_path);
        }
        if (simulate_cmd->parsed()) {
            return finish(qsp::cli::run_simulate(qsp::cli::load_config(sim_config), sim_out), false);
        }
        if (eval_cmd->parsed()) {
            return finish(qsp::cli::run_eval(qsp::cli::load_config(eval_config), eval_s, eval_t, eval_out),
                          false);
        }
    } catch (const qsp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return qsp::cli::kExitConfigError;
    } catch (const qsp::ConstructionError& e) {
        std::cerr << "check failure: " << e.what() << "\n";
        return qsp::cli::kExitCheckFailure;
    } catch (const qsp::EvalError& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return qsp::cli::kExitEvalError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return qsp::cli::kExitEvalError;
    }
    return qsp::cli::kExitConfigError;
}
