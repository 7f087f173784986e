#include <iostream>

#include "CLI11.hpp"

#include "eqdeg/report.hpp"

using namespace eqdeg;

int main(int argc, char** argv) {
    CLI::App app{"equivariant degree toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    bool strict = false;
    bool json = false;
    double delta_override = 0;
    long long seed_override = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file")->required();
        sub->add_flag("--strict", strict, "fail when the hypothesis is violated");
        sub->add_flag("--json", json, "machine-readable JSON report");
        sub->add_option("--delta", delta_override, "override the chart resolution");
        sub->add_option("--seed", seed_override, "override the sampling seed");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "group, orbit types, components");
    CLI::App* degree = app.add_subcommand("degree", "equivariant degree of the map");
    CLI::App* realize_cmd = app.add_subcommand("realize", "construct a map with a given degree");
    CLI::App* verify = app.add_subcommand("verify", "otopy invariance / additivity properties");
    for (CLI::App* sub : {analyze, degree, realize_cmd, verify}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = parse_config_file(config_path);
        if (delta_override > 0) cfg.tol.delta = delta_override;
        if (seed_override >= 0) cfg.tol.seed = (unsigned long long)seed_override;
        LoadedProblem problem = load_problem(std::move(cfg));

        CommandResult result;
        if (analyze->parsed()) result = cmd_analyze(problem, json);
        if (degree->parsed()) result = cmd_degree(problem, strict, json);
        if (realize_cmd->parsed()) result = cmd_realize(problem, strict, json);
        if (verify->parsed()) result = cmd_verify(problem, strict, json);
        std::cout << result.text;
        return result.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NotOrthogonal& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CapExceeded& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateZero& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
