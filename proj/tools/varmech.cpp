// varmech: Helmholtz conditions, Lagrangian construction and Jacobi last
// multipliers for systems of second-order ODEs.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "varmech/cli.hpp"

namespace cli = varmech::cli;

int main(int argc, char** argv)
{
    CLI::App app{"Inverse problem of Lagrangian mechanics for second-order ODE systems", "varmech"};
    app.require_subcommand(1);

    cli::RunConfig config;
    std::string format = "text";
    const std::pair<const char*, const char*> commands[] = {
        {"check", "test the Helmholtz conditions"},
        {"construct", "build a Lagrangian for a system that passes"},
        {"multiplier", "find a Jacobi last multiplier (n = 1), then construct"},
        {"roundtrip", "derive equations from a 'lagrangian' document, check and reconstruct"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("input", config.input, "system document (JSON)")->required();
        sub->add_option("--seed", config.settings.seed, "seed for numeric identity tests")->default_val(42);
        sub->add_option("--samples", config.settings.samples, "sample points per identity test")
            ->default_val(100)
            ->check(CLI::PositiveNumber);
        sub->add_option("--tol", config.settings.tol, "relative tolerance for numeric zero")
            ->default_val(1e-9)
            ->check(CLI::PositiveNumber);
        sub->add_option("--format", format, "report format")->default_val("text")->check(
            CLI::IsMember({"text", "json"}));
        sub->add_option("--output", config.output, "write the report here instead of standard output");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::exit_input;
    }
    config.command = cli::parse_command(app.get_subcommands().front()->get_name());
    config.format = format == "json" ? cli::Format::json : cli::Format::text;

    cli::RunResult result;
    try {
        result = cli::run(config);
    } catch (const std::exception& e) {
        std::cerr << "varmech: internal error: " << e.what() << "\n";
        return cli::exit_analysis;
    }
    if (!result.diagnostic.empty()) {
        std::cerr << "varmech: " << result.diagnostic << "\n";
    }
    if (!result.report.empty()) {
        if (config.output.empty()) {
            std::cout << result.report;
        } else {
            std::ofstream out(config.output, std::ios::binary);
            out << result.report;
            if (!out) {
                std::cerr << "varmech: cannot write '" << config.output << "'\n";
                return cli::exit_input;
            }
        }
    }
    return result.exit_code;
}
