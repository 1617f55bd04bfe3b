#include <iostream>

#include "CLI11.hpp"
#include "drham/commands.hpp"

using namespace drham;

namespace {

void add_common(CLI::App* sub, RunConfig& config, std::string& output)
{
    sub->add_option("--cohft", config.cohft, "builtin name or descriptor file (searched on DRHAM_COHFT_PATH)")
        ->capture_default_str();
    sub->add_option("-G,--genus-cap", config.genus_cap, "drop eps powers above 2G")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("-M,--u0-cap", config.u0_cap, "cap on the total degree in the underived fields")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--d-max", config.d_max, "highest descendant index checked")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--output", output, "text, json or latex")
        ->check(CLI::IsMember({"text", "json", "latex"}))
        ->capture_default_str();
    sub->add_option("--seed", config.seed, "seed for the randomized suites")->capture_default_str();
}

void warn_about_cost(const RunConfig& config)
{
    if (config.genus_cap > 2) std::cerr << "warning: G > 2 makes every check considerably slower\n";
    if (config.u0_cap > 10) std::cerr << "warning: M > 10 makes every check considerably slower\n";
    if (config.d_max > 4) std::cerr << "warning: d-max > 4 needs many more Hamiltonians and table entries\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact checks of the bihamiltonian structure of DR hierarchies"};
    app.require_subcommand(1);
    RunConfig config;
    std::string output = "text";
    std::vector<std::string> checks{"all"};
    std::string object;

    CLI::App* check = app.add_subcommand("check", "run identity checks and print a report");
    add_common(check, config, output);
    check->add_option("--checks", checks, "comma-separated subset of the available checks")
        ->delimiter(',')
        ->check(CLI::IsMember(selectable_checks()))
        ->capture_default_str();

    CLI::App* exp = app.add_subcommand("export", "print gbar, kdr, kdr_alt, k2_genus0, descriptor or hamiltonian(a,d)");
    add_common(exp, config, output);
    exp->add_option("object", object, "object to export")->required();

    CLI::App* describe = app.add_subcommand("describe", "summarize a descriptor");
    add_common(describe, config, output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    config.output = parse_format(output);
    config.checks = std::set<std::string>(checks.begin(), checks.end());
    warn_about_cost(config);

    std::string text;
    int status = kExitOk;
    if (*check) status = cmd_check(config, text);
    else if (*exp) status = cmd_export(config, object, text);
    else status = cmd_describe(config, text);
    std::cout << text;
    return status;
}
