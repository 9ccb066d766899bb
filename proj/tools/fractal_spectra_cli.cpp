#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fractal_spectra/cli.hpp"

namespace fsx = fractal_spectra;

namespace {

void add_group_option(CLI::App* cmd, std::string& group) {
    cmd->add_option("--group", group, "preset: g, gtilde, gamma, gammabar, gammabarbar (case-insensitive)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectra, Schreier graphs and spectral measures of five self-similar groups"};
    app.require_subcommand(1);

    fsx::RunConfig cfg;
    std::string group_str = "g";

    auto* spectrum = app.add_subcommand("spectrum", "closed-form and numeric spectra of the level operators");
    add_group_option(spectrum, group_str);
    spectrum->add_option("--level", cfg.level, "tree level n");
    spectrum->add_option("--method", cfg.method, "closed-form | numeric | both")
        ->check(CLI::IsMember({"closed-form", "numeric", "both"}));
    spectrum->add_option("--out", cfg.out, "output path (stdout if omitted)");
    spectrum->add_option("--dump-matrix", cfg.dump_matrix, "also write the Hecke matrix as exact-rational CSV");

    auto* graph = app.add_subcommand("graph", "Schreier graphs (action or substitutional construction)");
    add_group_option(graph, group_str);
    graph->add_option("--level", cfg.level, "tree level n");
    graph->add_option("--construction", cfg.construction, "action | subst")
        ->check(CLI::IsMember({"action", "subst"}));
    graph->add_option("--format", cfg.format, "dot | csv")->check(CLI::IsMember({"dot", "csv"}));
    graph->add_option("--out", cfg.out, "output path (stdout if omitted)");
    graph->add_flag("--verify", cfg.verify_graph, "cross-check the other construction for isomorphism");

    auto* measure = app.add_subcommand("measure", "spectral histograms, densities and Kesten measures");
    add_group_option(measure, group_str);
    measure->add_option("--level", cfg.level, "tree level n");
    measure->add_option("--bins", cfg.bins, "histogram bins over [-4,4]");
    measure->add_option("--out", cfg.out, "output path (stdout if omitted)");
    measure->add_flag("--kesten", cfg.kesten, "emit the Kesten measure at the base point instead");

    auto* verify = app.add_subcommand("verify", "run the verification suite (exit 3 on any failure)");
    verify->add_option("--seed", cfg.seed, "seed for the deterministic sample points");
    verify->add_option("--out", cfg.out, "write the JSON summary here instead of stdout");
    verify->add_flag("--selftest-negative", cfg.selftest_negative,
                     "inject a corrupted matrix entry; the suite must fail");

    auto* julia = app.add_subcommand("julia", "backward orbits of 0 under z^2 - lambda");
    julia->add_option("--lambda", cfg.julia_lambda, "quadratic parameter lambda > 0");
    julia->add_option("--depth", cfg.julia_depth, "preimage depth k >= 1");
    julia->add_option("--out", cfg.out, "output path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? fsx::kExitOk : fsx::kExitUsage;
    }

    const auto parsed = fsx::parse_group(group_str);
    if (!parsed) {
        std::cerr << "unknown group '" << group_str << "'\n";
        return fsx::kExitUsage;
    }
    cfg.group = *parsed;
    cfg.command = app.get_subcommands().front()->get_name();
    return fsx::run_command(cfg, std::cout);
}
