#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "flagattr/cli.hpp"

namespace {

using flagattr::cli::RunConfig;

int threads_from_env() {
    const char* env = std::getenv("FLAGATTR_THREADS");
    if (!env) return 1;
    const int t = std::atoi(env);
    return t >= 1 ? t : 1;
}

RunConfig::Format parse_format(const std::string& f) {
    if (f == "json") return RunConfig::Format::Json;
    if (f == "dot") return RunConfig::Format::Dot;
    return RunConfig::Format::Text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"special flows on flag manifolds: cells, connecting orbits, attractor lattices"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.threads = threads_from_env();
    std::string format = "text";

    auto add_common = [&](CLI::App* sub, bool needs_n) {
        if (needs_n) sub->add_option("--n", cfg.n, "ambient dimension")->required();
        sub->add_option("--dims", cfg.dims, "signature, e.g. --dims 1,2 (default: full flag)")
            ->delimiter(',');
        sub->add_option("--format", format, "text|json|dot")
            ->check(CLI::IsMember({"text", "json", "dot"}));
        sub->add_option("--output", cfg.output_path, "write the report to a file");
        sub->add_option("--tol", cfg.tol, "numerical tolerance");
    };
    auto add_flow = [&](CLI::App* sub) {
        sub->add_option("--diag", cfg.diag,
                        "flow diagonal, strictly increasing (default: 1,2,4,...)")
            ->delimiter(',');
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--budget", cfg.budget, "witness candidates per ordered pair");
        sub->add_option("--samples", cfg.samples, "random flags to classify");
    };

    CLI::App* proj = app.add_subcommand(
        "projective", "fixed components, component order and attractors of a diagonal flow");
    proj->add_option("--diag", cfg.diag, "eigenvalues of the selfadjoint generator")
        ->required()
        ->delimiter(',');
    add_common(proj, false);

    CLI::App* bruhat =
        app.add_subcommand("bruhat", "the combinatorial order on minimal coset representatives");
    add_common(bruhat, true);

    CLI::App* flag =
        app.add_subcommand("flag", "fixed flags, sampled cell statistics and witness tables");
    add_common(flag, true);
    add_flow(flag);

    CLI::App* network =
        app.add_subcommand("network", "the attractor lattice of upper sets with meets and joins");
    add_common(network, true);

    CLI::App* verify = app.add_subcommand(
        "verify", "check the dynamical order against the combinatorial order, the cell "
                  "partition and the lattice isomorphism");
    add_common(verify, true);
    add_flow(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    cfg.format = parse_format(format);
    if (proj->parsed()) cfg.command = RunConfig::Command::Projective;
    if (bruhat->parsed()) cfg.command = RunConfig::Command::Bruhat;
    if (flag->parsed()) cfg.command = RunConfig::Command::Flag;
    if (network->parsed()) cfg.command = RunConfig::Command::Network;
    if (verify->parsed()) cfg.command = RunConfig::Command::Verify;

    const flagattr::cli::RunResult result = flagattr::cli::run(cfg);
    if (!result.err.empty()) std::cerr << result.err;
    if (!cfg.output_path.empty()) {
        std::ofstream f(cfg.output_path);
        if (!f) {
            std::cerr << "error: cannot open output file " << cfg.output_path << "\n";
            return 1;
        }
        f << result.out;
    } else {
        std::cout << result.out;
    }
    return result.code;
}
