#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "esbgk/cli.hpp"

int main(int argc, char** argv) {
    using namespace esbgk;

    CLI::App app{"Polyatomic ES-BGK relaxation solver and entropy certificates"};
    app.require_subcommand(1);

    std::string run_file;
    auto* run = app.add_subcommand("run", "Run a scenario and write trajectory CSV, report JSON and snapshots");
    run->add_option("file", run_file, "Scenario JSON file")->required()->check(CLI::ExistingFile);

    std::string regime = "theta_pos";
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    SampleRanges ranges;
    std::string out_file;
    auto* certify = app.add_subcommand("certify", "Closed-form lemma certificates on random moment states");
    certify->add_option("--regime", regime, "theta_pos or theta_zero")
        ->check(CLI::IsMember({"theta_pos", "theta_zero"}))
        ->required();
    certify->add_option("--samples", samples, "Number of random states")->required();
    certify->add_option("--seed", seed, "Master seed")->required();
    certify->add_option("--d", ranges.d, "Velocity dimension")->check(CLI::Range(1, 3));
    certify->add_option("--delta-min", ranges.delta_min);
    certify->add_option("--delta-max", ranges.delta_max);
    certify->add_option("--nu-min", ranges.nu_min);
    certify->add_option("--nu-max", ranges.nu_max);
    certify->add_option("--theta-min", ranges.theta_min);
    certify->add_option("--theta-max", ranges.theta_max);
    certify->add_option("--T-scale", ranges.T_scale);
    certify->add_option("--rho-min", ranges.rho_min);
    certify->add_option("--rho-max", ranges.rho_max);
    certify->add_option("--output", out_file, "File name for the JSON summary (placed in the output directory)");

    std::string refine_file;
    auto* refine = app.add_subcommand("refine", "Grid-refinement study of closed-form vs quadrature entropies");
    refine->add_option("file", refine_file, "Scenario JSON file")->required()->check(CLI::ExistingFile);

    std::string snap_a, snap_b;
    auto* diff = app.add_subcommand("snapshot-diff", "Bitwise comparison of two snapshot files");
    diff->add_option("a", snap_a)->required();
    diff->add_option("b", snap_b)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidInput;
    }

    if (*run) return run_scenario_file(run_file, std::cout, std::cerr);
    if (*refine) return refine_scenario_file(refine_file, std::cout, std::cerr);
    if (*diff) return snapshot_diff_files(snap_a, snap_b, std::cout, std::cerr);

    try {
        const Regime r = regime == "theta_pos" ? Regime::theta_pos : Regime::theta_zero;
        const SweepSummary s = certify_sweep(samples, seed, r, ranges);
        const std::string text = sweep_json(s);
        std::cout << text << '\n';
        if (!out_file.empty()) {
            const auto dir = resolve_output_dir(".");
            std::filesystem::create_directories(dir);
            std::ofstream(dir / out_file) << text << '\n';
        }
        return s.failures == 0 ? kExitOk : kExitCertificateFailure;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitInvalidInput;
    }
}
