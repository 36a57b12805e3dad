#include "momentcone/pipeline.hpp"
#include "momentcone/version.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Options {
    std::string instance_path;
    std::string model_out;
    std::string report_out;
    std::optional<int> quad_order;
    std::optional<std::uint64_t> mc_seed;
    momentcone::PipelineConfig cfg;
};

void add_common_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("instance", opt.instance_path, "Instance JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--quad-order", opt.quad_order,
                    "Quadrature order: points per axis on boxes, angular order on sectors "
                    "(default: degree + 10 and 2*degree + 8)")
        ->envname("MOMENTCONE_QUAD_ORDER");
    cmd->add_option("--tol", opt.cfg.tol, "Verification tolerance; the solver stops at tol/10")
        ->capture_default_str();
    cmd->add_option("--max-iters", opt.cfg.max_iters, "Newton iteration limit")
        ->capture_default_str();
    cmd->add_flag("--trace", opt.cfg.trace, "Embed the per-iteration solver trace in the report");
    cmd->add_flag("--parallel", opt.cfg.parallel,
                  "Evaluate quadrature nodes in parallel (identical output bits)");
    cmd->add_option("--mc-seed", opt.mc_seed,
                    "Seed for the Monte Carlo sector fallback above dimension 4");
    cmd->add_option("--out", opt.report_out, "Also write the report JSON to this file");
}

void emit_report(const momentcone::PipelineResult& result, const Options& opt) {
    std::cout << result.report_json;
    if (!opt.report_out.empty()) {
        std::ofstream out(opt.report_out);
        if (!out) throw std::invalid_argument("cannot open output file: " + opt.report_out);
        out << result.report_json;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("moment cone membership, maximum-entropy reconstruction and "
                             "barrier evaluation (") +
                 momentcone::kVersion + ")"};
    app.require_subcommand(1);

    Options opt;
    CLI::App* check = app.add_subcommand(
        "check", "Decide whether the moment sequence lies in the interior of the cone");
    add_common_options(check, opt);

    CLI::App* reconstruct = app.add_subcommand(
        "reconstruct", "Solve, then write the maximum-entropy density model and verify it");
    add_common_options(reconstruct, opt);
    reconstruct->add_option("model_out", opt.model_out, "Output path for the density model JSON")
        ->required();

    CLI::App* barrier =
        app.add_subcommand("barrier", "Evaluate the barrier value f*(y) and its gradient");
    add_common_options(barrier, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        opt.cfg.quad_order = opt.quad_order;
        opt.cfg.mc_seed = opt.mc_seed;
        const momentcone::Instance instance = momentcone::load_instance(opt.instance_path);
        momentcone::PipelineResult result;
        if (check->parsed()) {
            result = momentcone::run_check(instance, opt.cfg);
        } else if (reconstruct->parsed()) {
            result = momentcone::run_reconstruct(instance, opt.cfg);
            if (result.density) momentcone::save_density_model(*result.density, opt.model_out);
        } else {
            result = momentcone::run_barrier(instance, opt.cfg);
        }
        emit_report(result, opt);
        return result.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
