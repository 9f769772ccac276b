#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "renorm/config.hpp"
#include "renorm/pipeline.hpp"

using namespace renorm;

int main(int argc, char** argv)
{
    CLI::App app{"Polyhedral, smooth and LUR renormings of a coordinate space with certificates"};
    std::string config_path, stages, out_dir;
    std::uint64_t seed = 0;
    double tol_scale = 1.0;
    auto* opt_config = app.add_option("--config", config_path, "Run configuration (JSON)");
    auto* opt_seed = app.add_option("--seed", seed, "Override the configured seed");
    auto* opt_stages = app.add_option("--stages", stages, "Comma separated subset of atlas,polyhedral,smooth,lur,verify");
    auto* opt_out = app.add_option("--out", out_dir, "Output directory");
    auto* opt_tol = app.add_option("--tolerance-scale", tol_scale, "Multiply adjustable tolerances (non-authoritative)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    RunConfig cfg;
    try {
        if (*opt_config) cfg = load_config(config_path);
        if (*opt_seed) cfg.seed = seed;
        if (*opt_stages) cfg.stages = parse_stages(stages);
        if (*opt_out) cfg.out_dir = out_dir;
        if (*opt_tol) cfg.tolerance_scale = tol_scale;
        cfg.validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        const PipelineOutput out = run_pipeline(cfg);
        write_artifacts(out, cfg.out_dir);
        for (const auto& [name, list] : out.cert.sections) {
            std::size_t fails = 0;
            for (const auto& e : list)
                if (!e.pass) ++fails;
            std::cout << name << ": " << list.size() - fails << "/" << list.size() << " checks pass\n";
            for (const auto& e : list)
                if (!e.pass) std::cout << "  FAIL " << e.id << "\n";
        }
        std::cout << "certificate " << (out.cert.passed() ? "pass" : "fail") << " " << out.cert.content_hash()
                  << (out.cert.authoritative ? "" : " (non-authoritative)") << "\n";
        return out.exit_code();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}
