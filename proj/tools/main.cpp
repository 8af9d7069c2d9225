#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sphradon/cli.hpp"

namespace {

void add_common_flags(CLI::App* app, sphradon::RunConfig& cfg, std::string& config_path,
                      std::string& lambda_str) {
    app->add_option("--config", config_path, "key = value config file (flags override it)");
    app->add_option("--n", cfg.n, "ambient dimension (3 or 4)");
    app->add_option("--lambda", lambda_str, "spheroid shape parameter, or 'inf'");
    app->add_option("--psi-res", cfg.psi_res, "psi grid resolution on S^{n-2}");
    app->add_option("--quad-res", cfg.quad_res, "subsphere quadrature resolution (default psi-res)");
    app->add_option("--c-min", cfg.c_min, "smallest subsphere scale");
    app->add_option("--c-max", cfg.c_max, "largest subsphere scale");
    app->add_option("--c-count", cfg.c_count, "number of c grid points (log-uniform)");
    app->add_option("--m-max", cfg.m_max, "highest harmonic degree to reconstruct");
    app->add_option("--rho", cfg.rho, "Mellin line abscissa in (0,1)");
    app->add_option("--eps", cfg.eps, "Wiener regularization of the spectral division");
    app->add_option("--contour-T", cfg.contour_T, "contour truncation |b| <= T");
    app->add_option("--contour-db", cfg.contour_db, "contour step");
    app->add_flag("--tail-correction,!--no-tail-correction", cfg.tail_correction,
                  "compensate the truncated algebraic sinogram tail");
    app->add_option("--in", cfg.in_path, "input file");
    app->add_option("--out", cfg.out_path, "output file");
    app->add_option("--profile-out", cfg.profile_out_path, "exact-profile table output");
    app->add_option("--report", cfg.report_path, "per-mode error report (CSV)");
    app->add_option("--reference", cfg.reference_path, "reference phantom for the report");
    app->add_option("--phantom", cfg.phantom_descriptor,
                    "phantom descriptor 'm,l: coeff,power,decay; ...'");
    app->add_option("--eval-r-lo", cfg.eval_r_lo, "report window lower radius");
    app->add_option("--eval-r-hi", cfg.eval_r_hi, "report window upper radius");
    app->add_option("--threads", cfg.threads, "worker cap (0 = hardware)");
    app->add_flag("--warn-as-error", cfg.warn_as_error, "escalate numerical warnings to exit 5");
    app->add_option("--suite", cfg.suite, "verify: suite filter");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spherical transform over spheroid-tangent subsphere families: "
                 "forward sweeps, Mellin-deconvolution inversion, verification"};
    app.require_subcommand(1);

    sphradon::RunConfig cfg;
    std::string config_path;
    std::string lambda_str;

    CLI::App* sub_phantom = app.add_subcommand("phantom", "write a phantom and its exact profiles");
    CLI::App* sub_forward = app.add_subcommand("forward", "sweep the spherical transform to a sinogram");
    CLI::App* sub_invert = app.add_subcommand("invert", "reconstruct harmonic profiles from a sinogram");
    CLI::App* sub_verify = app.add_subcommand("verify", "run the property suites");
    for (CLI::App* sub : {sub_phantom, sub_forward, sub_invert, sub_verify})
        add_common_flags(sub, cfg, config_path, lambda_str);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : sphradon::kExitConfig;
    }

    try {
        if (!config_path.empty()) cfg.apply_file(config_path);
        // flags already parsed into cfg; reparse so they win over the file
        app.clear();
        app.parse(argc, argv);
        if (!lambda_str.empty()) cfg.apply_pair("lambda", lambda_str);
        cfg.command = app.get_subcommands().front()->get_name();
    } catch (const sphradon::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return sphradon::kExitIo;
    } catch (const sphradon::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return sphradon::kExitConfig;
    } catch (const CLI::ParseError& e) {
        return sphradon::kExitConfig;
    }

    try {
        return sphradon::run_command(cfg, std::cout);
    } catch (const sphradon::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return sphradon::kExitIo;
    } catch (const sphradon::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return sphradon::kExitConfig;
    }
}
