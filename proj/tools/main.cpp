// hypertorus: verification engine for exterior calculus on hyperbolic torus
// bundles. Subcommands run identity suites, exactness probes, the degree-3
// primitive solver and the orbit equidistribution diagnostic; all emit
// versioned JSON reports that are byte-identical for a fixed config and seed.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "hypertorus/commands.hpp"
#include "hypertorus/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"verification engine for exterior calculus on hyperbolic torus bundles"};
    app.fallthrough();
    app.set_config("--config", "", "key=value configuration file (command-line flags win)");

    hypertorus::RunConfig cfg;
    std::string matrix_text;

    app.add_option("--matrix", matrix_text,
                   "gluing matrix entries a,b,c,d (row-major, det 1, trace >= 3)");
    app.add_option("--grid", cfg.grid_n, "spatial resolution N (power of two in [8,256])");
    app.add_option("--tslices", cfg.n_slices, "slice count N_t (power of two in [8,256])");
    app.add_option("--fd-order", cfg.fd_order, "finite-difference order (even, 2..12, <= N_t)");
    app.add_option("--quad-order", cfg.quad_order, "Gauss-Legendre order per panel (2..64)");
    app.add_option("--quad-panels", cfg.quad_panels, "quadrature panel count (0 = automatic)");
    app.add_option("--seed", cfg.seed, "RNG seed; fixes every random draw in the run");
    app.add_option("--out", cfg.out_path, "report path (stdout when omitted)");
    app.add_option("--suite", cfg.suite,
                   "verify selection: structure | flows | operator | cohomology | all");
    app.add_flag("--paper-sign", cfg.paper_sign,
                 "alternating-sign convention for the averaging chain rule");
    app.add_flag("--exact-average,!--quad-average", cfg.exact_average,
                 "closed-form averaging multipliers (default; --quad-average integrates)");
    app.add_flag("--no-timings", cfg.no_timings, "strip wall-clock fields from reports");
    app.add_option("--threads", cfg.threads, "worker thread cap (output is identical anyway)");
    app.add_option("--probe-iters", cfg.probe_max_iterations, "probe iteration cap per level");
    app.add_option("--probe-seconds", cfg.probe_max_seconds,
                   "probe wall-clock budget in seconds (0 = unlimited)");
    app.add_option("--probe-levels", cfg.probe_levels, "probe refinement levels (N values)")
        ->delimiter(',');
    app.add_option("--orbit-samples", cfg.orbit_samples_per_unit,
                   "orbit samples per unit of flow time");
    app.add_option("--floor", cfg.h3_floor, "small-denominator floor for the primitive solver");

    CLI::App* verify =
        app.add_subcommand("verify", "run the identity suites; exit 0 iff every row passes");
    verify->fallthrough();

    CLI::App* probe = app.add_subcommand("probe", "exactness probe for a target class");
    probe->fallthrough();
    std::string target;
    std::string phi = "one";
    probe->add_option("target", target, "h1 | h2 | exact-control")->required();
    probe->add_option("phi", phi, "circle function: one | cos:k | sin:k (k <= 8)");

    CLI::App* primitive =
        app.add_subcommand("primitive", "solve d(omega) = (f - mean) * volume for omega");
    primitive->fallthrough();
    primitive->add_option("input,--in", cfg.field_in, "input field file (binary layout)");

    CLI::App* orbit =
        app.add_subcommand("orbit", "Weyl-sum equidistribution diagnostic along the flow");
    orbit->fallthrough();
    orbit->add_option("S,--orbit-s", cfg.orbit_s, "flow-time window length");
    orbit->add_option("K,--orbit-k", cfg.orbit_k, "mode cutoff: 0 < max(|k1|,|k2|) <= K");

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!matrix_text.empty()) cfg.matrix = hypertorus::parse_matrix_entries(matrix_text);
        if (verify->parsed()) return hypertorus::cmd_verify(cfg);
        if (probe->parsed()) return hypertorus::cmd_probe(cfg, target, phi);
        if (primitive->parsed()) return hypertorus::cmd_primitive(cfg);
        if (orbit->parsed()) return hypertorus::cmd_orbit(cfg);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
