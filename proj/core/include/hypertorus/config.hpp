#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hypertorus/averaging.hpp"
#include "hypertorus/gluing.hpp"
#include "hypertorus/grid.hpp"
#include "hypertorus/probe.hpp"

namespace hypertorus {

/// One run's worth of knobs: the gluing matrix, resolutions, discretization
/// orders, reproducibility seed and output wiring. Field semantics match the
/// CLI flags one-to-one.
struct RunConfig {
    std::array<std::int64_t, 4> matrix{2, 1, 1, 1};
    int grid_n = 64;
    int n_slices = 64;
    int fd_order = 8;
    int quad_order = 16;
    int quad_panels = 0;  ///< 0 = automatic panel count
    std::uint64_t seed = 1;
    std::string out_path;  ///< empty: write reports to stdout only
    std::string suite = "all";
    bool paper_sign = false;     ///< alternating-sign convention for the chain check
    bool exact_average = true;   ///< closed-form averaging multipliers (else quadrature)
    bool no_timings = false;     ///< strip wall-clock fields from reports
    int threads = 1;

    // Probe settings (cmd_probe and the independence report).
    ProbeThresholds probe_thresholds{};
    int probe_max_iterations = 600;
    double probe_max_seconds = 0.0;  ///< 0 = no wall-clock budget
    std::vector<int> probe_levels{16, 32, 64};

    // Orbit-diagnostic settings (cmd_orbit).
    double orbit_s = 400.0;
    int orbit_k = 3;
    int orbit_samples_per_unit = 512;

    // Primitive-solver settings (cmd_primitive).
    double h3_floor = 1e-8;
    std::string field_in;  ///< input field file for cmd_primitive
};

/// Throws std::invalid_argument with a usable message on any out-of-contract
/// value: resolutions must be powers of two in [8, 256], the FD order even in
/// [2, 12] and at most N_t, the matrix integral with det 1 and trace >= 3.
void validate(const RunConfig& cfg);

/// Builders for the validated ingredients. All call validate() themselves.
HyperbolicGluing make_gluing(const RunConfig& cfg);
GridShape make_shape(const RunConfig& cfg);
QuadratureSpec make_quad(const RunConfig& cfg);
ProbeBudget make_probe_budget(const RunConfig& cfg);

/// Applies the worker-thread cap to the process-wide pool.
void apply_threads(const RunConfig& cfg);

/// Parses "a,b,c,d" into the matrix entries. Throws std::invalid_argument.
std::array<std::int64_t, 4> parse_matrix_entries(const std::string& text);

}  // namespace hypertorus
