#include "hypertorus/config.hpp"

#include <stdexcept>
#include <string>

#include "hypertorus/parallel.hpp"

namespace hypertorus {
namespace {

bool power_of_two_in_range(int n) { return n >= 8 && n <= 256 && (n & (n - 1)) == 0; }

}  // namespace

void validate(const RunConfig& cfg) {
    if (!power_of_two_in_range(cfg.grid_n))
        throw std::invalid_argument("grid must be a power of two in [8, 256], got " +
                                    std::to_string(cfg.grid_n));
    if (!power_of_two_in_range(cfg.n_slices))
        throw std::invalid_argument("tslices must be a power of two in [8, 256], got " +
                                    std::to_string(cfg.n_slices));
    if (cfg.fd_order < 2 || cfg.fd_order > 12 || cfg.fd_order % 2 != 0)
        throw std::invalid_argument("fd-order must be even and in [2, 12], got " +
                                    std::to_string(cfg.fd_order));
    if (cfg.fd_order > cfg.n_slices)
        throw std::invalid_argument("fd-order exceeds the slice count");
    if (cfg.quad_order < 2 || cfg.quad_order > 64)
        throw std::invalid_argument("quad-order must be in [2, 64], got " +
                                    std::to_string(cfg.quad_order));
    if (cfg.quad_panels < 0 || cfg.quad_panels > 4096)
        throw std::invalid_argument("quad-panels must be in [0, 4096], got " +
                                    std::to_string(cfg.quad_panels));
    if (cfg.threads < 1 || cfg.threads > 256)
        throw std::invalid_argument("threads must be in [1, 256], got " +
                                    std::to_string(cfg.threads));
    if (cfg.suite != "structure" && cfg.suite != "flows" && cfg.suite != "operator" &&
        cfg.suite != "cohomology" && cfg.suite != "all")
        throw std::invalid_argument(
            "suite must be one of structure|flows|operator|cohomology|all, got '" + cfg.suite +
            "'");
    if (cfg.probe_max_iterations < 1)
        throw std::invalid_argument("probe iteration cap must be positive");
    if (cfg.probe_max_seconds < 0.0)
        throw std::invalid_argument("probe time budget must be non-negative");
    if (cfg.probe_levels.empty())
        throw std::invalid_argument("probe levels must not be empty");
    for (const int n : cfg.probe_levels)
        if (!power_of_two_in_range(n))
            throw std::invalid_argument("probe levels must be powers of two in [8, 256]");
    if (cfg.orbit_s < 0.0) throw std::invalid_argument("orbit S must be non-negative");
    if (cfg.orbit_k < 0) throw std::invalid_argument("orbit K must be non-negative");
    if (cfg.orbit_samples_per_unit < 1)
        throw std::invalid_argument("orbit sample density must be positive");
    if (!(cfg.h3_floor > 0.0))
        throw std::invalid_argument("small-denominator floor must be positive");
    // from_matrix rejects non-unimodular or non-hyperbolic matrices.
    (void)HyperbolicGluing::from_matrix(Mat2i{cfg.matrix});
}

HyperbolicGluing make_gluing(const RunConfig& cfg) {
    validate(cfg);
    return HyperbolicGluing::from_matrix(Mat2i{cfg.matrix});
}

GridShape make_shape(const RunConfig& cfg) {
    validate(cfg);
    return GridShape{cfg.grid_n, cfg.n_slices};
}

QuadratureSpec make_quad(const RunConfig& cfg) {
    validate(cfg);
    QuadratureSpec q;
    q.order = cfg.quad_order;
    q.panels = cfg.quad_panels;
    return q;
}

ProbeBudget make_probe_budget(const RunConfig& cfg) {
    validate(cfg);
    ProbeBudget b;
    b.max_iterations = cfg.probe_max_iterations;
    b.max_seconds = cfg.probe_max_seconds;
    return b;
}

void apply_threads(const RunConfig& cfg) { pool::set_threads(cfg.threads); }

std::array<std::int64_t, 4> parse_matrix_entries(const std::string& text) {
    return parse_matrix_arg(text).m;
}

}  // namespace hypertorus
