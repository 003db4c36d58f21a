#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypertorus/frame_form.hpp"

namespace hypertorus {

struct ProbeBudget {
    int max_iterations = 600;  // per refinement level
    double max_seconds = 0.0;  // whole-probe wall budget; 0 = unlimited
};

/// Verdict thresholds (engineering choices; every report carries them).
struct ProbeThresholds {
    double exact_like = 1e-6;  // relative residual for EXACT-LIKE
    double plateau = 0.1;      // floor the residual must hold at every level
    double ratio = 0.9;        // minimum level-to-level residual ratio
};

struct ProbeLevelResult {
    int N = 0;
    int n_slices = 0;
    double relative_residual = 0.0;
    int iterations = 0;
    std::string stop_reason;
};

struct ProbeReport {
    double target_norm = 0.0;  // of the finest-level target
    std::vector<ProbeLevelResult> levels;
    std::string verdict;  // EXACT-LIKE | OBSTRUCTED | INCONCLUSIVE
    ProbeThresholds thresholds;
    double seconds = 0.0;
    bool budget_exhausted = false;
};

struct CglsOutcome {
    double relative_residual = 0.0;
    int iterations = 0;
    std::string stop_reason;
    /// eta minus the best resolved image, in sample space (filled on request).
    std::optional<FrameForm> residual_direction;
};

/// Least-squares minimization of || image - eta || over the coboundary's
/// search space (scalars for a degree-1 target, 1-forms for degree-2), by
/// conjugate gradient on the normal equations. The search runs over the
/// substituted variable u = omega - (time-1 pullback of omega), whose span
/// equals the original search space's image exactly on the grid (the
/// substitution is invertible off the fiberwise means); this keeps the
/// iteration free of the time-1 map's small denominators. A Fourier-diagonal
/// right preconditioner scales gradient-sized singular values to O(1).
CglsOutcome probe_minimize(const FrameForm& eta, int fd_order, const ProbeBudget& budget,
                           double converge_rel = 2e-7, bool want_residual = false);

/// Builds the target at one refinement level. Coarse levels cannot hold a
/// fine grid's spectrum, so targets are rebuilt analytically per level.
using TargetBuilder = std::function<FrameForm(GridShape)>;

/// Runs probe_minimize across refinement levels (N, n_slices = N) and applies
/// the verdict rules to the residual curve.
ProbeReport exactness_probe(const TargetBuilder& build_target, int fd_order = 8,
                            const ProbeBudget& budget = {}, const ProbeThresholds& thresholds = {},
                            const std::vector<int>& level_N = {16, 32, 64});

struct ProbeConsistency {
    double adjoint_defect = 0.0;   // worst <Bx,y> vs <x,B*y> mismatch, relative
    double operator_defect = 0.0;  // internal operator vs exterior_d of the projected form
};

/// Test hook: validates the probe's internal mode-space operator against the
/// public sample-space calculus, and its adjoint pairing, on random data.
ProbeConsistency probe_consistency(const HyperbolicGluing& g, GridShape shape, int fd_order,
                                   std::uint64_t seed);

}  // namespace hypertorus
