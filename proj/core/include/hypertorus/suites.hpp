#pragma once

#include "hypertorus/config.hpp"
#include "hypertorus/frame_form.hpp"
#include "hypertorus/report.hpp"
#include "hypertorus/synth.hpp"

namespace hypertorus {

/// Identity suites behind cmd_verify. Every row pins its tolerance in code;
/// rows read the seed, grid, FD order and averaging route from the config, so
/// a fixed config yields a byte-identical report regardless of thread count.
SuiteReport suite_structure(const RunConfig& cfg, int n_fields = 20);
SuiteReport suite_flows(const RunConfig& cfg, int n_fields = 10);
SuiteReport suite_operator(const RunConfig& cfg, int n_forms = 10);
SuiteReport suite_cohomology(const RunConfig& cfg);
/// Dispatches on cfg.suite ("all" concatenates the four in the order above).
SuiteReport run_suite(const RunConfig& cfg);

/// A random form of the given degree with independently drawn quotient-field
/// components.
FrameForm random_form(const HyperbolicGluing& g, GridShape shape, Rng& rng, int degree,
                      const SynthOptions& opt = {});

/// Fields adapted to differentiation after expanding-flow pullbacks. The
/// spatial spectrum is one transposed-matrix chain through (1,0) with the
/// envelope centered on the near-null channel of the expanding frequency
/// k1 + a*k2, placed by a small deterministic search. Admissible placements
/// must (a) decay to ~exp(-30) at both chain ends, so spectrum truncation
/// cannot perturb the seam, and (b) keep a numerical replay of the library's
/// ghost-slice seam measurement under a small fraction of seam_tolerance at
/// shape.n_slices slices, for every flow time in [-s_max, s_max] (the raw
/// field and the worst pullback are both checked). Among admissible
/// placements the a-priori identity bound at flow time s_max is minimized.
/// Generic fields carry O(1) expanding frequencies whose pullback phase no
/// affordable slice count can resolve, so this adapted family is the class
/// on which pullback-then-differentiate pipelines are numerically testable;
/// the companion bound reports what truncation analysis predicts for the
/// rest. Throws invalid_argument if no placement fits (grid or slice count
/// too coarse for the requested flow time).
FieldSpec flow_resolved_spec(const HyperbolicGluing& g, GridShape shape, double s_max,
                             Rng& rng);

/// A form of the given degree whose components are independent samples of
/// flow_resolved_spec at the given shape; see above for the admissibility
/// guarantees.
FrameForm flow_resolved_form(const HyperbolicGluing& g, GridShape shape, int degree,
                             double s_max, Rng& rng);

/// A-priori relative bound (with a 4x safety factor and a roundoff floor) on
/// the flow-derivative identity residual for a spec from flow_resolved_spec,
/// at flow time s, n_slices slices and FD order p.
double flow_identity_bound(const FieldSpec& spec, const HyperbolicGluing& g, double s, int nt,
                           int p);

/// Measured relative residual of Z(P_s f) + s P_s(X f) - P_s(Z f) where P_s
/// is the expanding-flow pullback; normalized by ||f||.
double flow_identity_residual(const ScalarField& f, double s, int fd_order);

}  // namespace hypertorus
