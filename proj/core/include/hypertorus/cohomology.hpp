#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "hypertorus/averaging.hpp"
#include "hypertorus/circle.hpp"
#include "hypertorus/frame_form.hpp"
#include "hypertorus/probe.hpp"

namespace hypertorus {

/// One step of the twisted coboundary: d(w - time-1 expanding-flow pullback
/// of w). Its image is the space the exactness probe searches.
FrameForm coboundary_T(const FrameForm& w, int fd_order = 8);

struct GeneratorResult {
    FrameForm eta;
    /// ||d eta|| / max(||eta||, eps) -- closedness certificate.
    double d_defect = 0.0;
    /// ||eta - (omega - time-1 pullback of omega)|| for the explicit omega
    /// that presents eta as a twisted difference, relative.
    double presentation_defect = 0.0;
};

/// eta = (pullback of phi from the circle) * theta. Certifies closedness
/// (<= 1e-8) and the presentation with omega = psi*alpha (<= 1e-10); throws
/// std::logic_error if either certificate fails.
GeneratorResult generator_h1(const CircleFunction& phi, const HyperbolicGluing& g, GridShape shape,
                             int fd_order = 8);
/// Same one degree up: eta = psi * theta^beta, omega = psi * alpha^beta.
GeneratorResult generator_h2(const CircleFunction& phi, const HyperbolicGluing& g, GridShape shape,
                             int fd_order = 8);

struct IndependenceReport {
    int m = 0;
    int degree = 0;
    double threshold = 1e-6;
    /// Residual fraction of each generator after least-squares deflation
    /// against the resolved coboundary image (order: cos 2pi kt, sin 2pi kt
    /// for k = 1..m).
    std::vector<double> residual_fractions;
    /// Eigenvalues of the Gram matrix of the normalized deflated directions.
    std::vector<double> gram_eigenvalues;
    int rank = 0;
};

/// Deflates the 2m circle-harmonic generators of the given degree against
/// the coboundary image and reports the Gram rank of what survives.
IndependenceReport independence_report(int m, int degree, const HyperbolicGluing& g,
                                       GridShape shape, int fd_order = 8,
                                       const ProbeBudget& budget = {});

struct H0Report {
    double g_norm = 0.0;
    double f_norm = 0.0;        // f = g - time-1 pullback of g
    double integral_abs = 0.0;  // |integrate(f)|
    double integral_rel = 0.0;  // integral_abs / max(g_norm, eps)
    double df_norm = 0.0;       // ||d f||, small iff f is locally constant
};

/// Degree-0 vanishing evidence: twisted differences of scalars integrate to
/// zero, and when df ~ 0 the difference itself must vanish.
H0Report h0_vanishing_check(const ScalarField& g, int fd_order = 8);

struct SmallDenominatorStats {
    int K = 0;                    // scan cutoff: 0 < max(|k1|,|k2|) <= K
    double min_abs = 0.0;         // min |k1 + a k2| over the scan
    std::array<int, 2> worst_mode{0, 0};
    /// Counts of floor(log10 |k1 + a k2|), clamped to [hist_lo, hist_lo+15].
    static constexpr int hist_lo = -12;
    std::array<int, 16> histogram{};
};

struct H3Report {
    double relative_residual = 0.0;  // ||d omega - rhs*vol|| / ||rhs||
    SmallDenominatorStats stats;
    double floor = 0.0;
    /// Modes (k1, k2, slice) whose smaller symbol fell below the floor.
    std::vector<std::array<int, 3>> flagged;
    /// How many of those had to use the other symbol because the preferred
    /// one was itself below the floor.
    int fallback_count = 0;
};

struct H3Result {
    cplx c{};            // mean level: integrate(f) / integrate(1)
    FrameForm primitive; // 2-form with d(primitive) = (f - c) * volume form
    H3Report report;
};

/// Degree-3 vanishing, constructively: splits off the mean and solves for a
/// primitive modewise (spatial modes by symbol division, the fiber mean by
/// exact t-integration pinned at w(0)=0). Throws std::runtime_error if both
/// symbols of some mode fall below the floor.
H3Result h3_primitive(const ScalarField& f, int fd_order = 8, double floor = 1e-8);

struct IsoReport {
    std::string status;  // PASS | FAIL | NOT-INVARIANT
    double gamma_defect = 0.0;  // ||w - time-1 pullback of w|| / ||w||
    double lie_ratio = 0.0;     // ||L_X w|| / ||w|| (0 when NOT-INVARIANT)
    double invariance_tol = 0.0;
    double pass_tol = 0.0;
};

/// On the time-1-fixed subspace the expanding Lie derivative must vanish;
/// forms outside that subspace are refused as NOT-INVARIANT.
IsoReport iso_injectivity_check(const FrameForm& w, int fd_order = 8,
                                double invariance_tol = 1e-8, double pass_tol = 1e-6);

/// Projection onto the time-1-pullback-fixed subspace: fiberwise means of
/// the components that the flow leaves alone, zero for the sheared one.
FrameForm invariant_part(const FrameForm& w);

struct ModeleqRow {
    int n = 0;
    double fn_sup = 0.0;           // ||(h - time-n pullback of h)/n||_inf
    double bound = 0.0;            // 2 ||h||_inf / n
    bool within_bound = false;
    double pattern_defect = 0.0;   // ||f_n - g||_inf against the candidate g
};

struct ModeleqReport {
    double h_sup = 0.0;
    std::vector<ModeleqRow> rows;
    bool all_within = false;
    bool decay_ok = false;  // largest-n difference has shrunk like 1/n
};

/// Telescoping-difference inequalities: f_n = (h - time-n pullback of h)/n
/// obeys ||f_n||_inf <= (2/n)||h||_inf and shrinks like 1/n; g is the
/// candidate limit pattern (pass zero when no candidate applies).
ModeleqReport modeleq_check(const ScalarField& g, const ScalarField& h,
                            const std::vector<int>& n_list);

/// Gauss-Legendre time average of flow pullbacks over [0, s]. Satisfies the
/// fundamental-theorem identity
///   flow_average(deriv_x f, s, X) = pullback_flow_x(f, s) - f
/// to quadrature accuracy.
ScalarField flow_average(const ScalarField& f, double s, FrameVector which,
                         const QuadratureSpec& quad = {});

}  // namespace hypertorus
