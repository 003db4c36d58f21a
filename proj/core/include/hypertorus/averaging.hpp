#pragma once

#include <utility>
#include <vector>

#include "hypertorus/frame_form.hpp"

namespace hypertorus {

/// Composite Gauss-Legendre rule for the unit flow-time interval.
struct QuadratureSpec {
    int order = 16;
    /// 0 = automatic: max(4, N/8) panels, so the rule keeps pace with how
    /// oscillatory the pullback phases get on finer grids.
    int panels = 0;

    int effective_panels(int N) const;
};

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on the Legendre
/// recurrence; order up to a few hundred is exact to roundoff).
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// The averaging operator: the unit-time integral of expanding-flow pullbacks,
/// applied through numerical quadrature of the flow parameter.
FrameForm average_I(const FrameForm& w, const QuadratureSpec& quad = {});

/// The same operator evaluated through the closed-form time integral of each
/// Fourier mode's phase (series near the removable singularity). This is the
/// independent route average_I is validated against.
FrameForm average_I_exact(const FrameForm& w);

/// (-1)^degree wrapper some conventions use; applied when alternate_sign.
FrameForm average_signed(const FrameForm& w, bool alternate_sign, bool exact,
                         const QuadratureSpec& quad = {});

/// l2 defect of the intertwining of I with d, normalized by ||w||. In the
/// commuting convention (alternate_sign=false) the comparison is I(dw) vs
/// +d(Iw); the alternating convention flips the sign of the comparison.
double chain_defect(const FrameForm& w, bool alternate_sign, bool exact = true,
                    const QuadratureSpec& quad = {}, int fd_order = 8);

/// The time-1 pullback minus the identity, with the fundamental-theorem
/// cross-check I(L_X w) = image computed alongside.
struct CoinvariantResult {
    FrameForm image;     // pullback at time 1, minus w
    double defect = 0;   // || average of L_X w over unit time  -  image ||
    double w_norm = 0;   // ||w||, the scale the defect is judged against
};
CoinvariantResult coinvariant_image(const FrameForm& w, const QuadratureSpec& quad = {},
                                    int fd_order = 8);

/// Unit-interval integrals of the scalar flow pullbacks:
/// first = integral of P_s f ds, second = integral of s P_s f ds.
std::pair<ScalarField, ScalarField> time_integrals_exact(const ScalarField& f);
std::pair<ScalarField, ScalarField> time_integrals_quad(const ScalarField& f,
                                                        const QuadratureSpec& quad);

}  // namespace hypertorus
