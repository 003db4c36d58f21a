#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "hypertorus/gluing.hpp"
#include "hypertorus/grid.hpp"

namespace hypertorus {

using cplx = std::complex<double>;

/// Complex scalar field sampled on the slab grid. Two kinds share the type:
///
///  - glued fields (slab() == false): samples of a function on the quotient,
///    i.e. the t=1 slice is identified with the permuted t=0 slice. The
///    construction measures how well the data honors that identification
///    (seam_defect, relative to the sup norm) by comparing the permuted t=0
///    slice against a polynomial extrapolation from the last slices.
///  - slab fields (slab() == true): plain data on [0,1)^3 with no seam
///    meaning. Operations that need the quotient structure refuse them.
class ScalarField {
  public:
    ScalarField() = default;
    ScalarField(const HyperbolicGluing& g, GridShape shape, bool slab, std::vector<cplx> data);

    const HyperbolicGluing& gluing() const { return g_; }
    const GridShape& shape() const { return shape_; }
    bool slab() const { return slab_; }
    double seam_defect() const { return seam_defect_; }

    std::span<const cplx> data() const { return data_; }
    std::span<cplx> mutable_data() { return data_; }
    cplx at(int i, int j, int l) const { return data_[shape_.index(i, j, l)]; }
    std::span<const cplx> slice(int l) const {
        return {data_.data() + static_cast<std::size_t>(l) * shape_.slice_size(),
                shape_.slice_size()};
    }

    /// Rebuilds the seam measurement after in-place edits via mutable_data().
    void remeasure_seam();

  private:
    HyperbolicGluing g_ = HyperbolicGluing::unchecked(Mat2i{}, 1.0, 0.0, 0.0);
    GridShape shape_{};
    bool slab_ = true;
    double seam_defect_ = 0.0;
    std::vector<cplx> data_;
};

/// Seam acceptance threshold at a given slice count. 1e-10 at the working
/// resolution (n_slices >= 64); coarser grids get proportionally more slack
/// because the extrapolation floor of the measurement itself moves.
double seam_tolerance(int n_slices);

/// Throws std::invalid_argument when f cannot be treated as a function on the
/// quotient: slab data, or seam defect above seam_tolerance.
void require_quotient(const ScalarField& f, const char* op);

/// Samples fn(x, y, t) on the grid. Glued fields get their seam measured.
ScalarField from_function(const HyperbolicGluing& g, GridShape shape, bool slab,
                          const std::function<cplx(double, double, double)>& fn);

/// Cached seam permutation for (gluing, N).
const GridPermutation& seam_permutation(const HyperbolicGluing& g, int N);

// --- frame derivatives -----------------------------------------------------
// X = lambda^t (d_x + a d_y), Y = lambda^{-t} (d_x + b d_y): exact per-slice
// Fourier multipliers. Z = -(1/log lambda) d_t: central finite differences of
// even order fd_order in t, wrapping through the seam permutation.

ScalarField deriv_x(const ScalarField& f);
ScalarField deriv_y(const ScalarField& f);
ScalarField deriv_z(const ScalarField& f, int fd_order = 8);

/// Central-difference weights c_1..c_M (antisymmetric half) for 2M-th order.
std::vector<double> fd_stencil_half(int order);

// --- flow pullbacks ---------------------------------------------------------
// (phi_s^X)* f (x,y,t) = f(x + s lambda^t, y + a s lambda^t, t): per-slice
// phase multipliers, exact on the trigonometric interpolant. Same for Y with
// lambda^{-t} and slope b.

ScalarField pullback_flow_x(const ScalarField& f, double s);
ScalarField pullback_flow_y(const ScalarField& f, double u);

/// (1/n) sum_{j=0}^{n-1} (phi_j^X)* f.
ScalarField birkhoff_average(const ScalarField& f, int n);

/// Closed-form limit of the flow averages: the fiberwise mean per slice
/// (all nonzero spatial modes dropped). Exactly flow- and seam-invariant.
ScalarField fiber_average(const ScalarField& f);

// --- integrals, norms, algebra ----------------------------------------------

/// Integral against the frame volume form: (log lambda / (a - b)) * mean of
/// the samples. Deterministic pairwise reduction. Requires a glued field.
cplx integrate(const ScalarField& f);

double sup_norm(const ScalarField& f);
/// Root mean square: sqrt(mean |f|^2).
double l2_norm(const ScalarField& f);
/// Mean of conj(f) * g.
cplx inner(const ScalarField& f, const ScalarField& g);

ScalarField add(const ScalarField& f, const ScalarField& g);
ScalarField sub(const ScalarField& f, const ScalarField& g);
ScalarField scale(const ScalarField& f, cplx c);
/// c*f + g.
ScalarField axpy(cplx c, const ScalarField& f, const ScalarField& g);

/// Pointwise product. With dealias (default), both factors and the result are
/// truncated to max(|k1|,|k2|) <= N/3, so retained modes of the product are
/// alias-free; pass false for the raw sample product.
ScalarField pointwise_product(const ScalarField& f, const ScalarField& g, bool dealias = true);
/// Zero all spatial modes with max(|k1|,|k2|) > N/3.
ScalarField dealias_truncate(const ScalarField& f);

// --- orbit equidistribution --------------------------------------------------

struct WeylRow {
    int k1 = 0, k2 = 0;
    double magnitude = 0;
};

/// Weyl sums along the expanding-direction orbit through a base point:
/// W_k(S) = (1/M) sum_m exp(2 pi i k.(x0 + s_m lambda^{t0} (1, a))) over M
/// equispaced s_m in [0, S), for all 0 < max(|k1|,|k2|) <= K.
struct OrbitReport {
    double S = 0;
    int K = 0;
    int samples = 0;
    std::array<double, 3> base{};
    double max_weyl = 0;
    int worst_k1 = 0, worst_k2 = 0;
    std::vector<WeylRow> rows;
};

OrbitReport orbit_discrepancy(const HyperbolicGluing& g, std::array<double, 3> base, double S,
                              int K, int samples_per_unit = 512);

}  // namespace hypertorus
