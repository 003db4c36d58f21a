#include "hypertorus/averaging.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hypertorus/parallel.hpp"
#include "hypertorus/spectral.hpp"

namespace hypertorus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

// j0(w) = (e^{iw} - 1) / (iw)        = integral of e^{isw} over s in [0,1]
// j1(w) = (e^{iw} - j0(w)) / (iw)    = integral of s e^{isw}
// Near w = 0 both quotients lose all their digits, so switch to the Taylor
// series; |w| = 0.5 keeps both branches at full double precision.
void phase_integrals(double w, cplx& j0, cplx& j1) {
    if (std::abs(w) >= 0.5) {
        const cplx e = std::polar(1.0, w);
        const cplx iw = kI * w;
        j0 = (e - 1.0) / iw;
        j1 = (e - j0) / iw;
        return;
    }
    const cplx iw = kI * w;
    cplx term{1.0, 0.0};  // (iw)^n / n!
    j0 = 0.0;
    j1 = 0.0;
    for (int n = 0; n < 24; ++n) {
        j0 += term / static_cast<double>(n + 1);
        j1 += term / static_cast<double>(n + 2);
        if (std::abs(term) < 1e-19) break;
        term *= iw / static_cast<double>(n + 1);
    }
}

// Applies per-mode multipliers m0, m1 to f, returning (M0 f, M1 f) in sample
// space. mults(k1, k2, l, m0, m1) fills both multipliers for one mode.
template <class Fill>
std::pair<ScalarField, ScalarField> apply_mode_pair(const ScalarField& f, Fill&& fill) {
    const GridShape shape = f.shape();
    const int N = shape.N;
    const std::size_t ss = shape.slice_size();
    std::vector<cplx> a0(f.data().begin(), f.data().end());
    std::vector<cplx> a1(shape.size());
    // Touch the planner once before going parallel.
    spectral::warm_plans(N);
    pool::parallel_for(shape.n_slices, [&](int l) {
        cplx* p0 = a0.data() + static_cast<std::size_t>(l) * ss;
        cplx* p1 = a1.data() + static_cast<std::size_t>(l) * ss;
        spectral::forward_slice(p0, N);
        for (int mj = 0; mj < N; ++mj) {
            const int k2 = fft_freq(mj, N);
            for (int mi = 0; mi < N; ++mi) {
                const int k1 = fft_freq(mi, N);
                cplx m0, m1;
                fill(k1, k2, l, m0, m1);
                const std::size_t idx = static_cast<std::size_t>(mj) * N + mi;
                p1[idx] = p0[idx] * m1;
                p0[idx] *= m0;
            }
        }
        spectral::inverse_slice(p0, N);
        spectral::inverse_slice(p1, N);
        const double scale = 1.0 / (static_cast<double>(N) * N);
        for (std::size_t i = 0; i < ss; ++i) {
            p0[i] *= scale;
            p1[i] *= scale;
        }
    });
    ScalarField f0(f.gluing(), shape, f.slab(), std::move(a0));
    ScalarField f1(f.gluing(), shape, f.slab(), std::move(a1));
    return {std::move(f0), std::move(f1)};
}

}  // namespace

int QuadratureSpec::effective_panels(int N) const {
    if (panels > 0) return panels;
    return std::max(4, N / 8);
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
    nodes.resize(order);
    weights.resize(order);
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            // p0 = P_n(x); derivative from the standard identity.
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

std::pair<ScalarField, ScalarField> time_integrals_exact(const ScalarField& f) {
    const auto& g = f.gluing();
    const double a = g.slope_a();
    const int nt = f.shape().n_slices;
    return apply_mode_pair(f, [&](int k1, int k2, int l, cplx& m0, cplx& m1) {
        const double t = static_cast<double>(l) / nt;
        const double omega = kTwoPi * g.lambda_pow(t) * (k1 + a * k2);
        phase_integrals(omega, m0, m1);
    });
}

std::pair<ScalarField, ScalarField> time_integrals_quad(const ScalarField& f,
                                                        const QuadratureSpec& quad) {
    const auto& g = f.gluing();
    const double a = g.slope_a();
    const int nt = f.shape().n_slices;
    const int panels = quad.effective_panels(f.shape().N);

    std::vector<double> gl_x, gl_w;
    gauss_legendre(quad.order, gl_x, gl_w);
    std::vector<double> s_nodes, s_weights;
    s_nodes.reserve(static_cast<std::size_t>(panels) * quad.order);
    s_weights.reserve(s_nodes.capacity());
    for (int p = 0; p < panels; ++p) {
        for (int q = 0; q < quad.order; ++q) {
            s_nodes.push_back((p + 0.5 * (gl_x[q] + 1.0)) / panels);
            s_weights.push_back(0.5 * gl_w[q] / panels);
        }
    }

    return apply_mode_pair(f, [&](int k1, int k2, int l, cplx& m0, cplx& m1) {
        const double t = static_cast<double>(l) / nt;
        const double omega = kTwoPi * g.lambda_pow(t) * (k1 + a * k2);
        cplx acc0 = 0.0, acc1 = 0.0;
        for (std::size_t q = 0; q < s_nodes.size(); ++q) {
            const cplx e = std::polar(s_weights[q], s_nodes[q] * omega);
            acc0 += e;
            acc1 += s_nodes[q] * e;
        }
        m0 = acc0;
        m1 = acc1;
    });
}

namespace {

// Assembles I(w) from the two scalar time integrals, per degree. The theta
// component inherits the shear of the coframe under the flow.
FrameForm assemble_average(const FrameForm& w, bool exact, const QuadratureSpec& quad) {
    auto integrals = [&](const ScalarField& f) {
        return exact ? time_integrals_exact(f) : time_integrals_quad(f, quad);
    };
    switch (w.degree()) {
        case 0: return FrameForm::scalar(integrals(w.comp(0)).first);
        case 1: {
            auto [a0f, a1f] = integrals(w.comp(0));
            ScalarField a0g = integrals(w.comp(1)).first;
            ScalarField a0h = integrals(w.comp(2)).first;
            return FrameForm::one_form(std::move(a0f), std::move(a0g),
                                       sub(a0h, a1f));
        }
        case 2: {
            auto [a0F, a1F] = integrals(w.comp(0));
            ScalarField a0G = integrals(w.comp(1)).first;
            ScalarField a0H = integrals(w.comp(2)).first;
            return FrameForm::two_form(std::move(a0F), std::move(a0G), add(a0H, a1F));
        }
        case 3: return FrameForm::top_form(integrals(w.comp(0)).first);
        default: throw std::invalid_argument("average: bad degree");
    }
}

}  // namespace

FrameForm average_I(const FrameForm& w, const QuadratureSpec& quad) {
    return assemble_average(w, false, quad);
}

FrameForm average_I_exact(const FrameForm& w) { return assemble_average(w, true, {}); }

FrameForm average_signed(const FrameForm& w, bool alternate_sign, bool exact,
                         const QuadratureSpec& quad) {
    FrameForm r = exact ? average_I_exact(w) : average_I(w, quad);
    if (alternate_sign && (w.degree() % 2 == 1)) return form_scale(r, -1.0);
    return r;
}

double chain_defect(const FrameForm& w, bool alternate_sign, bool exact,
                    const QuadratureSpec& quad, int fd_order) {
    const FrameForm Idw = average_signed(exterior_d(w, fd_order), alternate_sign, exact, quad);
    const FrameForm dIw = exterior_d(average_signed(w, alternate_sign, exact, quad), fd_order);
    const double sign = alternate_sign ? -1.0 : 1.0;
    const FrameForm defect = form_sub(Idw, form_scale(dIw, sign));
    return form_l2_norm(defect) / std::max(form_l2_norm(w), 1e-300);
}

CoinvariantResult coinvariant_image(const FrameForm& w, const QuadratureSpec& quad,
                                    int fd_order) {
    FrameForm image = form_sub(pullback_form_flow_x(w, 1.0), w);
    const FrameForm averaged = average_I(lie_derivative(FrameVector::X, w, fd_order), quad);
    CoinvariantResult r{std::move(image), 0.0, form_l2_norm(w)};
    r.defect = form_l2_norm(form_sub(averaged, r.image));
    return r;
}

}  // namespace hypertorus
