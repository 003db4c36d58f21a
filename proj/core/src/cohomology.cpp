#include "hypertorus/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "hypertorus/parallel.hpp"
#include "hypertorus/reduce.hpp"
#include "hypertorus/spectral.hpp"

namespace hypertorus {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTiny = 1e-300;

// Certificate tolerances for the generator constructions. Both sides of each
// certificate are exact modulo transform round-trips, so these have orders of
// magnitude of slack on any grid.
constexpr double kClosednessTol = 1e-8;
constexpr double kPresentationTol = 1e-10;

cplx form_inner(const FrameForm& a, const FrameForm& b) {
    cplx acc = 0.0;
    for (int c = 0; c < a.n_components(); ++c) acc += inner(a.comp(c), b.comp(c));
    return acc;
}

GeneratorResult finish_generator(FrameForm eta, FrameForm omega, int fd_order,
                                 const char* which) {
    GeneratorResult out{std::move(eta), 0.0, 0.0};
    const double norm = form_l2_norm(out.eta);
    const double scale_inv = 1.0 / std::max(norm, kTiny);
    out.d_defect = form_l2_norm(exterior_d(out.eta, fd_order)) * scale_inv;
    const FrameForm presented = form_sub(omega, pullback_form_flow_x(omega, 1.0));
    out.presentation_defect = form_l2_norm(form_sub(out.eta, presented)) * scale_inv;
    if (norm > 0.0 &&
        (out.d_defect > kClosednessTol || out.presentation_defect > kPresentationTol))
        throw std::logic_error(std::string(which) + ": certificate failure (d defect " +
                               std::to_string(out.d_defect) + ", presentation defect " +
                               std::to_string(out.presentation_defect) + ")");
    return out;
}

}  // namespace

FrameForm coboundary_T(const FrameForm& w, int fd_order) {
    if (w.slab())
        throw std::invalid_argument("coboundary_T: needs a quotient form, not slab data");
    return exterior_d(form_sub(w, pullback_form_flow_x(w, 1.0)), fd_order);
}

GeneratorResult generator_h1(const CircleFunction& phi, const HyperbolicGluing& g,
                             GridShape shape, int fd_order) {
    const ScalarField psi = pullback_circle(g, shape, phi);
    const ScalarField zero = scale(psi, 0.0);
    FrameForm eta = FrameForm::one_form(zero, zero, psi);
    FrameForm omega = FrameForm::one_form(psi, zero, zero);
    return finish_generator(std::move(eta), std::move(omega), fd_order, "generator_h1");
}

GeneratorResult generator_h2(const CircleFunction& phi, const HyperbolicGluing& g,
                             GridShape shape, int fd_order) {
    const ScalarField psi = pullback_circle(g, shape, phi);
    const ScalarField zero = scale(psi, 0.0);
    FrameForm eta = FrameForm::two_form(zero, zero, scale(psi, -1.0));
    FrameForm omega = FrameForm::two_form(psi, zero, zero);
    return finish_generator(std::move(eta), std::move(omega), fd_order, "generator_h2");
}

IndependenceReport independence_report(int m, int degree, const HyperbolicGluing& g,
                                       GridShape shape, int fd_order,
                                       const ProbeBudget& budget) {
    if (degree != 1 && degree != 2)
        throw std::invalid_argument("independence_report: degree must be 1 or 2");
    if (m < 0) throw std::invalid_argument("independence_report: m must be non-negative");
    IndependenceReport rep;
    rep.m = m;
    rep.degree = degree;
    if (m == 0) return rep;

    std::vector<FrameForm> dirs;
    std::vector<double> norms;
    for (int k = 1; k <= m; ++k) {
        for (const bool use_sine : {false, true}) {
            const CircleFunction phi =
                use_sine ? CircleFunction::sine(k) : CircleFunction::cosine(k);
            GeneratorResult gen = degree == 1 ? generator_h1(phi, g, shape, fd_order)
                                              : generator_h2(phi, g, shape, fd_order);
            CglsOutcome out = probe_minimize(gen.eta, fd_order, budget, 2e-7, true);
            rep.residual_fractions.push_back(out.relative_residual);
            dirs.push_back(std::move(*out.residual_direction));
            norms.push_back(form_l2_norm(dirs.back()));
        }
    }

    const int n = static_cast<int>(dirs.size());
    Eigen::MatrixXcd gram(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            gram(a, b) = form_inner(dirs[static_cast<std::size_t>(a)],
                                    dirs[static_cast<std::size_t>(b)]) /
                         std::max(norms[static_cast<std::size_t>(a)] *
                                      norms[static_cast<std::size_t>(b)],
                                  kTiny);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    rep.gram_eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(rep.gram_eigenvalues.rbegin(), rep.gram_eigenvalues.rend());
    rep.rank = static_cast<int>(std::count_if(rep.gram_eigenvalues.begin(),
                                              rep.gram_eigenvalues.end(),
                                              [&](double e) { return e >= rep.threshold; }));
    return rep;
}

H0Report h0_vanishing_check(const ScalarField& g, int fd_order) {
    if (g.slab())
        throw std::invalid_argument("h0_vanishing_check: needs a quotient field");
    H0Report rep;
    rep.g_norm = l2_norm(g);
    const ScalarField f = sub(g, pullback_flow_x(g, 1.0));
    rep.f_norm = l2_norm(f);
    // A fixed field differs from its pullback only by transform round-off;
    // the remaining defects would measure noise, and are zero at scale.
    if (rep.f_norm <= 1e-13 * std::max(rep.g_norm, kTiny)) return rep;
    rep.integral_abs = std::abs(integrate(f));
    rep.integral_rel = rep.integral_abs / std::max(rep.g_norm, kTiny);
    rep.df_norm = form_l2_norm(exterior_d(FrameForm::scalar(f), fd_order));
    return rep;
}

H3Result h3_primitive(const ScalarField& f, int fd_order, double floor) {
    require_quotient(f, "h3_primitive");
    const HyperbolicGluing& g = f.gluing();
    const GridShape shape = f.shape();
    const int N = shape.N;
    const int nt = shape.n_slices;
    const std::size_t ss = shape.slice_size();

    const ScalarField ones =
        from_function(g, shape, false, [](double, double, double) { return cplx(1.0, 0.0); });
    const cplx c = integrate(f) / integrate(ones);

    std::vector<cplx> rhs_data(f.data().begin(), f.data().end());
    for (auto& v : rhs_data) v -= c;
    const ScalarField rhs(g, shape, false, std::move(rhs_data));

    // Slice spectra of the right-hand side.
    std::vector<cplx> modes(rhs.data().begin(), rhs.data().end());
    spectral::warm_plans(N);
    pool::parallel_for(nt, [&](int l) {
        spectral::forward_slice(modes.data() + static_cast<std::size_t>(l) * ss, N);
    });

    std::vector<cplx> u_modes(shape.size(), cplx(0.0));
    std::vector<cplx> v_modes(shape.size(), cplx(0.0));
    std::vector<cplx> w_modes(shape.size(), cplx(0.0));

    const double a_slope = g.slope_a();
    const double b_slope = g.slope_b();
    std::vector<std::vector<std::array<int, 3>>> flagged_per_slice(static_cast<std::size_t>(nt));
    std::vector<int> fallback_per_slice(static_cast<std::size_t>(nt), 0);
    std::vector<std::uint8_t> abort_per_slice(static_cast<std::size_t>(nt), 0);

    pool::parallel_for(nt, [&](int l) {
        const double t = static_cast<double>(l) / nt;
        // Mirror the spectral-derivative symbols exactly so the division is
        // their exact inverse.
        const double rate_x = g.lambda_pow(1.0 * t);
        const double rate_y = g.lambda_pow(-1.0 * t);
        const cplx* src = modes.data() + static_cast<std::size_t>(l) * ss;
        cplx* u = u_modes.data() + static_cast<std::size_t>(l) * ss;
        cplx* v = v_modes.data() + static_cast<std::size_t>(l) * ss;
        for (int mj = 0; mj < N; ++mj) {
            const double k2 = fft_freq(mj, N);
            for (int mi = 0; mi < N; ++mi) {
                if (mi == 0 && mj == 0) continue;
                const double k1 = fft_freq(mi, N);
                const std::size_t bin = static_cast<std::size_t>(mj) * N + mi;
                const cplx sx(0.0, kTwoPi * rate_x * (k1 + a_slope * k2));
                const cplx sy(0.0, kTwoPi * rate_y * (k1 + b_slope * k2));
                const double ax = std::abs(sx.imag());
                const double ay = std::abs(sy.imag());
                if (std::min(ax, ay) < floor)
                    flagged_per_slice[static_cast<std::size_t>(l)].push_back(
                        {static_cast<int>(k1), static_cast<int>(k2), l});
                if (std::max(ax, ay) < floor) {
                    abort_per_slice[static_cast<std::size_t>(l)] = 1;
                    continue;
                }
                if (ax >= ay) {
                    u[bin] = src[bin] / sx;
                } else {
                    if (ax < floor) ++fallback_per_slice[static_cast<std::size_t>(l)];
                    v[bin] = src[bin] / sy;
                }
            }
        }
    });
    for (const auto flag : abort_per_slice)
        if (flag)
            throw std::runtime_error(
                "h3_primitive: both flow symbols below the floor for some mode "
                "(the slopes should make this impossible; check the gluing matrix)");

    // Fiber mean: exact spectral integration along t, pinned at w(0) = 0.
    // The zero mode line is gluing-fixed, so it is plainly periodic.
    {
        spectral::warm_line(nt);
        std::vector<cplx> line(static_cast<std::size_t>(nt));
        for (int l = 0; l < nt; ++l)
            line[static_cast<std::size_t>(l)] = modes[static_cast<std::size_t>(l) * ss];
        spectral::forward_line(line.data(), nt);
        line[0] = 0.0;
        for (int m = 1; m < nt; ++m) {
            const double freq = fft_freq(m, nt);
            line[static_cast<std::size_t>(m)] *= cplx(0.0, g.log_lambda() / (kTwoPi * freq));
        }
        spectral::inverse_line(line.data(), nt);
        const double inv_nt = 1.0 / nt;
        for (auto& vv : line) vv *= inv_nt;
        const cplx at_zero = line[0];
        for (int l = 0; l < nt; ++l)
            w_modes[static_cast<std::size_t>(l) * ss] = line[static_cast<std::size_t>(l)] - at_zero;
    }

    const auto to_field = [&](std::vector<cplx>& mode_data) {
        const double inv = 1.0 / static_cast<double>(ss);
        pool::parallel_for(nt, [&](int l) {
            cplx* slice = mode_data.data() + static_cast<std::size_t>(l) * ss;
            spectral::inverse_slice(slice, N);
            for (std::size_t i = 0; i < ss; ++i) slice[i] *= inv;
        });
        return ScalarField(g, shape, false, std::move(mode_data));
    };
    ScalarField u_field = to_field(u_modes);
    ScalarField v_field = to_field(v_modes);
    ScalarField w_field = to_field(w_modes);

    H3Result out{c, FrameForm::two_form(std::move(w_field), scale(v_field, -1.0),
                                        std::move(u_field)),
                 {}};
    out.report.floor = floor;
    for (int l = 0; l < nt; ++l) {
        auto& per = flagged_per_slice[static_cast<std::size_t>(l)];
        out.report.flagged.insert(out.report.flagged.end(), per.begin(), per.end());
        out.report.fallback_count += fallback_per_slice[static_cast<std::size_t>(l)];
    }

    const FrameForm d_prim = exterior_d(out.primitive, fd_order);
    out.report.relative_residual =
        l2_norm(sub(d_prim.comp(0), rhs)) / std::max(l2_norm(rhs), kTiny);

    SmallDenominatorStats& st = out.report.stats;
    st.K = N / 2;
    st.min_abs = 0.0;
    for (int k2 = -st.K; k2 <= st.K; ++k2) {
        for (int k1 = -st.K; k1 <= st.K; ++k1) {
            if (k1 == 0 && k2 == 0) continue;
            if (std::max(std::abs(k1), std::abs(k2)) > st.K) continue;
            const double val = std::abs(k1 + a_slope * k2);
            if (st.min_abs == 0.0 || val < st.min_abs) {
                st.min_abs = val;
                st.worst_mode = {k1, k2};
            }
            const int bucket = std::clamp(
                static_cast<int>(std::floor(std::log10(std::max(val, 1e-300)))) -
                    SmallDenominatorStats::hist_lo,
                0, static_cast<int>(st.histogram.size()) - 1);
            st.histogram[static_cast<std::size_t>(bucket)]++;
        }
    }
    return out;
}

IsoReport iso_injectivity_check(const FrameForm& w, int fd_order, double invariance_tol,
                                double pass_tol) {
    IsoReport rep;
    rep.invariance_tol = invariance_tol;
    rep.pass_tol = pass_tol;
    const double wn = form_l2_norm(w);
    rep.gamma_defect =
        form_l2_norm(form_sub(w, pullback_form_flow_x(w, 1.0))) / std::max(wn, kTiny);
    if (rep.gamma_defect > invariance_tol) {
        rep.status = "NOT-INVARIANT";
        return rep;
    }
    rep.lie_ratio = form_l2_norm(lie_derivative(FrameVector::X, w, fd_order)) /
                    std::max(wn, kTiny);
    rep.status = rep.lie_ratio <= pass_tol ? "PASS" : "FAIL";
    return rep;
}

FrameForm invariant_part(const FrameForm& w) {
    switch (w.degree()) {
        case 0:
            return FrameForm::scalar(fiber_average(w.comp(0)));
        case 1:
            return FrameForm::one_form(scale(w.comp(0), 0.0), fiber_average(w.comp(1)),
                                       fiber_average(w.comp(2)));
        case 2:
            return FrameForm::two_form(scale(w.comp(0), 0.0), fiber_average(w.comp(1)),
                                       fiber_average(w.comp(2)));
        default:
            return FrameForm::top_form(fiber_average(w.comp(0)));
    }
}

ModeleqReport modeleq_check(const ScalarField& g, const ScalarField& h,
                            const std::vector<int>& n_list) {
    ModeleqReport rep;
    rep.h_sup = sup_norm(h);
    rep.all_within = true;
    for (const int n : n_list) {
        if (n < 1) throw std::invalid_argument("modeleq_check: n must be positive");
        const ScalarField fn =
            scale(sub(h, pullback_flow_x(h, static_cast<double>(n))), 1.0 / n);
        ModeleqRow row;
        row.n = n;
        row.fn_sup = sup_norm(fn);
        row.bound = 2.0 * rep.h_sup / n;
        row.within_bound = row.fn_sup <= row.bound * (1.0 + 1e-9) + 1e-15 * rep.h_sup;
        row.pattern_defect = sup_norm(sub(fn, g));
        rep.all_within = rep.all_within && row.within_bound;
        rep.rows.push_back(row);
    }
    if (rep.rows.size() < 2) {
        rep.decay_ok = true;
        return rep;
    }
    const auto cmp = [](const ModeleqRow& x, const ModeleqRow& y) { return x.n < y.n; };
    const auto lo = *std::min_element(rep.rows.begin(), rep.rows.end(), cmp);
    const auto hi = *std::max_element(rep.rows.begin(), rep.rows.end(), cmp);
    rep.decay_ok = hi.fn_sup <= 2.0 * lo.fn_sup * (static_cast<double>(lo.n) / hi.n) +
                                    1e-12 * rep.h_sup;
    return rep;
}

ScalarField flow_average(const ScalarField& f, double s, FrameVector which,
                         const QuadratureSpec& quad) {
    if (which == FrameVector::Z)
        throw std::invalid_argument("flow_average: only the X and Y flows are parametrized");
    ScalarField acc = scale(f, 0.0);
    if (s == 0.0) return acc;
    const int panels = quad.panels > 0
                           ? quad.panels
                           : std::max(4, static_cast<int>(std::ceil(
                                             std::abs(s) * f.shape().N / 8.0)));
    std::vector<double> nodes, weights;
    gauss_legendre(quad.order, nodes, weights);
    for (int p = 0; p < panels; ++p) {
        const double a0 = s * p / panels;
        const double b0 = s * (p + 1) / panels;
        const double mid = 0.5 * (a0 + b0);
        const double half = 0.5 * (b0 - a0);
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            const double x = mid + half * nodes[q];
            const ScalarField pb =
                which == FrameVector::X ? pullback_flow_x(f, x) : pullback_flow_y(f, x);
            acc = axpy(half * weights[q], pb, acc);
        }
    }
    return acc;
}

}  // namespace hypertorus
