#include "hypertorus/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypertorus/averaging.hpp"
#include "hypertorus/circle.hpp"
#include "hypertorus/cohomology.hpp"
#include "hypertorus/probe.hpp"
#include "hypertorus/scalar_field.hpp"

namespace hypertorus {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kTiny = 1e-300;

double rel(double num, double den) { return num / std::max(den, kTiny); }

CheckRow row(std::string name, double measured, double tol) {
    const bool ok = std::isfinite(measured) && measured <= tol;
    return CheckRow{std::move(name), measured, tol, ok};
}

std::string tag(const std::string& base, int i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " (case %02d)", i);
    return base + buf;
}

std::string tag_deg(const std::string& base, int degree, int i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " (degree %d, case %02d)", degree, i);
    return base + buf;
}

std::string tag_s(const std::string& base, double s, int i) {
    char buf[48];
    std::snprintf(buf, sizeof buf, " at s=%g (case %02d)", s, i);
    return base + buf;
}

class Stopwatch {
  public:
    Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

  private:
    std::chrono::steady_clock::time_point t0_;
};

/// Leading truncation constant of the order-p central difference:
/// (M!)^2 / (2M+1)! with p = 2M.
double fd_truncation_constant(int p) {
    const int M = p / 2;
    double num = 1.0;
    for (int i = 1; i <= M; ++i) num *= i;
    num *= num;
    double den = 1.0;
    for (int i = 1; i <= 2 * M + 1; ++i) den *= i;
    return num / den;
}

/// Saturated per-mode truncation factor: c_p * theta^p until the difference
/// quotient stops tracking the derivative at all, where |FD - exact| is
/// capped by |FD| + |exact| <= 2.2 * omega' for our coefficient tables.
double fd_error_factor(double theta, int p) {
    return std::min(fd_truncation_constant(p) * std::pow(theta, p), 2.2);
}

/// Tolerance rescaling for finite-difference rows whose pinned value targets
/// the desk scale (64 slices, order 8). The reference content is the m = 3
/// circle harmonic the synthesizer emits, the slowest-converging band in the
/// generic fields; the common amplitude and 1/log(lambda) factors cancel in
/// the ratio.
double fd_reference_scale(int nt, int p) {
    const double theta = kTwoPi * 3.0 / nt;
    const double theta0 = kTwoPi * 3.0 / 64.0;
    const double base = fd_truncation_constant(8) * std::pow(theta0, 8);
    return fd_error_factor(theta, p) / base;
}

double bracket_tolerance(int nt, int p) {
    return std::max(1e-6 * fd_reference_scale(nt, p), 2e-9);
}

FrameForm coframe_monomial(const HyperbolicGluing& g, GridShape shape, int degree, int which) {
    return FrameForm::monomial(g, shape, degree, which);
}

/// Synthesis options adapted to the run's slice count: the seam acceptance
/// gate (a fixed-width interpolation measurement) cannot resolve fast circle
/// harmonics on very short fibers, so coarse slice counts get a narrower
/// fiber-constant band.
SynthOptions suite_synth(const RunConfig& cfg) {
    SynthOptions opt;
    if (cfg.n_slices <= 8) {
        opt.circle_band = 1;
    } else if (cfg.n_slices <= 16) {
        opt.circle_band = 2;
    }
    return opt;
}

}  // namespace

FrameForm random_form(const HyperbolicGluing& g, GridShape shape, Rng& rng, int degree,
                      const SynthOptions& opt) {
    const int n_comp = (degree == 0 || degree == 3) ? 1 : 3;
    std::vector<ScalarField> comps;
    comps.reserve(n_comp);
    for (int c = 0; c < n_comp; ++c) comps.push_back(random_quotient_field(g, shape, rng, opt));
    return FrameForm(degree, std::move(comps));
}

double flow_identity_residual(const ScalarField& f, double s, int fd_order) {
    const ScalarField pf = pullback_flow_x(f, s);
    ScalarField lhs = deriv_z(pf, fd_order);                        // Z(P_s f)
    lhs = axpy(cplx(s), pullback_flow_x(deriv_x(f), s), lhs);       // + s P_s(X f)
    lhs = sub(lhs, pullback_flow_x(deriv_z(f, fd_order), s));       // - P_s(Z f)
    return rel(l2_norm(lhs), l2_norm(f));
}

double flow_identity_bound(const FieldSpec& spec, const HyperbolicGluing& g, double s, int nt,
                           int p) {
    const double lnl = g.log_lambda();
    const double a = g.slope_a();
    double sum = 0.0;
    double norm2 = 0.0;
    for (const auto& ch : spec.chains) {
        const double amp = std::abs(ch.amp);
        // Norm lower bound: Gaussian l2 mass of the envelope over the chain
        // coordinate, discounted for edge truncation.
        norm2 += amp * amp * ch.sigma * std::sqrt(kPi) * 0.8;
        for (std::size_t j = 0; j < ch.modes.size(); ++j) {
            const double kappa =
                std::abs(static_cast<double>(ch.modes[j][0]) + a * ch.modes[j][1]);
            // Envelope maximum over the slab copy [j, j+1].
            const double lo = static_cast<double>(j);
            const double dist = std::max({0.0, lo - ch.center, ch.center - (lo + 1.0)});
            const double wmax = std::exp(-dist * dist / (2.0 * ch.sigma * ch.sigma));
            // Worst phase rate over the slab (lambda^t <= lambda), padded 15%
            // for the envelope's own bandwidth riding on the phase.
            const double omega_rate = kTwoPi * std::abs(s) * g.lambda() * lnl * kappa;
            const double theta = omega_rate / nt * 1.15;
            sum += amp * wmax * fd_error_factor(theta, p) * (omega_rate / lnl);
        }
        // The envelope itself is differentiated too; its Fourier tail at
        // circle frequency m carries weight exp(-2 pi^2 sigma^2 m^2).
        for (int m = 1; m <= 6; ++m) {
            const double weight = std::exp(-2.0 * kPi * kPi * ch.sigma * ch.sigma * m * m);
            const double th = kTwoPi * m / nt;
            sum += amp * weight * fd_error_factor(th, p) * (kTwoPi * m / lnl);
        }
    }
    // The fiber-constant circle part cancels exactly in the identity (its
    // pullback multiplier is bitwise 1 and its expanding derivative is 0),
    // so it only helps the norm; omitting it keeps the bound conservative.
    const double norm = std::sqrt(std::max(norm2, 1e-30));
    return 4.0 * sum / norm + 1e-12;
}

namespace {

/// Node offsets and centered Lagrange weights of the library's ghost-slice
/// seam measurement: 2H points at {-H..-1, 1..H}, evaluated at 0.
void seam_stencil(int H, std::vector<int>& nodes, std::vector<double>& weights) {
    nodes.clear();
    for (int d = -H; d <= H; ++d)
        if (d != 0) nodes.push_back(d);
    weights.assign(nodes.size(), 1.0);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = 0; j < nodes.size(); ++j)
            if (j != i)
                weights[i] *= static_cast<double>(-nodes[j]) /
                              static_cast<double>(nodes[i] - nodes[j]);
}

/// Replays the ghost-slice seam measurement on a spec at nt slices, worst
/// case over expanding-flow times {0, s}. Returns the predicted absolute
/// defect; the library normalizes by the sup, which is ~1 for a unit-
/// amplitude chain. Chain-end truncation enters through the two spectral
/// bins whose seam partner is the missing neighbor mode; their contribution
/// is bounded by the envelope mass the measurement window sees there.
double seam_gate_model(const FieldSpec& spec, const HyperbolicGluing& g, int nt, double s) {
    const int H = std::min(8, nt - 1);
    std::vector<int> nodes;
    std::vector<double> w;
    seam_stencil(H, nodes, w);
    const double lambda = g.lambda();
    const double a = g.slope_a();
    const double dt = 1.0 / nt;

    double total = 0.0;
    for (const double sv : {0.0, s}) {
        double run = 0.0;
        for (const auto& ch : spec.chains) {
            const double amp = std::abs(ch.amp);
            const auto env = [&ch](double tau) {
                const double u = (tau - ch.center) / ch.sigma;
                return (u * u > 1400.0) ? 0.0 : std::exp(-0.5 * u * u);
            };
            const int L = static_cast<int>(ch.modes.size());
            for (int j = 0; j < L; ++j) {
                // Crossing the seam continues mode j smoothly: past tau = 1
                // the measurement reads the successor mode, whose expanding
                // frequency is lambda times larger, which matches the
                // lambda^tau factor of the pullback phase exactly.
                const double kap = ch.modes[static_cast<std::size_t>(j)][0] +
                                   a * ch.modes[static_cast<std::size_t>(j)][1];
                const auto coef = [&](double tau) {
                    return env(tau + j) *
                           std::polar(1.0, kTwoPi * sv * std::pow(lambda, tau) * kap);
                };
                cplx pred = 0.0;
                for (std::size_t i = 0; i < nodes.size(); ++i)
                    pred += w[i] * coef(1.0 + nodes[i] * dt);
                run += amp * std::abs(pred - coef(1.0));
            }
            // Bin of the missing predecessor mode: the ghost value there is
            // the chain head at tau = 0, predicted from forward nodes alone.
            double ends = env(0.0);
            for (std::size_t i = 0; i < nodes.size(); ++i)
                if (nodes[i] > 0) ends += std::abs(w[i]) * env(nodes[i] * dt);
            // Bin of the last mode: its seam partner holds no data, so the
            // backward-node tail is unmatched.
            for (std::size_t i = 0; i < nodes.size(); ++i)
                if (nodes[i] < 0) ends += std::abs(w[i]) * env(L + nodes[i] * dt);
            run += amp * ends;
        }
        total = std::max(total, run);
    }
    // The fiber-constant part is flow-fixed; its bin sees plain trigonometric
    // interpolation error, independent of the flow time.
    for (const auto& [m, c] : spec.circle.modes()) {
        cplx pred = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            pred += w[i] * std::polar(1.0, kTwoPi * m * nodes[i] * dt);
        total += std::abs(c) * std::abs(pred - 1.0);
    }
    return total;
}

}  // namespace

FieldSpec flow_resolved_spec(const HyperbolicGluing& g, GridShape shape, double s_max,
                             Rng& rng) {
    if (!(s_max > 0.0) || !std::isfinite(s_max))
        throw std::invalid_argument("flow_resolved_spec: s_max must be positive");
    const int band = std::min(21, shape.N / 3);
    if (band < 3) throw std::invalid_argument("flow_resolved_spec: grid too coarse for a chain");
    const Mat2i at = g.matrix().transpose();
    const Mat2i at_inv = g.matrix().inverse_unimodular().transpose();
    const auto in_band = [band](const std::array<std::int64_t, 2>& k) {
        return std::max(std::llabs(k[0]), std::llabs(k[1])) <= band;
    };

    // Walk the seed (1,0) backward along the contracting direction of the
    // expanding frequency (each step divides |k1 + a k2| by lambda), then
    // forward until the box bound stops us. Consecutive modes are transposed-
    // matrix images, which is exactly what the seam gluing requires.
    std::vector<std::array<int, 2>> back;
    std::array<std::int64_t, 2> k{1, 0};
    while (true) {
        const auto next = at_inv.apply(k[0], k[1]);
        if (!in_band(next)) break;
        back.push_back({static_cast<int>(next[0]), static_cast<int>(next[1])});
        k = next;
    }
    std::vector<std::array<int, 2>> modes(back.rbegin(), back.rend());
    modes.push_back({1, 0});
    k = {1, 0};
    while (true) {
        const auto next = at.apply(k[0], k[1]);
        if (!in_band(next)) break;
        modes.push_back({static_cast<int>(next[0]), static_cast<int>(next[1])});
        k = next;
    }
    if (back.size() < 2) {
        throw std::invalid_argument("flow_resolved_spec: not enough contracted chain links");
    }

    ChainSpec chain;
    chain.modes = modes;
    chain.amp = rng.unit_complex();  // unit modulus keeps the norm floor tight

    FieldSpec spec;
    // Fiber-constant dressing, drawn before the placement search so the seam
    // replay sees the true coefficients. Only |m| <= 1: faster harmonics
    // spend ghost-interpolation headroom at coarse slice counts and add no
    // coverage that the broadband families do not already provide.
    for (int m = -1; m <= 1; ++m)
        spec.circle.add_mode(m, rng.uniform(0.2, 0.5) * rng.unit_complex() / (1.0 + m * m));

    // Deterministic placement: smallest a-priori identity bound at the
    // requested flow time among admissible (center, sigma). Admissible means
    // the envelope is ~exp(-30) down at both chain ends, so spectrum
    // truncation cannot perturb the seam, and the replayed ghost-slice
    // measurement keeps a 50x margin under the acceptance gate at this slice
    // count for every flow time up to s_max.
    const double L = static_cast<double>(modes.size());
    const int nt = shape.n_slices;
    const double budget = 0.02 * seam_tolerance(nt);
    const auto admissible = [&](double center, double sigma) {
        const double lo_edge = center * center / (2.0 * sigma * sigma);
        const double hi_edge = (L - center) * (L - center) / (2.0 * sigma * sigma);
        if (lo_edge < 30.0 || hi_edge < 30.0) return false;
        FieldSpec trial = spec;
        ChainSpec tc = chain;
        tc.center = center;
        tc.sigma = sigma;
        trial.chains.push_back(std::move(tc));
        return seam_gate_model(trial, g, nt, s_max) <= budget;
    };
    double best_cost = std::numeric_limits<double>::infinity();
    double best_center = 1.0;
    double best_sigma = 0.25;
    for (double center = 0.55; center <= static_cast<double>(back.size()) + 0.451;
         center += 0.01) {
        for (double sigma = 0.10; sigma <= 0.311; sigma += 0.01) {
            if (!admissible(center, sigma)) continue;
            ChainSpec trial = chain;
            trial.center = center;
            trial.sigma = sigma;
            trial.amp = 1.0;
            FieldSpec probe;
            probe.chains.push_back(std::move(trial));
            const double cost = flow_identity_bound(probe, g, s_max, std::max(nt, 32), 8);
            if (cost < best_cost) {
                best_cost = cost;
                best_center = center;
                best_sigma = sigma;
            }
        }
    }
    if (!std::isfinite(best_cost)) {
        throw std::invalid_argument(
            "flow_resolved_spec: no admissible envelope placement at this resolution");
    }
    chain.sigma = best_sigma;
    const double jittered = best_center + rng.uniform(-0.02, 0.02);
    chain.center = admissible(jittered, best_sigma) ? jittered : best_center;
    spec.chains.push_back(std::move(chain));
    return spec;
}

FrameForm flow_resolved_form(const HyperbolicGluing& g, GridShape shape, int degree,
                             double s_max, Rng& rng) {
    if (degree < 0 || degree > 3)
        throw std::invalid_argument("flow_resolved_form: degree must be 0..3");
    const int n_comp = (degree == 0 || degree == 3) ? 1 : 3;
    std::vector<ScalarField> comps;
    comps.reserve(n_comp);
    for (int c = 0; c < n_comp; ++c)
        comps.push_back(sample_spec(flow_resolved_spec(g, shape, s_max, rng), g, shape));
    return FrameForm(degree, std::move(comps));
}

SuiteReport suite_structure(const RunConfig& cfg, int n_fields) {
    validate(cfg);
    const Stopwatch clock;
    const HyperbolicGluing g = make_gluing(cfg);
    const GridShape shape = make_shape(cfg);
    const int p = cfg.fd_order;
    Rng rng(cfg.seed);
    const SynthOptions synth = suite_synth(cfg);
    SuiteReport rep;
    rep.suite = "structure";

    const double fdtol = bracket_tolerance(cfg.n_slices, p);
    for (int i = 0; i < n_fields; ++i) {
        const ScalarField f = random_quotient_field(g, shape, rng, synth);
        const double fn = l2_norm(f);
        const ScalarField xf = deriv_x(f);
        const ScalarField yf = deriv_y(f);
        const ScalarField zf = deriv_z(f, p);

        const double comm_xy = l2_norm(sub(deriv_x(yf), deriv_y(xf)));
        rep.rows.push_back(row(tag("horizontal frame fields commute", i), rel(comm_xy, fn), 1e-9));

        ScalarField zx = sub(deriv_z(xf, p), deriv_x(zf));  // [Z,X] f
        zx = add(zx, xf);                                   // expect [Z,X] = -X
        rep.rows.push_back(
            row(tag("vertical bracket reproduces -X", i), rel(l2_norm(zx), fn), fdtol));

        ScalarField zy = sub(deriv_z(yf, p), deriv_y(zf));  // [Z,Y] f
        zy = sub(zy, yf);                                   // expect [Z,Y] = +Y
        rep.rows.push_back(
            row(tag("vertical bracket reproduces +Y", i), rel(l2_norm(zy), fn), fdtol));
    }

    // Coframe structure equations, as outputs of the calculus.
    const FrameForm alpha = coframe_monomial(g, shape, 1, 0);
    const FrameForm beta = coframe_monomial(g, shape, 1, 1);
    const FrameForm theta = coframe_monomial(g, shape, 1, 2);
    const FrameForm alpha_theta = coframe_monomial(g, shape, 2, 1);
    const FrameForm beta_theta = coframe_monomial(g, shape, 2, 2);

    const double d_alpha =
        form_l2_norm(form_sub(exterior_d(alpha, p), form_scale(alpha_theta, -1.0)));
    rep.rows.push_back(row("expanding coframe derivative is -alpha^theta", d_alpha, 1e-9));
    const double d_beta = form_l2_norm(form_sub(exterior_d(beta, p), beta_theta));
    rep.rows.push_back(row("contracting coframe derivative is +beta^theta", d_beta, 1e-9));
    const double d_theta = form_l2_norm(exterior_d(theta, p));
    rep.rows.push_back(row("base coframe leg is closed", d_theta, 1e-9));

    // Time-1 pullback shears alpha by the base leg.
    const FrameForm pa = pullback_form_flow_x(alpha, 1.0);
    const double shear = form_l2_norm(form_sub(pa, form_sub(alpha, theta)));
    rep.rows.push_back(row("time-1 pullback shears alpha to alpha - theta", shear, 1e-12));

    rep.seconds = clock.seconds();
    return rep;
}

SuiteReport suite_flows(const RunConfig& cfg, int n_fields) {
    validate(cfg);
    const Stopwatch clock;
    const HyperbolicGluing g = make_gluing(cfg);
    const GridShape shape = make_shape(cfg);
    const int p = cfg.fd_order;
    const int nt = cfg.n_slices;
    Rng rng(cfg.seed + 1);
    const SynthOptions synth = suite_synth(cfg);
    SuiteReport rep;
    rep.suite = "flows";

    const double s_values[] = {0.3, 1.0, 2.0, 5.0};
    // The convergence block below resamples the first spec at half the slice
    // count, so admissibility is requested at the coarsest count it meets.
    const bool refine = nt / 2 >= 16 && nt / 2 >= p && nt * 2 <= 256;
    const GridShape coarsest{cfg.grid_n, refine ? nt / 2 : nt};
    FieldSpec first_spec;
    for (int i = 0; i < n_fields; ++i) {
        const FieldSpec spec = flow_resolved_spec(g, coarsest, 5.0, rng);
        if (i == 0) first_spec = spec;
        const ScalarField f = sample_spec(spec, g, shape);
        for (double s : s_values) {
            const double tol = std::max(flow_identity_bound(spec, g, s, nt, p), 1e-11);
            rep.rows.push_back(row(tag_s("flow-derivative identity residual", s, i),
                                   flow_identity_residual(f, s, p), tol));
        }
    }

    // Order verification: the residual of the first field must shrink like
    // nt^-p when the slice count doubles (checked at the hardest flow time).
    if (refine) {
        double res[3] = {0, 0, 0};
        const int nts[3] = {nt / 2, nt, nt * 2};
        for (int k = 0; k < 3; ++k) {
            const ScalarField fk = sample_spec(first_spec, g, GridShape{cfg.grid_n, nts[k]});
            res[k] = flow_identity_residual(fk, 5.0, p);
        }
        const double order = std::pow(2.0, p);
        for (int k = 0; k < 2; ++k) {
            const double ratio = res[k] / std::max(res[k + 1], kTiny);
            const bool roundoff = res[k + 1] <= 5e-13 && res[k] <= 5e-13 * order * 8.0;
            const bool in_band = ratio >= order / 2.2 && ratio <= order * 2.2;
            char name[96];
            std::snprintf(name, sizeof name,
                          "flow-derivative residual ratio %d/%d slices tracks order %d", nts[k],
                          nts[k + 1], p);
            rep.rows.push_back(CheckRow{name, ratio, order * 2.2, in_band || roundoff});
        }
    }

    // Seam wrap is an exact permutation: forward then inverse is the
    // identity on raw samples, bit for bit.
    {
        const ScalarField f = random_quotient_field(g, shape, rng, synth);
        const GridPermutation perm = g.grid_permutation(cfg.grid_n);
        const int ss = cfg.grid_n * cfg.grid_n;
        double worst = 0.0;
        for (int idx = 0; idx < ss; ++idx) {
            const int i = idx % cfg.grid_n;
            const int j = idx / cfg.grid_n;
            const cplx v = f.at(i, j, 0);
            const int fwd = perm.fwd[idx];
            const int round_trip = perm.inv[fwd];
            const cplx w = f.at(round_trip % cfg.grid_n, round_trip / cfg.grid_n, 0);
            worst = std::max(worst, std::abs(v - w));
        }
        rep.rows.push_back(row("seam wrap round trip is exact", worst, 0.0));
    }

    // Fields pulled back from the base circle are fixed by the time-1 flow
    // and killed by the expanding derivative.
    {
        const ScalarField psi = pullback_circle(g, shape, CircleFunction::cosine(1));
        const double pn = l2_norm(psi);
        const double fix = l2_norm(sub(psi, pullback_flow_x(psi, 1.0)));
        rep.rows.push_back(row("fiber-constant field is flow-fixed", rel(fix, pn), 1e-13));
        rep.rows.push_back(
            row("fiber-constant field has zero expanding derivative", rel(l2_norm(deriv_x(psi)), pn), 1e-10));
    }

    // The invariant integral is preserved by the time-1 pullback.
    {
        const ScalarField f = random_quotient_field(g, shape, rng, synth);
        const double drift = std::abs(integrate(pullback_flow_x(f, 1.0)) - integrate(f));
        rep.rows.push_back(
            row("invariant integral survives the time-1 pullback", rel(drift, l2_norm(f)), 1e-11));
    }

    rep.seconds = clock.seconds();
    return rep;
}

SuiteReport suite_operator(const RunConfig& cfg, int n_forms) {
    validate(cfg);
    const Stopwatch clock;
    const HyperbolicGluing g = make_gluing(cfg);
    const GridShape shape = make_shape(cfg);
    const int p = cfg.fd_order;
    Rng rng(cfg.seed + 2);
    const SynthOptions synth = suite_synth(cfg);
    SuiteReport rep;
    rep.suite = "operator";

    // All 1e-10-grade comparisons pin the quadrature: 16 panels of order 16
    // resolve the fastest phase the synthesized chains carry, whereas the
    // resolution-matched default is built for 1e-6-grade work.
    QuadratureSpec pinned;
    pinned.order = 16;
    pinned.panels = 16;

    for (int degree = 0; degree <= 3; ++degree) {
        for (int i = 0; i < n_forms; ++i) {
            const FrameForm w = random_form(g, shape, rng, degree, synth);
            const double wn = form_l2_norm(w);
            const FrameForm lie = lie_derivative(FrameVector::X, w, p);
            const FrameForm averaged =
                average_signed(lie, cfg.paper_sign, cfg.exact_average, pinned);
            FrameForm image = form_sub(pullback_form_flow_x(w, 1.0), w);
            if (cfg.paper_sign && degree % 2 == 1) image = form_scale(image, -1.0);
            const double m =
                rel(form_l2_norm(form_sub(averaged, image)), wn);
            rep.rows.push_back(
                row(tag_deg("averaged flow derivative equals time-1 difference", degree, i), m,
                    1e-6));

            if (degree <= 2 && i < 4) {
                // d acts on the averaged form here, and the s-average leaves
                // the pullback's expanding oscillation in the coefficients,
                // so this row needs fields whose envelope keeps that
                // oscillation inside the slice resolution.
                const FrameForm wc = flow_resolved_form(g, shape, degree, 1.0, rng);
                const double cd = chain_defect(wc, cfg.paper_sign, cfg.exact_average, pinned, p);
                rep.rows.push_back(
                    row(tag_deg("averaging commutes with d across the seam", degree, i), cd,
                        1e-7));
            }
            if (i < 2) {
                const double dq = rel(
                    form_l2_norm(form_sub(average_I(w, pinned), average_I_exact(w))), wn);
                rep.rows.push_back(
                    row(tag_deg("quadrature route matches closed-form route", degree, i), dq,
                        1e-10));
            }
        }
    }

    // Fixed points and sheared images of the averaging operator on coframe
    // monomials, via the closed-form route (exact for these inputs).
    const FrameForm one0 = coframe_monomial(g, shape, 0, 0);
    const FrameForm alpha = coframe_monomial(g, shape, 1, 0);
    const FrameForm beta = coframe_monomial(g, shape, 1, 1);
    const FrameForm theta = coframe_monomial(g, shape, 1, 2);
    const FrameForm alpha_beta = coframe_monomial(g, shape, 2, 0);
    const FrameForm alpha_theta = coframe_monomial(g, shape, 2, 1);
    const FrameForm beta_theta = coframe_monomial(g, shape, 2, 2);
    const FrameForm vol = coframe_monomial(g, shape, 3, 0);

    const auto fixed_row = [&](const char* name, const FrameForm& w) {
        const double m =
            rel(form_l2_norm(form_sub(average_I_exact(w), w)), form_l2_norm(w));
        rep.rows.push_back(row(std::string("averaging fixes ") + name, m, 1e-9));
    };
    fixed_row("the constant function", one0);
    fixed_row("beta", beta);
    fixed_row("theta", theta);
    fixed_row("alpha^theta", alpha_theta);
    fixed_row("beta^theta", beta_theta);
    fixed_row("the volume form", vol);

    {
        const FrameForm expect = form_sub(alpha, form_scale(theta, 0.5));
        const double m = rel(form_l2_norm(form_sub(average_I_exact(alpha), expect)),
                             form_l2_norm(alpha));
        rep.rows.push_back(row("averaging shears alpha to alpha - theta/2", m, 1e-10));
    }
    {
        const FrameForm expect = form_add(alpha_beta, form_scale(beta_theta, 0.5));
        const double m = rel(form_l2_norm(form_sub(average_I_exact(alpha_beta), expect)),
                             form_l2_norm(alpha_beta));
        rep.rows.push_back(
            row("averaging shears alpha^beta to alpha^beta + beta^theta/2", m, 1e-10));
    }

    rep.seconds = clock.seconds();
    return rep;
}

SuiteReport suite_cohomology(const RunConfig& cfg) {
    validate(cfg);
    const Stopwatch clock;
    const HyperbolicGluing g = make_gluing(cfg);
    const GridShape shape = make_shape(cfg);
    const int p = cfg.fd_order;
    Rng rng(cfg.seed + 3);
    const SynthOptions synth = suite_synth(cfg);
    SuiteReport rep;
    rep.suite = "cohomology";

    // Degree-1 and degree-2 generator certificates.
    {
        const GeneratorResult g1 = generator_h1(CircleFunction::cosine(1), g, shape, p);
        rep.rows.push_back(row("degree-1 generator is closed", g1.d_defect, 1e-8));
        rep.rows.push_back(
            row("degree-1 generator presents as a twisted difference", g1.presentation_defect,
                1e-10));
        const GeneratorResult g2 = generator_h2(CircleFunction::sine(1), g, shape, p);
        rep.rows.push_back(row("degree-2 generator is closed", g2.d_defect, 1e-8));
        rep.rows.push_back(
            row("degree-2 generator presents as a twisted difference", g2.presentation_defect,
                1e-10));
    }

    // Twisted coboundary basics: invariant forms and alpha are in its
    // kernel, and it is linear.
    {
        const FrameForm w = random_form(g, shape, rng, 1, synth);
        const FrameForm wi = invariant_part(w);
        const double wn = std::max(form_l2_norm(wi), kTiny);
        // Flow-fixed inputs make the coboundary's internal difference pure
        // roundoff; differentiating that noise tells us nothing, so certify
        // the kernel membership directly off the difference when it is at
        // the floor. (On power-of-two grids the difference is exactly zero
        // and both branches agree.)
        const double dn =
            form_l2_norm(form_sub(wi, pullback_form_flow_x(wi, 1.0)));
        const double m = dn <= 1e-13 * wn
                             ? rel(dn, wn)
                             : rel(form_l2_norm(coboundary_T(wi, p)), wn);
        rep.rows.push_back(row("twisted coboundary kills invariant forms", m, 1e-12));

        const FrameForm alpha = coframe_monomial(g, shape, 1, 0);
        rep.rows.push_back(row("twisted coboundary kills alpha",
                               rel(form_l2_norm(coboundary_T(alpha, p)), form_l2_norm(alpha)),
                               1e-12));

        // The coboundary differentiates after a time-1 pullback, so linearity
        // witnesses come from the flow-resolved family.
        const FrameForm w1 = flow_resolved_form(g, shape, 1, 1.0, rng);
        const FrameForm w2 = flow_resolved_form(g, shape, 1, 1.0, rng);
        const cplx c1 = 1.3 * rng.unit_complex();
        const cplx c2 = 0.7 * rng.unit_complex();
        const FrameForm lhs =
            coboundary_T(form_add(form_scale(w1, c1), form_scale(w2, c2)), p);
        const FrameForm rhs =
            form_add(form_scale(coboundary_T(w1, p), c1), form_scale(coboundary_T(w2, p), c2));
        const double lin = rel(form_l2_norm(form_sub(lhs, rhs)), form_l2_norm(rhs));
        rep.rows.push_back(row("twisted coboundary is linear", lin, 1e-12));
    }

    // Degree-0: twisted differences integrate to zero; fixed fields have
    // an exactly-zero difference.
    for (int i = 0; i < 2; ++i) {
        // The check differentiates g minus its time-1 pullback, so g comes
        // from the flow-resolved family.
        const ScalarField gq =
            sample_spec(flow_resolved_spec(g, shape, 1.0, rng), g, shape);
        const H0Report h0 = h0_vanishing_check(gq, p);
        rep.rows.push_back(
            row(tag("twisted scalar difference integrates to zero", i), h0.integral_rel, 1e-11));
    }
    {
        const ScalarField fixed = pullback_circle(g, shape, CircleFunction::cosine(2));
        const H0Report h0 = h0_vanishing_check(fixed, p);
        rep.rows.push_back(row("fixed scalar has zero twisted difference",
                               rel(h0.f_norm, h0.g_norm), 1e-12));
    }

    // Degree-3: constructive primitives.
    const double h3_tol = std::max(1e-6 * fd_reference_scale(cfg.n_slices, p), 1e-6);
    {
        const ScalarField f = pullback_circle(g, shape, CircleFunction::sine(1));
        const H3Result res = h3_primitive(f, p);
        CircleFunction wfun;
        const double lvl = g.log_lambda() / kTwoPi;
        wfun.add_mode(1, lvl * 0.5);
        wfun.add_mode(-1, lvl * 0.5);
        wfun.add_mode(0, -lvl);
        const ScalarField wf = pullback_circle(g, shape, wfun);
        const ScalarField zero = scale(wf, 0.0);
        const FrameForm expected = FrameForm::two_form(wf, zero, zero);
        const double m = rel(form_l2_norm(form_sub(res.primitive, expected)),
                             form_l2_norm(expected));
        rep.rows.push_back(row("density primitive matches the analytic solution", m, 1e-8));
        rep.rows.push_back(
            row("analytic density primitive residual", res.report.relative_residual, h3_tol));
    }
    {
        const ScalarField f = random_quotient_field(g, shape, rng, synth);
        const H3Result res = h3_primitive(f, p);
        rep.rows.push_back(
            row("random density primitive residual", res.report.relative_residual, h3_tol));
    }

    // Total volume of the fundamental domain.
    {
        const ScalarField ones = from_function(
            g, shape, false, [](double, double, double) { return cplx(1.0, 0.0); });
        const double vol = std::abs(integrate(ones) - cplx(g.volume_factor()));
        rep.rows.push_back(
            row("frame volume matches log(lambda)/(a-b)", rel(vol, g.volume_factor()), 1e-12));
    }

    // Averaging isomorphism: invariant forms pass the injectivity gate,
    // alpha is refused as non-invariant.
    for (int degree = 1; degree <= 2; ++degree) {
        const FrameForm w = invariant_part(random_form(g, shape, rng, degree, synth));
        const IsoReport iso = iso_injectivity_check(w, p);
        const bool ok = iso.status == "PASS" && iso.lie_ratio <= 1e-6;
        char name[80];
        std::snprintf(name, sizeof name,
                      "invariant degree-%d form passes the injectivity gate", degree);
        rep.rows.push_back(CheckRow{name, iso.lie_ratio, 1e-6, ok});
    }
    {
        const FrameForm alpha = coframe_monomial(g, shape, 1, 0);
        const IsoReport iso = iso_injectivity_check(alpha, p);
        const bool ok = iso.status == "NOT-INVARIANT";
        rep.rows.push_back(CheckRow{"alpha is refused as non-invariant",
                                    std::abs(iso.gamma_defect - 1.0), 1e-12, ok});
    }

    // Telescoping difference-quotient bounds for a deliberately non-glued
    // (slab) witness and a fixed field.
    {
        const ScalarField h = from_function(g, shape, true, [](double x, double, double) {
            return std::polar(1.0, kTwoPi * x);
        });
        const ModeleqReport mr = modeleq_check(scale(h, 0.0), h, {1, 2, 4, 8});
        double worst = 0.0;
        for (const auto& r : mr.rows) worst = std::max(worst, r.fn_sup * r.n / (2.0 * mr.h_sup));
        rep.rows.push_back(row("difference quotients obey the 2/n sup bound", worst, 1.0 + 1e-9));
        rep.rows.push_back(
            CheckRow{"difference quotients decay like 1/n", mr.decay_ok ? 0.0 : 1.0, 0.5,
                     mr.decay_ok});
    }
    {
        const ScalarField h = pullback_circle(g, shape, CircleFunction::cosine(1));
        const ModeleqReport mr = modeleq_check(scale(h, 0.0), h, {1, 4});
        double worst = 0.0;
        for (const auto& r : mr.rows) worst = std::max(worst, rel(r.fn_sup, mr.h_sup));
        rep.rows.push_back(
            row("fixed-field difference quotients vanish", worst, 1e-13));
    }

    // Probe internals agree with the public calculus.
    {
        const ProbeConsistency pc = probe_consistency(g, shape, p, cfg.seed);
        rep.rows.push_back(row("probe adjoint pairing is consistent", pc.adjoint_defect, 1e-12));
        rep.rows.push_back(
            row("probe operator matches the exterior derivative", pc.operator_defect, 1e-10));
    }

    rep.seconds = clock.seconds();
    return rep;
}

SuiteReport run_suite(const RunConfig& cfg) {
    validate(cfg);
    if (cfg.suite == "structure") return suite_structure(cfg);
    if (cfg.suite == "flows") return suite_flows(cfg);
    if (cfg.suite == "operator") return suite_operator(cfg);
    if (cfg.suite == "cohomology") return suite_cohomology(cfg);
    if (cfg.suite != "all") throw std::invalid_argument("unknown suite: " + cfg.suite);

    const Stopwatch clock;
    SuiteReport all;
    all.suite = "all";
    for (const SuiteReport& part :
         {suite_structure(cfg), suite_flows(cfg), suite_operator(cfg), suite_cohomology(cfg)}) {
        for (const CheckRow& r : part.rows) {
            CheckRow named = r;
            named.name = part.suite + ": " + named.name;
            all.rows.push_back(std::move(named));
        }
    }
    all.seconds = clock.seconds();
    return all;
}

}  // namespace hypertorus
