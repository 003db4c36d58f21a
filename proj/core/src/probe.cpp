#include "hypertorus/probe.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "hypertorus/parallel.hpp"
#include "hypertorus/reduce.hpp"
#include "hypertorus/spectral.hpp"
#include "hypertorus/synth.hpp"

namespace hypertorus {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Clock = std::chrono::steady_clock;

/// Everything the mode-space operator needs, precomputed once per grid.
/// Vectors live as stacked per-slice 2D Fourier coefficients: component c of
/// a tuple occupies [c*size, (c+1)*size), slice l of a component occupies
/// [l*ss, (l+1)*ss), and bin b = mj*N + mi holds spatial mode
/// (k1, k2) = (fft_freq(mi), fft_freq(mj)).
struct ModeGrid {
    GridShape shape{};
    std::size_t ss = 0;   // modes per slice
    std::size_t vol = 0;  // modes per component
    int M = 0;            // half-width of the t-stencil
    double pref_z = 0.0;  // -n_slices / log(lambda)
    std::vector<double> fd;          // stencil weights c_0..c_M
    std::vector<double> kx, ky;      // per bin: 2*pi*(k1 + a*k2), 2*pi*(k1 + b*k2)
    std::vector<double> lam;         // per slice: lambda^{t_l}
    std::vector<std::int32_t> mfwd;  // seam wrap up: bin of (A^T k) mod N
    std::vector<std::int32_t> minv;  // inverse permutation (wrap down)
    std::vector<double> rho;         // right preconditioner, [b * n_slices + m]
};

ModeGrid build_mode_grid(const HyperbolicGluing& g, GridShape shape, int fd_order) {
    ModeGrid mg;
    mg.shape = shape;
    mg.ss = shape.slice_size();
    mg.vol = shape.size();
    mg.fd = fd_stencil_half(fd_order);
    mg.M = static_cast<int>(mg.fd.size()) - 1;
    if (2 * mg.M > shape.n_slices)
        throw std::invalid_argument("probe: t-stencil is wider than the slice count");
    mg.pref_z = -static_cast<double>(shape.n_slices) / g.log_lambda();

    const int N = shape.N;
    mg.kx.resize(mg.ss);
    mg.ky.resize(mg.ss);
    mg.mfwd.resize(mg.ss);
    mg.minv.resize(mg.ss);
    const Mat2i at = g.matrix().transpose();
    for (int mj = 0; mj < N; ++mj) {
        const int k2 = fft_freq(mj, N);
        for (int mi = 0; mi < N; ++mi) {
            const int k1 = fft_freq(mi, N);
            const std::size_t b = static_cast<std::size_t>(mj) * N + mi;
            mg.kx[b] = kTwoPi * (k1 + g.slope_a() * k2);
            mg.ky[b] = kTwoPi * (k1 + g.slope_b() * k2);
            const auto kk = at.apply(k1, k2);
            const auto bi = static_cast<int>(((kk[0] % N) + N) % N);
            const auto bj = static_cast<int>(((kk[1] % N) + N) % N);
            mg.mfwd[b] = static_cast<std::int32_t>(bj * N + bi);
        }
    }
    for (std::size_t b = 0; b < mg.ss; ++b)
        mg.minv[static_cast<std::size_t>(mg.mfwd[b])] = static_cast<std::int32_t>(b);

    const int nt = shape.n_slices;
    mg.lam.resize(static_cast<std::size_t>(nt));
    for (int l = 0; l < nt; ++l) mg.lam[l] = g.lambda_pow(static_cast<double>(l) / nt);

    // Column-norm estimates per (spatial bin, t-mode): the X/Y symbols with
    // lambda^t replaced by its geometric mean over the slab, and the exact
    // finite-difference symbol for Z. Bin 0 is left unscaled; it is outside
    // the search space anyway.
    std::vector<double> cz(static_cast<std::size_t>(nt));
    for (int m = 0; m < nt; ++m) {
        double s = 0.0;
        for (int r = 1; r <= mg.M; ++r)
            s += 2.0 * mg.fd[static_cast<std::size_t>(r)] *
                 std::sin(kTwoPi * r * fft_freq(m, nt) / nt);
        cz[static_cast<std::size_t>(m)] = std::abs(mg.pref_z) * std::abs(s);
    }
    const double sqrt_lam = std::sqrt(g.lambda());
    mg.rho.resize(mg.vol);
    for (std::size_t b = 0; b < mg.ss; ++b) {
        const double cx = std::abs(mg.kx[b]) * sqrt_lam;
        const double cy = std::abs(mg.ky[b]) / sqrt_lam;
        for (int m = 0; m < nt; ++m) {
            double v = 1.0;
            if (b != 0) v = 1.0 / std::sqrt(cx * cx + cy * cy + cz[static_cast<std::size_t>(m)] *
                                                                    cz[static_cast<std::size_t>(m)]);
            mg.rho[b * static_cast<std::size_t>(nt) + static_cast<std::size_t>(m)] = v;
        }
    }
    return mg;
}

/// Z on one mode-space component. Crossing the top of the slab re-enters at
/// the permuted bin (the twisted-bundle wrap), mirroring the sample-space
/// ghost slices exactly; the permutation is unitary and the stencil is odd,
/// so this operator is exactly skew-adjoint.
void z_apply(const ModeGrid& mg, const cplx* in, cplx* out) {
    const int nt = mg.shape.n_slices;
    const std::size_t ss = mg.ss;
    pool::parallel_for(nt, [&](int l) {
        cplx* dst = out + static_cast<std::size_t>(l) * ss;
        for (std::size_t b = 0; b < ss; ++b) {
            cplx acc = 0.0;
            for (int r = 1; r <= mg.M; ++r) {
                const int lu = l + r;
                const int ld = l - r;
                const cplx up =
                    lu < nt ? in[static_cast<std::size_t>(lu) * ss + b]
                            : in[static_cast<std::size_t>(lu - nt) * ss +
                                 static_cast<std::size_t>(mg.mfwd[b])];
                const cplx dn =
                    ld >= 0 ? in[static_cast<std::size_t>(ld) * ss + b]
                            : in[static_cast<std::size_t>(ld + nt) * ss +
                                 static_cast<std::size_t>(mg.minv[b])];
                acc += mg.fd[static_cast<std::size_t>(r)] * (up - dn);
            }
            dst[b] = mg.pref_z * acc;
        }
    });
}

/// Removes the fiberwise mean of one component: bin 0 of every slice.
void pi_apply(const ModeGrid& mg, cplx* comp) {
    for (int l = 0; l < mg.shape.n_slices; ++l) comp[static_cast<std::size_t>(l) * mg.ss] = 0.0;
}

/// Diagonal-in-t-frequency scaling of one component (the preconditioner is
/// symmetric positive, so it is its own adjoint).
void rho_apply(const ModeGrid& mg, cplx* comp) {
    const int nt = mg.shape.n_slices;
    const int N = mg.shape.N;
    const std::size_t ss = mg.ss;
    spectral::warm_line(nt);
    pool::parallel_for(N, [&](int mj) {
        std::vector<cplx> line(static_cast<std::size_t>(nt));
        const double inv = 1.0 / nt;
        for (int mi = 0; mi < N; ++mi) {
            const std::size_t b = static_cast<std::size_t>(mj) * N + mi;
            for (int l = 0; l < nt; ++l)
                line[static_cast<std::size_t>(l)] = comp[static_cast<std::size_t>(l) * ss + b];
            spectral::forward_line(line.data(), nt);
            for (int m = 0; m < nt; ++m)
                line[static_cast<std::size_t>(m)] *=
                    mg.rho[b * static_cast<std::size_t>(nt) + static_cast<std::size_t>(m)];
            spectral::inverse_line(line.data(), nt);
            for (int l = 0; l < nt; ++l)
                comp[static_cast<std::size_t>(l) * ss + b] = line[static_cast<std::size_t>(l)] * inv;
        }
    });
}

/// d on scalars: u -> (Xu, Yu, Zu).
void d0_apply(const ModeGrid& mg, const cplx* u, cplx* y) {
    z_apply(mg, u, y + 2 * mg.vol);
    const std::size_t ss = mg.ss;
    pool::parallel_for(mg.shape.n_slices, [&](int l) {
        const double la = mg.lam[static_cast<std::size_t>(l)];
        const cplx* src = u + static_cast<std::size_t>(l) * ss;
        cplx* y0 = y + static_cast<std::size_t>(l) * ss;
        cplx* y1 = y0 + mg.vol;
        for (std::size_t b = 0; b < ss; ++b) {
            const cplx iu = cplx(0.0, 1.0) * src[b];
            y0[b] = mg.kx[b] * la * iu;
            y1[b] = mg.ky[b] / la * iu;
        }
    });
}

/// Adjoint of d0: (u,v,w) -> -(Xu + Yv + Zw).
void d0_adjoint(const ModeGrid& mg, const cplx* y, cplx* x, cplx* zbuf) {
    z_apply(mg, y + 2 * mg.vol, zbuf);
    const std::size_t ss = mg.ss;
    pool::parallel_for(mg.shape.n_slices, [&](int l) {
        const double la = mg.lam[static_cast<std::size_t>(l)];
        const cplx* u = y + static_cast<std::size_t>(l) * ss;
        const cplx* v = u + mg.vol;
        const cplx* zw = zbuf + static_cast<std::size_t>(l) * ss;
        cplx* dst = x + static_cast<std::size_t>(l) * ss;
        for (std::size_t b = 0; b < ss; ++b) {
            const cplx xu = cplx(0.0, 1.0) * (mg.kx[b] * la) * u[b];
            const cplx yv = cplx(0.0, 1.0) * (mg.ky[b] / la) * v[b];
            dst[b] = -(xu + yv + zw[b]);
        }
    });
}

/// d on 1-forms: (f,g,h) -> (Xg - Yf, Xh - Zf - f, Yh - Zg + g).
void d1_apply(const ModeGrid& mg, const cplx* x, cplx* y, cplx* zf, cplx* zg) {
    z_apply(mg, x, zf);
    z_apply(mg, x + mg.vol, zg);
    const std::size_t ss = mg.ss;
    pool::parallel_for(mg.shape.n_slices, [&](int l) {
        const double la = mg.lam[static_cast<std::size_t>(l)];
        const std::size_t off = static_cast<std::size_t>(l) * ss;
        const cplx* f = x + off;
        const cplx* g = f + mg.vol;
        const cplx* h = g + mg.vol;
        const cplx* zfs = zf + off;
        const cplx* zgs = zg + off;
        cplx* y0 = y + off;
        cplx* y1 = y0 + mg.vol;
        cplx* y2 = y1 + mg.vol;
        const cplx im(0.0, 1.0);
        for (std::size_t b = 0; b < ss; ++b) {
            const cplx Xg = im * (mg.kx[b] * la) * g[b];
            const cplx Yf = im * (mg.ky[b] / la) * f[b];
            const cplx Xh = im * (mg.kx[b] * la) * h[b];
            const cplx Yh = im * (mg.ky[b] / la) * h[b];
            y0[b] = Xg - Yf;
            y1[b] = Xh - zfs[b] - f[b];
            y2[b] = Yh - zgs[b] + g[b];
        }
    });
}

/// Adjoint of d1: (u,v,w) -> (Yu + Zv - v, -Xu + Zw + w, -Xv - Yw).
void d1_adjoint(const ModeGrid& mg, const cplx* y, cplx* x, cplx* zv, cplx* zw) {
    z_apply(mg, y + mg.vol, zv);
    z_apply(mg, y + 2 * mg.vol, zw);
    const std::size_t ss = mg.ss;
    pool::parallel_for(mg.shape.n_slices, [&](int l) {
        const double la = mg.lam[static_cast<std::size_t>(l)];
        const std::size_t off = static_cast<std::size_t>(l) * ss;
        const cplx* u = y + off;
        const cplx* v = u + mg.vol;
        const cplx* w = v + mg.vol;
        const cplx* zvs = zv + off;
        const cplx* zws = zw + off;
        cplx* x0 = x + off;
        cplx* x1 = x0 + mg.vol;
        cplx* x2 = x1 + mg.vol;
        const cplx im(0.0, 1.0);
        for (std::size_t b = 0; b < ss; ++b) {
            const cplx Xu = im * (mg.kx[b] * la) * u[b];
            const cplx Yu = im * (mg.ky[b] / la) * u[b];
            const cplx Xv = im * (mg.kx[b] * la) * v[b];
            const cplx Yw = im * (mg.ky[b] / la) * w[b];
            x0[b] = Yu + zvs[b] - v[b];
            x1[b] = -Xu + zws[b] + w[b];
            x2[b] = -Xv - Yw;
        }
    });
}

/// The least-squares operator for one target degree: B = d o Pi o rho, with
/// adjoint B* = rho o Pi o d*. target_degree 1 searches scalars, 2 searches
/// 1-forms; both produce 3-component images.
struct ProbeOp {
    const ModeGrid* mg = nullptr;
    int target_degree = 0;
    bool precondition = true;
    // Scratch owned by the operator so CGLS allocates nothing per iteration.
    std::vector<cplx> t1, z1, z2;

    ProbeOp(const ModeGrid& grid, int degree, bool with_rho = true)
        : mg(&grid), target_degree(degree), precondition(with_rho) {
        t1.resize(static_cast<std::size_t>(in_components()) * mg->vol);
        z1.resize(mg->vol);
        z2.resize(mg->vol);
    }

    int in_components() const { return target_degree == 1 ? 1 : 3; }
    static int out_components() { return 3; }

    void apply(const std::vector<cplx>& x, std::vector<cplx>& y) {
        t1.assign(x.begin(), x.end());
        for (int c = 0; c < in_components(); ++c) {
            cplx* comp = t1.data() + static_cast<std::size_t>(c) * mg->vol;
            if (precondition) rho_apply(*mg, comp);
            pi_apply(*mg, comp);
        }
        if (target_degree == 1)
            d0_apply(*mg, t1.data(), y.data());
        else
            d1_apply(*mg, t1.data(), y.data(), z1.data(), z2.data());
    }

    void apply_adjoint(const std::vector<cplx>& y, std::vector<cplx>& x) {
        if (target_degree == 1)
            d0_adjoint(*mg, y.data(), x.data(), z1.data());
        else
            d1_adjoint(*mg, y.data(), x.data(), z1.data(), z2.data());
        for (int c = 0; c < in_components(); ++c) {
            cplx* comp = x.data() + static_cast<std::size_t>(c) * mg->vol;
            pi_apply(*mg, comp);
            if (precondition) rho_apply(*mg, comp);
        }
    }
};

std::vector<cplx> to_modes(const FrameForm& w) {
    const GridShape shape = w.shape();
    const std::size_t vol = shape.size();
    std::vector<cplx> out(static_cast<std::size_t>(w.n_components()) * vol);
    spectral::warm_plans(shape.N);
    for (int c = 0; c < w.n_components(); ++c) {
        cplx* comp = out.data() + static_cast<std::size_t>(c) * vol;
        std::copy(w.comp(c).data().begin(), w.comp(c).data().end(), comp);
        pool::parallel_for(shape.n_slices, [&](int l) {
            spectral::forward_slice(comp + static_cast<std::size_t>(l) * shape.slice_size(),
                                    shape.N);
        });
    }
    return out;
}

FrameForm from_modes(const HyperbolicGluing& g, GridShape shape, int degree,
                     const std::vector<cplx>& modes) {
    const std::size_t vol = shape.size();
    const int nc = component_count(degree);
    spectral::warm_plans(shape.N);
    std::vector<ScalarField> comps;
    comps.reserve(static_cast<std::size_t>(nc));
    for (int c = 0; c < nc; ++c) {
        std::vector<cplx> data(modes.begin() + static_cast<std::ptrdiff_t>(c * vol),
                               modes.begin() + static_cast<std::ptrdiff_t>((c + 1) * vol));
        const double inv = 1.0 / static_cast<double>(shape.slice_size());
        pool::parallel_for(shape.n_slices, [&](int l) {
            cplx* slice = data.data() + static_cast<std::size_t>(l) * shape.slice_size();
            spectral::inverse_slice(slice, shape.N);
            for (std::size_t i = 0; i < shape.slice_size(); ++i) slice[i] *= inv;
        });
        comps.emplace_back(g, shape, false, std::move(data));
    }
    return FrameForm(degree, std::move(comps));
}

struct CglsResult {
    double relative_residual = 0.0;
    int iterations = 0;
    std::string stop_reason;
};

/// CG on the normal equations of op, keeping only the image-space residual
/// r (started at the target and updated in place; on return it holds
/// target - best image). Norms use fixed-shape pairwise reductions, so runs
/// are bit-identical across thread counts.
CglsResult cgls(ProbeOp& op, std::vector<cplx>& r, int max_iterations, double converge_rel,
                const std::optional<Clock::time_point>& deadline) {
    const std::size_t in_size = static_cast<std::size_t>(op.in_components()) * op.mg->vol;
    CglsResult out;
    const double target_norm = std::sqrt(pairwise_sum_sq(r));
    if (target_norm == 0.0) {
        out.stop_reason = "zero-target";
        return out;
    }
    std::vector<cplx> s(in_size), p(in_size), q(r.size());
    op.apply_adjoint(r, s);
    double gamma = pairwise_sum_sq(s);
    double rnorm = target_norm;
    double bnorm_est = 0.0;
    const auto stationary = [&](double g2) {
        return std::sqrt(g2) <= 1e-12 * std::max(1.0, bnorm_est) * rnorm;
    };
    out.relative_residual = 1.0;
    if (stationary(gamma)) {
        out.stop_reason = "stationary";
        return out;
    }
    p = s;
    double pnorm2 = gamma;
    for (int it = 1; it <= max_iterations; ++it) {
        op.apply(p, q);
        const double qq = pairwise_sum_sq(q);
        if (qq == 0.0) {
            out.iterations = it;
            out.stop_reason = "stationary";
            return out;
        }
        bnorm_est = std::max(bnorm_est, std::sqrt(qq / pnorm2));
        const double alpha = gamma / qq;
        pool::parallel_for(op.mg->shape.n_slices, [&](int l) {
            const std::size_t ss = op.mg->ss;
            const std::size_t stride = op.mg->vol;
            for (std::size_t c = 0; c < r.size() / stride; ++c) {
                cplx* rs = r.data() + c * stride + static_cast<std::size_t>(l) * ss;
                const cplx* qs = q.data() + c * stride + static_cast<std::size_t>(l) * ss;
                for (std::size_t b = 0; b < ss; ++b) rs[b] -= alpha * qs[b];
            }
        });
        rnorm = std::sqrt(pairwise_sum_sq(r));
        out.iterations = it;
        out.relative_residual = rnorm / target_norm;
        if (out.relative_residual <= converge_rel) {
            out.stop_reason = "converged";
            return out;
        }
        op.apply_adjoint(r, s);
        const double gamma_new = pairwise_sum_sq(s);
        if (stationary(gamma_new)) {
            out.stop_reason = "stationary";
            return out;
        }
        const double beta = gamma_new / gamma;
        gamma = gamma_new;
        pool::parallel_for(op.mg->shape.n_slices, [&](int l) {
            const std::size_t ss = op.mg->ss;
            const std::size_t off = static_cast<std::size_t>(l) * ss;
            for (std::size_t c = 0; c < in_size / op.mg->vol; ++c) {
                cplx* ps = p.data() + c * op.mg->vol + off;
                const cplx* ss_ = s.data() + c * op.mg->vol + off;
                for (std::size_t b = 0; b < ss; ++b) ps[b] = ss_[b] + beta * ps[b];
            }
        });
        pnorm2 = pairwise_sum_sq(p);
        if (deadline && Clock::now() > *deadline) {
            out.stop_reason = "budget";
            return out;
        }
    }
    out.stop_reason = "iteration-cap";
    return out;
}

}  // namespace

CglsOutcome probe_minimize(const FrameForm& eta, int fd_order, const ProbeBudget& budget,
                           double converge_rel, bool want_residual) {
    if (eta.degree() != 1 && eta.degree() != 2)
        throw std::invalid_argument("probe: target must be a 1-form or a 2-form");
    if (eta.slab())
        throw std::invalid_argument("probe: target must live on the glued quotient");
    const ModeGrid mg = build_mode_grid(eta.gluing(), eta.shape(), fd_order);
    ProbeOp op(mg, eta.degree());
    std::vector<cplx> r = to_modes(eta);
    std::optional<Clock::time_point> deadline;
    if (budget.max_seconds > 0.0)
        deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(budget.max_seconds));
    const CglsResult res = cgls(op, r, budget.max_iterations, converge_rel, deadline);
    CglsOutcome out;
    out.relative_residual = res.relative_residual;
    out.iterations = res.iterations;
    out.stop_reason = res.stop_reason;
    if (want_residual)
        out.residual_direction = from_modes(eta.gluing(), eta.shape(), eta.degree(), r);
    return out;
}

ProbeReport exactness_probe(const TargetBuilder& build_target, int fd_order,
                            const ProbeBudget& budget, const ProbeThresholds& thresholds,
                            const std::vector<int>& level_N) {
    if (level_N.empty()) throw std::invalid_argument("probe: need at least one level");
    ProbeReport rep;
    rep.thresholds = thresholds;
    const auto t0 = Clock::now();
    const auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };

    for (int N : level_N) {
        if (budget.max_seconds > 0.0 && elapsed() >= budget.max_seconds) {
            rep.budget_exhausted = true;
            break;
        }
        const GridShape shape{N, N};
        const FrameForm eta = build_target(shape);
        rep.target_norm = form_l2_norm(eta);
        ProbeBudget level_budget = budget;
        if (budget.max_seconds > 0.0) level_budget.max_seconds = budget.max_seconds - elapsed();
        const CglsOutcome out =
            probe_minimize(eta, fd_order, level_budget, 0.2 * thresholds.exact_like, false);
        rep.levels.push_back({N, N, out.relative_residual, out.iterations, out.stop_reason});
        if (out.stop_reason == "budget") {
            rep.budget_exhausted = true;
            break;
        }
    }
    rep.seconds = elapsed();

    const bool complete = rep.levels.size() == level_N.size() && !rep.budget_exhausted;
    if (!complete) {
        rep.verdict = "INCONCLUSIVE";
        return rep;
    }
    const double finest = rep.levels.back().relative_residual;
    if (finest <= thresholds.exact_like) {
        rep.verdict = "EXACT-LIKE";
        return rep;
    }
    bool obstructed = true;
    for (const auto& lv : rep.levels)
        if (lv.relative_residual < thresholds.plateau) obstructed = false;
    for (std::size_t i = 1; i < rep.levels.size(); ++i) {
        const double prev = rep.levels[i - 1].relative_residual;
        if (prev <= 0.0 ||
            rep.levels[i].relative_residual / prev < thresholds.ratio)
            obstructed = false;
    }
    rep.verdict = obstructed ? "OBSTRUCTED" : "INCONCLUSIVE";
    return rep;
}

ProbeConsistency probe_consistency(const HyperbolicGluing& g, GridShape shape, int fd_order,
                                   std::uint64_t seed) {
    ProbeConsistency out;
    const ModeGrid mg = build_mode_grid(g, shape, fd_order);
    Rng rng(seed);

    const auto dot = [](const std::vector<cplx>& a, const std::vector<cplx>& b) {
        std::vector<cplx> prod(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) prod[i] = std::conj(a[i]) * b[i];
        return pairwise_sum(std::span<const cplx>(prod));
    };

    for (int degree : {1, 2}) {
        ProbeOp op(mg, degree);
        const std::size_t in_size = static_cast<std::size_t>(op.in_components()) * mg.vol;
        const std::size_t out_size = static_cast<std::size_t>(ProbeOp::out_components()) * mg.vol;
        std::vector<cplx> x(in_size), y(out_size), bx(out_size), bty(in_size);
        for (auto& v : x) v = rng.unit_complex();
        for (auto& v : y) v = rng.unit_complex();
        op.apply(x, bx);
        op.apply_adjoint(y, bty);
        const cplx lhs = dot(bx, y);
        const cplx rhs = dot(x, bty);
        const double scale = std::sqrt(pairwise_sum_sq(std::span<const cplx>(bx)) *
                                       pairwise_sum_sq(std::span<const cplx>(y))) +
                             1e-300;
        out.adjoint_defect = std::max(out.adjoint_defect, std::abs(lhs - rhs) / scale);

        // Un-preconditioned route vs the public calculus on a random glued form.
        ProbeOp plain(mg, degree, false);
        const int search_degree = degree - 1;
        std::vector<ScalarField> comps;
        for (int c = 0; c < component_count(search_degree); ++c)
            comps.push_back(random_quotient_field(g, shape, rng));
        FrameForm w(search_degree, comps);
        std::vector<cplx> wm = to_modes(w);
        std::vector<cplx> img(out_size);
        plain.apply(wm, img);
        const FrameForm route_a = from_modes(g, shape, degree, img);
        std::vector<ScalarField> projected;
        for (int c = 0; c < w.n_components(); ++c)
            projected.push_back(sub(w.comp(c), fiber_average(w.comp(c))));
        const FrameForm route_b = exterior_d(FrameForm(search_degree, projected), fd_order);
        const double rb = form_l2_norm(route_b);
        out.operator_defect =
            std::max(out.operator_defect, form_l2_norm(form_sub(route_a, route_b)) /
                                              (rb > 0.0 ? rb : 1.0));
    }
    return out;
}

}  // namespace hypertorus
