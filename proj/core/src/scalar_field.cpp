#include "hypertorus/scalar_field.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "hypertorus/parallel.hpp"
#include "hypertorus/reduce.hpp"
#include "hypertorus/spectral.hpp"

namespace hypertorus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Lagrange basis for the symmetric node set {-H..-1, 1..H} evaluated at 0.
// Centered interpolation keeps the weights O(1) (no binomial blow-up), so the
// seam check stays near roundoff for smooth data instead of amplifying noise
// the way one-sided extrapolation would.
std::vector<double> seam_interp_weights(int half_width) {
    std::vector<int> nodes;
    nodes.reserve(2 * static_cast<std::size_t>(half_width));
    for (int d = -half_width; d <= half_width; ++d)
        if (d != 0) nodes.push_back(d);
    std::vector<double> w(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double v = 1.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            if (j == i) continue;
            v *= static_cast<double>(0 - nodes[j]) / static_cast<double>(nodes[i] - nodes[j]);
        }
        w[i] = v;
    }
    return w;
}

void check_compatible(const ScalarField& f, const ScalarField& g, const char* op) {
    if (!(f.shape() == g.shape()))
        throw std::invalid_argument(std::string(op) + ": grid shapes differ");
    if (!(f.gluing() == g.gluing()))
        throw std::invalid_argument(std::string(op) + ": gluing matrices differ");
}

}  // namespace

const GridPermutation& seam_permutation(const HyperbolicGluing& g, int N) {
    static std::mutex mu;
    static std::map<std::pair<std::array<std::int64_t, 4>, int>, std::unique_ptr<GridPermutation>>
        cache;
    std::lock_guard lock(mu);
    auto& slot = cache[std::make_pair(g.matrix().m, N)];
    if (!slot) slot = std::make_unique<GridPermutation>(g.grid_permutation(N));
    return *slot;
}

ScalarField::ScalarField(const HyperbolicGluing& g, GridShape shape, bool slab,
                         std::vector<cplx> data)
    : g_(g), shape_(shape), slab_(slab), data_(std::move(data)) {
    if (shape_.N < 1 || shape_.n_slices < 1)
        throw std::invalid_argument("ScalarField: empty grid shape");
    if (shape_.size() != data_.size())
        throw std::invalid_argument("ScalarField: data size does not match grid shape");
    remeasure_seam();
}

void ScalarField::remeasure_seam() {
    seam_defect_ = 0.0;
    if (slab_ || shape_.n_slices < 2) return;
    const int nt = shape_.n_slices;
    const int H = std::min(8, nt - 1);
    const auto w = seam_interp_weights(H);
    const auto& perm = seam_permutation(g_, shape_.N);
    const std::size_t ss = shape_.slice_size();
    const double sup = sup_abs(std::span<const cplx>(data_));
    if (sup == 0.0) return;
    // Straddle the seam: nodes below t=1 are the top slices, nodes at and
    // above t=1 are ghost slices (early slices pulled back through the
    // gluing, exactly as deriv_z wraps). Predict the ghost slice at t=1 from
    // its neighbors and compare with its reconstructed value.
    double worst = 0.0;
    for (std::size_t idx = 0; idx < ss; ++idx) {
        const auto ghost = static_cast<std::size_t>(perm.fwd[idx]);
        cplx pred = 0.0;
        std::size_t wi = 0;
        for (int d = -H; d <= H; ++d) {
            if (d == 0) continue;
            const cplx v = d < 0 ? data_[static_cast<std::size_t>(nt + d) * ss + idx]
                                 : data_[static_cast<std::size_t>(d) * ss + ghost];
            pred += w[wi++] * v;
        }
        worst = std::max(worst, std::abs(pred - data_[ghost]));
    }
    seam_defect_ = worst / sup;
}

double seam_tolerance(int n_slices) {
    return 1e-10 * std::max(1.0, std::pow(64.0 / n_slices, 8.0));
}

void require_quotient(const ScalarField& f, const char* op) {
    if (f.slab())
        throw std::invalid_argument(std::string(op) +
                                    ": slab field has no seam identification");
    if (f.seam_defect() > seam_tolerance(f.shape().n_slices))
        throw std::invalid_argument(std::string(op) + ": seam defect " +
                                    std::to_string(f.seam_defect()) +
                                    " exceeds tolerance " +
                                    std::to_string(seam_tolerance(f.shape().n_slices)));
}

ScalarField from_function(const HyperbolicGluing& g, GridShape shape, bool slab,
                          const std::function<cplx(double, double, double)>& fn) {
    std::vector<cplx> data(shape.size());
    const int N = shape.N;
    pool::parallel_for(shape.n_slices, [&](int l) {
        const double t = static_cast<double>(l) / shape.n_slices;
        for (int j = 0; j < N; ++j) {
            const double y = static_cast<double>(j) / N;
            for (int i = 0; i < N; ++i)
                data[shape.index(i, j, l)] = fn(static_cast<double>(i) / N, y, t);
        }
    });
    return ScalarField(g, shape, slab, std::move(data));
}

// --- frame derivatives -------------------------------------------------------

namespace {

// Shared core of X and Y: multiply mode (k1, k2) of slice l by
// 2 pi i * rate(l) * (k1 + slope * k2).
ScalarField horizontal_derivative(const ScalarField& f, double slope, double rate_exponent) {
    const GridShape shape = f.shape();
    const int N = shape.N;
    std::vector<cplx> out(f.data().begin(), f.data().end());
    spectral::map_slice_modes(out.data(), shape, [&](cplx* modes, int l) {
        const double t = static_cast<double>(l) / shape.n_slices;
        const double rate = f.gluing().lambda_pow(rate_exponent * t);
        for (int mj = 0; mj < N; ++mj) {
            const double k2 = fft_freq(mj, N);
            for (int mi = 0; mi < N; ++mi) {
                const double k1 = fft_freq(mi, N);
                modes[mj * N + mi] *= cplx(0.0, kTwoPi * rate * (k1 + slope * k2));
            }
        }
    });
    return ScalarField(f.gluing(), shape, f.slab(), std::move(out));
}

}  // namespace

ScalarField deriv_x(const ScalarField& f) {
    return horizontal_derivative(f, f.gluing().slope_a(), +1.0);
}

ScalarField deriv_y(const ScalarField& f) {
    return horizontal_derivative(f, f.gluing().slope_b(), -1.0);
}

std::vector<double> fd_stencil_half(int order) {
    if (order < 2 || order > 12 || order % 2 != 0)
        throw std::invalid_argument("fd_stencil_half: order must be even, between 2 and 12");
    const int M = order / 2;
    // c_r = (-1)^(r+1) (M!)^2 / (r (M-r)! (M+r)!), the classic central
    // first-derivative weights; exact in double for M <= 6.
    auto fact = [](int n) {
        double v = 1;
        for (int k = 2; k <= n; ++k) v *= k;
        return v;
    };
    std::vector<double> c(M + 1, 0.0);
    const double mf = fact(M);
    for (int r = 1; r <= M; ++r) {
        const double sign = (r % 2 == 1) ? 1.0 : -1.0;
        c[r] = sign * mf * mf / (r * fact(M - r) * fact(M + r));
    }
    return c;
}

ScalarField deriv_z(const ScalarField& f, int fd_order) {
    require_quotient(f, "deriv_z");
    const GridShape shape = f.shape();
    const int nt = shape.n_slices;
    const auto c = fd_stencil_half(fd_order);
    const int M = fd_order / 2;
    if (2 * M > nt)
        throw std::invalid_argument("deriv_z: t-stencil wider than the slice count");
    const auto& perm = seam_permutation(f.gluing(), shape.N);
    const std::size_t ss = shape.slice_size();
    const auto src = f.data();
    // d/dt with step 1/nt, then Z = -(1/log lambda) d/dt.
    const double pref = -static_cast<double>(nt) / f.gluing().log_lambda();
    std::vector<cplx> out(shape.size());
    pool::parallel_for(nt, [&](int l) {
        cplx* dst = out.data() + static_cast<std::size_t>(l) * ss;
        for (std::size_t idx = 0; idx < ss; ++idx) {
            cplx acc = 0.0;
            for (int r = 1; r <= M; ++r) {
                const int lu = l + r;
                const int ld = l - r;
                // Slices past t=1 are slices of the next fundamental domain:
                // read slice lu-nt through the forward permutation. Below t=0,
                // read slice ld+nt through the inverse.
                const cplx up = lu < nt
                                    ? src[static_cast<std::size_t>(lu) * ss + idx]
                                    : src[static_cast<std::size_t>(lu - nt) * ss +
                                          static_cast<std::size_t>(perm.fwd[idx])];
                const cplx dn = ld >= 0
                                    ? src[static_cast<std::size_t>(ld) * ss + idx]
                                    : src[static_cast<std::size_t>(ld + nt) * ss +
                                          static_cast<std::size_t>(perm.inv[idx])];
                acc += c[r] * (up - dn);
            }
            dst[idx] = pref * acc;
        }
    });
    return ScalarField(f.gluing(), shape, false, std::move(out));
}

// --- flow pullbacks ----------------------------------------------------------

namespace {

// Flow pullback: phase e^{2 pi i s * rate(l) * (k1 + slope k2)} per mode.
ScalarField flow_phase(const ScalarField& f, double s, double slope, double rate_exponent) {
    const GridShape shape = f.shape();
    const int N = shape.N;
    std::vector<cplx> out(f.data().begin(), f.data().end());
    spectral::map_slice_modes(out.data(), shape, [&](cplx* modes, int l) {
        const double t = static_cast<double>(l) / shape.n_slices;
        const double rate = f.gluing().lambda_pow(rate_exponent * t);
        for (int mj = 0; mj < N; ++mj) {
            const double k2 = fft_freq(mj, N);
            for (int mi = 0; mi < N; ++mi) {
                const double k1 = fft_freq(mi, N);
                modes[mj * N + mi] *= std::polar(1.0, kTwoPi * s * rate * (k1 + slope * k2));
            }
        }
    });
    return ScalarField(f.gluing(), shape, f.slab(), std::move(out));
}

}  // namespace

ScalarField pullback_flow_x(const ScalarField& f, double s) {
    return flow_phase(f, s, f.gluing().slope_a(), +1.0);
}

ScalarField pullback_flow_y(const ScalarField& f, double u) {
    return flow_phase(f, u, f.gluing().slope_b(), -1.0);
}

ScalarField birkhoff_average(const ScalarField& f, int n) {
    if (n < 1) throw std::invalid_argument("birkhoff_average: n must be positive");
    const GridShape shape = f.shape();
    const int N = shape.N;
    std::vector<cplx> out(f.data().begin(), f.data().end());
    spectral::map_slice_modes(out.data(), shape, [&](cplx* modes, int l) {
        const double t = static_cast<double>(l) / shape.n_slices;
        const double rate = f.gluing().lambda_pow(t);
        for (int mj = 0; mj < N; ++mj) {
            const double k2 = fft_freq(mj, N);
            for (int mi = 0; mi < N; ++mi) {
                const double k1 = fft_freq(mi, N);
                const cplx z = std::polar(1.0, kTwoPi * rate * (k1 + f.gluing().slope_a() * k2));
                // Literal partial sum of the unit-time flow phases; no closed
                // form, so resonant modes behave exactly as the dynamics does.
                cplx acc = 0.0;
                cplx zj = 1.0;
                for (int j = 0; j < n; ++j) {
                    acc += zj;
                    zj *= z;
                }
                modes[mj * N + mi] *= acc / static_cast<double>(n);
            }
        }
    });
    return ScalarField(f.gluing(), shape, f.slab(), std::move(out));
}

ScalarField fiber_average(const ScalarField& f) {
    const GridShape shape = f.shape();
    const std::size_t ss = shape.slice_size();
    std::vector<cplx> out(shape.size());
    pool::parallel_for(shape.n_slices, [&](int l) {
        const cplx mean = pairwise_sum(f.slice(l)) / static_cast<double>(ss);
        cplx* dst = out.data() + static_cast<std::size_t>(l) * ss;
        std::fill(dst, dst + ss, mean);
    });
    return ScalarField(f.gluing(), shape, f.slab(), std::move(out));
}

// --- integrals, norms, algebra ------------------------------------------------

cplx integrate(const ScalarField& f) {
    require_quotient(f, "integrate");
    const cplx mean = pairwise_sum(f.data()) / static_cast<double>(f.shape().size());
    return f.gluing().volume_factor() * mean;
}

double sup_norm(const ScalarField& f) { return sup_abs(f.data()); }

double l2_norm(const ScalarField& f) {
    return std::sqrt(pairwise_sum_sq(f.data()) / static_cast<double>(f.shape().size()));
}

cplx inner(const ScalarField& f, const ScalarField& g) {
    check_compatible(f, g, "inner");
    std::vector<cplx> prod(f.shape().size());
    const auto fa = f.data();
    const auto ga = g.data();
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = std::conj(fa[i]) * ga[i];
    return pairwise_sum(std::span<const cplx>(prod)) / static_cast<double>(prod.size());
}

namespace {

ScalarField combine(const ScalarField& f, const ScalarField& g, cplx cf, cplx cg,
                    const char* op) {
    check_compatible(f, g, op);
    std::vector<cplx> out(f.shape().size());
    const auto fa = f.data();
    const auto ga = g.data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cf * fa[i] + cg * ga[i];
    return ScalarField(f.gluing(), f.shape(), f.slab() || g.slab(), std::move(out));
}

}  // namespace

ScalarField add(const ScalarField& f, const ScalarField& g) { return combine(f, g, 1.0, 1.0, "add"); }

ScalarField sub(const ScalarField& f, const ScalarField& g) {
    return combine(f, g, 1.0, -1.0, "sub");
}

ScalarField axpy(cplx c, const ScalarField& f, const ScalarField& g) {
    return combine(f, g, c, 1.0, "axpy");
}

ScalarField scale(const ScalarField& f, cplx c) {
    std::vector<cplx> out(f.data().begin(), f.data().end());
    for (auto& v : out) v *= c;
    return ScalarField(f.gluing(), f.shape(), f.slab(), std::move(out));
}

ScalarField dealias_truncate(const ScalarField& f) {
    const GridShape shape = f.shape();
    const int N = shape.N;
    const int keep = N / 3;
    std::vector<cplx> out(f.data().begin(), f.data().end());
    spectral::map_slice_modes(out.data(), shape, [&](cplx* modes, int l) {
        (void)l;
        for (int mj = 0; mj < N; ++mj) {
            const int k2 = fft_freq(mj, N);
            for (int mi = 0; mi < N; ++mi) {
                const int k1 = fft_freq(mi, N);
                if (std::max(std::abs(k1), std::abs(k2)) > keep) modes[mj * N + mi] = 0.0;
            }
        }
    });
    return ScalarField(f.gluing(), shape, f.slab(), std::move(out));
}

ScalarField pointwise_product(const ScalarField& f, const ScalarField& g, bool dealias) {
    check_compatible(f, g, "pointwise_product");
    const ScalarField ft = dealias ? dealias_truncate(f) : f;
    const ScalarField gt = dealias ? dealias_truncate(g) : g;
    std::vector<cplx> out(f.shape().size());
    const auto a = ft.data();
    const auto b = gt.data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
    ScalarField prod(f.gluing(), f.shape(), f.slab() || g.slab(), std::move(out));
    return dealias ? dealias_truncate(prod) : prod;
}

// --- orbit equidistribution -----------------------------------------------------

OrbitReport orbit_discrepancy(const HyperbolicGluing& g, std::array<double, 3> base, double S,
                              int K, int samples_per_unit) {
    if (S <= 0 || K < 1 || samples_per_unit < 1)
        throw std::invalid_argument("orbit_discrepancy: need S > 0, K >= 1, samples >= 1");
    const long long M = std::max<long long>(1, std::llround(static_cast<double>(samples_per_unit) * S));
    const double ds = S / static_cast<double>(M);
    const double rate = g.lambda_pow(base[2]);

    OrbitReport rep;
    rep.S = S;
    rep.K = K;
    rep.samples = static_cast<int>(M);
    rep.base = base;
    rep.rows.reserve(static_cast<std::size_t>(2 * K + 1) * (2 * K + 1) - 1);

    for (int k2 = -K; k2 <= K; ++k2) {
        for (int k1 = -K; k1 <= K; ++k1) {
            if (k1 == 0 && k2 == 0) continue;
            // Equispaced samples along the expanding line make the Weyl sum a
            // geometric series; |sum| = |sin(M phi/2) / sin(phi/2)|.
            const double kappa = k1 + g.slope_a() * k2;
            const double phi = kTwoPi * ds * rate * kappa;
            const double denom = std::sin(0.5 * phi);
            double mag = 1.0;
            if (std::abs(denom) > 1e-14)
                mag = std::abs(std::sin(0.5 * static_cast<double>(M) * phi) /
                               (static_cast<double>(M) * denom));
            rep.rows.push_back({k1, k2, mag});
            if (mag > rep.max_weyl) {
                rep.max_weyl = mag;
                rep.worst_k1 = k1;
                rep.worst_k2 = k2;
            }
        }
    }
    return rep;
}

}  // namespace hypertorus
