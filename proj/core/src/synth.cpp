#include "hypertorus/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hypertorus/parallel.hpp"
#include "hypertorus/spectral.hpp"

namespace hypertorus {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Envelope value at the chain's truncated ends; keeps the seam error of a
// finite chain around 1e-13 relative, under the 1e-10 acceptance line.
const double kEdgeExponent = std::sqrt(60.0);  // exp(-30) floor

double envelope(const ChainSpec& c, double tau) {
    const double u = tau - c.center;
    const double e = u * u / (2.0 * c.sigma * c.sigma);
    return e > 700.0 ? 0.0 : std::exp(-e);
}
}  // namespace

cplx Rng::unit_complex() { return std::polar(1.0, kTwoPi * uniform()); }

cplx FieldSpec::eval(double x, double y, double t) const {
    cplx acc = circle.eval(t);
    for (const auto& c : chains) {
        for (std::size_t j = 0; j < c.modes.size(); ++j) {
            const double env = envelope(c, t + static_cast<double>(j));
            if (env == 0.0) continue;
            acc += c.amp * env * std::polar(1.0, kTwoPi * (c.modes[j][0] * x + c.modes[j][1] * y));
        }
    }
    return acc;
}

cplx FieldSpec::eval_dt(double x, double y, double t) const {
    cplx acc = circle.derivative().eval(t);
    for (const auto& c : chains) {
        for (std::size_t j = 0; j < c.modes.size(); ++j) {
            const double tau = t + static_cast<double>(j);
            const double env = envelope(c, tau);
            if (env == 0.0) continue;
            const double dlog = -(tau - c.center) / (c.sigma * c.sigma);
            acc += c.amp * env * dlog *
                   std::polar(1.0, kTwoPi * (c.modes[j][0] * x + c.modes[j][1] * y));
        }
    }
    return acc;
}

namespace {

bool in_band(std::array<std::int64_t, 2> k, int band) {
    return std::max(std::llabs(k[0]), std::llabs(k[1])) <= band;
}

}  // namespace

FieldSpec random_field_spec(const HyperbolicGluing& g, Rng& rng, const SynthOptions& opt) {
    if (opt.max_abs_k < 3)
        throw std::invalid_argument("random_field_spec: max_abs_k must be at least 3");
    const Mat2i at = g.matrix().transpose();
    const Mat2i at_inv = g.matrix().inverse_unimodular().transpose();

    FieldSpec spec;
    for (int chain = 0; chain < opt.n_chains; ++chain) {
        std::vector<std::array<int, 2>> orbit;
        for (int attempt = 0; attempt < 200 && orbit.empty(); ++attempt) {
            const int s1 = rng.uniform_int(-3, 3);
            const int s2 = rng.uniform_int(-3, 3);
            if (s1 == 0 && s2 == 0) continue;
            std::array<std::int64_t, 2> seed{s1, s2};
            if (!in_band(seed, opt.max_abs_k)) continue;

            // Walk the transposed-matrix orbit both ways while it stays in
            // band; the expanding/contracting directions cut it off quickly.
            std::vector<std::array<int, 2>> back, fwd;
            auto k = seed;
            while (true) {
                auto next = at_inv.apply(k[0], k[1]);
                if (!in_band(next, opt.max_abs_k)) break;
                back.push_back({static_cast<int>(next[0]), static_cast<int>(next[1])});
                k = next;
            }
            std::vector<std::array<int, 2>> chain_modes(back.rbegin(), back.rend());
            chain_modes.push_back({s1, s2});
            k = seed;
            while (true) {
                auto next = at.apply(k[0], k[1]);
                if (!in_band(next, opt.max_abs_k)) break;
                chain_modes.push_back({static_cast<int>(next[0]), static_cast<int>(next[1])});
                k = next;
            }
            if (static_cast<int>(chain_modes.size()) >= opt.min_chain_length)
                orbit = std::move(chain_modes);
        }
        if (orbit.empty())
            throw std::runtime_error("random_field_spec: could not find an in-band orbit");

        ChainSpec c;
        c.modes = std::move(orbit);
        const double L = static_cast<double>(c.modes.size());
        c.center = 0.5 * L + rng.uniform(-0.3, 0.3);
        c.sigma = std::min(opt.max_sigma,
                           std::min(c.center, L - c.center) / kEdgeExponent);
        c.amp = rng.uniform(opt.amp_lo, opt.amp_hi) * rng.unit_complex();
        spec.chains.push_back(std::move(c));
    }

    if (opt.circle_band > 0) {
        for (int m = -opt.circle_band; m <= opt.circle_band; ++m) {
            const cplx cm = rng.uniform(0.2, 0.5) * rng.unit_complex();
            spec.circle.add_mode(m, cm / (1.0 + m * m));
        }
    }
    return spec;
}

ScalarField sample_spec(const FieldSpec& spec, const HyperbolicGluing& g, GridShape shape) {
    const int N = shape.N;
    for (const auto& c : spec.chains)
        for (const auto& k : c.modes)
            if (std::max(std::abs(k[0]), std::abs(k[1])) >= (N + 1) / 2)
                throw std::invalid_argument("sample_spec: grid too coarse for the spec's modes");

    std::vector<cplx> data(shape.size(), cplx{0.0, 0.0});
    const std::size_t ss = shape.slice_size();
    pool::parallel_for(shape.n_slices, [&](int l) {
        const double t = static_cast<double>(l) / shape.n_slices;
        cplx* slice = data.data() + static_cast<std::size_t>(l) * ss;
        for (const auto& c : spec.chains) {
            for (std::size_t j = 0; j < c.modes.size(); ++j) {
                const double env = envelope(c, t + static_cast<double>(j));
                if (env == 0.0) continue;
                const int bi = ((c.modes[j][0] % N) + N) % N;
                const int bj = ((c.modes[j][1] % N) + N) % N;
                slice[static_cast<std::size_t>(bj) * N + bi] += c.amp * env;
            }
        }
        slice[0] += spec.circle.eval(t);
        // Coefficients are the field's true Fourier data: unnormalized
        // inverse transform evaluates the trigonometric sum exactly.
        spectral::inverse_slice(slice, N);
    });
    return ScalarField(g, shape, false, std::move(data));
}

ScalarField random_quotient_field(const HyperbolicGluing& g, GridShape shape, Rng& rng,
                                  const SynthOptions& opt) {
    SynthOptions o = opt;
    o.max_abs_k = std::min(o.max_abs_k, shape.N / 3);
    return sample_spec(random_field_spec(g, rng, o), g, shape);
}

ScalarField random_slab_field(const HyperbolicGluing& g, GridShape shape, Rng& rng,
                              int max_abs_k, int t_band) {
    const int N = shape.N;
    if (max_abs_k >= (N + 1) / 2)
        throw std::invalid_argument("random_slab_field: band exceeds grid");
    const int B = 2 * max_abs_k + 1;
    // Random t-periodic coefficients per spatial mode; periodic-in-t data is
    // generically NOT glued, which is the point of a slab sample.
    std::vector<cplx> coef(static_cast<std::size_t>(B) * B * (2 * t_band + 1));
    for (auto& c : coef) c = rng.uniform(0.1, 1.0) * rng.unit_complex();

    std::vector<cplx> data(shape.size(), cplx{0.0, 0.0});
    const std::size_t ss = shape.slice_size();
    pool::parallel_for(shape.n_slices, [&](int l) {
        const double t = static_cast<double>(l) / shape.n_slices;
        cplx* slice = data.data() + static_cast<std::size_t>(l) * ss;
        std::size_t idx = 0;
        for (int k2 = -max_abs_k; k2 <= max_abs_k; ++k2) {
            for (int k1 = -max_abs_k; k1 <= max_abs_k; ++k1) {
                cplx v = 0.0;
                for (int m = -t_band; m <= t_band; ++m)
                    v += coef[idx++] * std::polar(1.0, kTwoPi * m * t) /
                         (1.0 + k1 * k1 + k2 * k2 + m * m);
                const int bi = ((k1 % N) + N) % N;
                const int bj = ((k2 % N) + N) % N;
                slice[static_cast<std::size_t>(bj) * N + bi] += v;
            }
        }
        spectral::inverse_slice(slice, N);
    });
    return ScalarField(g, shape, true, std::move(data));
}

}  // namespace hypertorus
