#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "hypertorus/circle.hpp"
#include "hypertorus/scalar_field.hpp"

namespace hypertorus {

/// Deterministic random source. All draws go through our own mappings from
/// raw mt19937_64 words, so streams are identical across platforms and
/// standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(uniform() * (static_cast<double>(hi) - lo + 1));
    }
    /// Random point on the unit circle.
    cplx unit_complex();

  private:
    std::mt19937_64 eng_;
};

/// One seam-exact packet of spatial modes: the orbit of a seed frequency
/// under the transposed gluing matrix, with a Gaussian envelope in the chain
/// coordinate tau = t + j. Mode j carries c_j(t) = amp * exp(-(t + j -
/// center)^2 / (2 sigma^2)), so c_j(1) = c_{j+1}(0) identically and the seam
/// condition holds to the envelope's truncation floor (~1e-13 relative).
struct ChainSpec {
    std::vector<std::array<int, 2>> modes;  // k_j, consecutive transposed-orbit points
    double center = 0;                      // envelope center in tau
    double sigma = 0.25;                    // envelope width
    cplx amp = 0.0;
};

/// Resolution-independent analytic field: chains plus a fiber-constant circle
/// part. Can be sampled on any grid, which is what convergence studies need.
struct FieldSpec {
    std::vector<ChainSpec> chains;
    CircleFunction circle;

    cplx eval(double x, double y, double t) const;
    /// Analytic t-derivative, for finite-difference error oracles.
    cplx eval_dt(double x, double y, double t) const;
};

struct SynthOptions {
    int n_chains = 6;
    /// Keep every chain mode with max(|k1|,|k2|) <= max_abs_k. Choose <= N/3
    /// of the smallest grid the spec will be sampled on.
    int max_abs_k = 21;
    int min_chain_length = 4;
    /// Envelope width cap; smaller = more t bandwidth.
    double max_sigma = 0.25;
    /// Circle-part harmonics run over |m| <= circle_band; 0 disables.
    int circle_band = 3;
    double amp_lo = 0.3;
    double amp_hi = 1.0;
};

/// Draws a random analytic quotient field description.
FieldSpec random_field_spec(const HyperbolicGluing& g, Rng& rng, const SynthOptions& opt = {});

/// Samples a FieldSpec spectrally on the given grid (exact trigonometric
/// sampling, no quadrature error).
ScalarField sample_spec(const FieldSpec& spec, const HyperbolicGluing& g, GridShape shape);

/// random_field_spec + sample_spec.
ScalarField random_quotient_field(const HyperbolicGluing& g, GridShape shape, Rng& rng,
                                  const SynthOptions& opt = {});

/// Plain band-limited random data on the slab, periodic in t, with no seam
/// gluing. Deliberately NOT a quotient field.
ScalarField random_slab_field(const HyperbolicGluing& g, GridShape shape, Rng& rng,
                              int max_abs_k = 5, int t_band = 3);

}  // namespace hypertorus
