#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "hypertorus/averaging.hpp"
#include "hypertorus/circle.hpp"
#include "hypertorus/suites.hpp"
#include "hypertorus/synth.hpp"
#include "test_util.hpp"

using namespace hypertorus;
using hypertorus::testutil::cat_map;
using hypertorus::testutil::rel_l2;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SynthOptions narrow(int k) {
    SynthOptions opt;
    opt.max_abs_k = k;
    opt.circle_band = 2;
    return opt;
}

}  // namespace

TEST_CASE("gauss_legendre integrates polynomials exactly") {
    std::vector<double> x, w;

    gauss_legendre(1, x, w);
    REQUIRE(x.size() == 1);
    CHECK(std::abs(x[0]) < 1e-15);
    CHECK(std::abs(w[0] - 2.0) < 1e-15);

    gauss_legendre(8, x, w);
    double total = 0.0;
    for (double wi : w) total += wi;
    CHECK(std::abs(total - 2.0) < 1e-14);

    // An order-n rule is exact through degree 2n - 1.
    for (int deg = 0; deg <= 15; ++deg) {
        double acc = 0.0;
        for (std::size_t q = 0; q < x.size(); ++q) acc += w[q] * std::pow(x[q], deg);
        const double want = (deg % 2 == 0) ? 2.0 / (deg + 1) : 0.0;
        CAPTURE(deg);
        CHECK(std::abs(acc - want) < 1e-13);
    }

    CHECK_THROWS_AS(gauss_legendre(0, x, w), std::invalid_argument);
}

TEST_CASE("time integrals of a fiber-constant field are the field and half the field") {
    const auto g = cat_map();
    const GridShape shape{16, 32};
    const ScalarField f = pullback_circle(g, shape, CircleFunction::sine(1));

    const auto [first, second] = time_integrals_exact(f);
    // Every mode of a fiber-constant field has zero flow phase, so the two
    // unit-interval integrals reduce to the exact constants 1 and 1/2.
    CHECK(rel_l2(first, f) < 1e-14);
    CHECK(rel_l2(second, scale(f, 0.5)) < 1e-14);
}

TEST_CASE("closed-form time integrals match quadrature across the small-phase switch") {
    const auto g = cat_map();
    const GridShape shape{32, 16};
    // Mode (5, -8) has flow frequency 5 - 8*(phi - 1) ~ 0.056, so the phase
    // 2*pi*lambda^t*0.056 sweeps through both evaluation branches of the
    // closed form (series below 0.5, direct quotient above) as t varies.
    const ScalarField f = from_function(g, shape, true, [](double x, double y, double) {
        return std::polar(1.0, kTwoPi * (5.0 * x - 8.0 * y));
    });

    const auto [e0, e1] = time_integrals_exact(f);
    const auto [q0, q1] = time_integrals_quad(f, QuadratureSpec{24, 32});
    CHECK(rel_l2(e0, q0) < 1e-12);
    CHECK(rel_l2(e1, q1) < 1e-12);
}

TEST_CASE("averaging fixes the six invariant coframe monomials") {
    const auto g = cat_map();
    const GridShape shape{16, 16};

    const auto check_fixed = [&](int degree, int which) {
        const FrameForm w = FrameForm::monomial(g, shape, degree, which);
        CAPTURE(degree);
        CAPTURE(which);
        CHECK(rel_l2(average_I_exact(w), w) < 1e-12);
    };

    check_fixed(0, 0);  // the constant function
    check_fixed(1, 1);  // beta
    check_fixed(1, 2);  // theta
    check_fixed(2, 1);  // alpha^theta
    check_fixed(2, 2);  // beta^theta
    check_fixed(3, 0);  // the volume form
}

TEST_CASE("averaging shears the expanding coframe legs") {
    const auto g = cat_map();
    const GridShape shape{16, 16};

    const FrameForm alpha = FrameForm::monomial(g, shape, 1, 0);
    const FrameForm theta = FrameForm::monomial(g, shape, 1, 2);
    const FrameForm want1 = form_sub(alpha, form_scale(theta, 0.5));
    CHECK(rel_l2(average_I_exact(alpha), want1) < 1e-12);

    const FrameForm ab = FrameForm::monomial(g, shape, 2, 0);
    const FrameForm bt = FrameForm::monomial(g, shape, 2, 2);
    const FrameForm want2 = form_add(ab, form_scale(bt, 0.5));
    CHECK(rel_l2(average_I_exact(ab), want2) < 1e-12);
}

TEST_CASE("quadrature route agrees with the closed-form route") {
    const auto g = cat_map();
    const GridShape shape{16, 16};
    Rng rng(2024);
    const QuadratureSpec quad{16, 16};

    for (int degree = 0; degree <= 3; ++degree) {
        const FrameForm w = random_form(g, shape, rng, degree, narrow(5));
        CAPTURE(degree);
        CHECK(rel_l2(average_I(w, quad), average_I_exact(w)) < 1e-10);
    }
}

TEST_CASE("signed averaging flips odd degrees only") {
    const auto g = cat_map();
    const GridShape shape{16, 16};
    Rng rng(7);

    for (int degree = 0; degree <= 3; ++degree) {
        const FrameForm w = random_form(g, shape, rng, degree, narrow(4));
        const FrameForm plain = average_I_exact(w);
        const FrameForm flipped = average_signed(w, true, true);
        const FrameForm kept = average_signed(w, false, true);
        CAPTURE(degree);
        CHECK(rel_l2(kept, plain) < 1e-15);
        const FrameForm want = (degree % 2 == 1) ? form_scale(plain, -1.0) : plain;
        CHECK(rel_l2(flipped, want) < 1e-15);
    }
}

TEST_CASE("coinvariant image reports a consistent defect") {
    const auto g = cat_map();
    const GridShape shape{16, 16};
    Rng rng(11);
    const FrameForm w = random_form(g, shape, rng, 1, narrow(3));

    const auto r = coinvariant_image(w, QuadratureSpec{16, 16});
    CHECK(r.w_norm == doctest::Approx(form_l2_norm(w)).epsilon(1e-14));
    CHECK(rel_l2(r.image, form_sub(pullback_form_flow_x(w, 1.0), w)) < 1e-14);
    // The averaged flow derivative reproduces the time-1 difference up to
    // time-derivative truncation on this deliberately coarse grid.
    CHECK(r.defect / r.w_norm < 1e-2);
    CHECK(std::isfinite(r.defect));
}
