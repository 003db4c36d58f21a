#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hypertorus/cohomology.hpp"
#include "hypertorus/probe.hpp"
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

TEST_CASE("probe internals match the public calculus") {
    const auto g = cat_map();
    const auto r = probe_consistency(g, GridShape{16, 16}, 8, 99);
    CHECK(r.adjoint_defect < 1e-12);
    CHECK(r.operator_defect < 1e-10);
}

TEST_CASE("twisted coboundary kills flow-fixed forms and the sheared leg") {
    const auto g = cat_map();
    const GridShape shape{16, 16};
    Rng rng(31);

    // alpha is not flow-fixed, but its twisted difference is the closed leg.
    const FrameForm alpha = FrameForm::monomial(g, shape, 1, 0);
    CHECK(form_l2_norm(coboundary_T(alpha)) / form_l2_norm(alpha) < 1e-12);

    const FrameForm beta = FrameForm::monomial(g, shape, 1, 1);
    CHECK(form_l2_norm(coboundary_T(beta)) / form_l2_norm(beta) < 1e-12);

    const FrameForm winv = invariant_part(random_form(g, shape, rng, 1, narrow(5)));
    CHECK(form_l2_norm(coboundary_T(winv)) / std::max(form_l2_norm(winv), 1e-300) < 1e-12);
}

TEST_CASE("twisted coboundary is linear") {
    const auto g = cat_map();
    const GridShape shape{16, 16};
    Rng rng(32);

    const FrameForm w1 = random_form(g, shape, rng, 1, narrow(5));
    const FrameForm w2 = random_form(g, shape, rng, 1, narrow(5));
    const cplx c1 = 1.3 * rng.unit_complex();
    const cplx c2 = 0.7 * rng.unit_complex();

    const FrameForm lhs = coboundary_T(form_add(form_scale(w1, c1), form_scale(w2, c2)));
    const FrameForm rhs = form_add(form_scale(coboundary_T(w1), c1),
                                   form_scale(coboundary_T(w2), c2));
    const double scale_norm = std::max(form_l2_norm(coboundary_T(w1)),
                                       form_l2_norm(coboundary_T(w2)));
    CHECK(form_l2_norm(form_sub(lhs, rhs)) / std::max(scale_norm, 1e-300) < 1e-12);
}

TEST_CASE("probe resolves a synthetic coboundary image as exact-like") {
    const auto g = cat_map();
    Rng rng(407);
    std::vector<FieldSpec> specs;
    for (int i = 0; i < 3; ++i) specs.push_back(random_field_spec(g, rng, narrow(5)));

    const TargetBuilder build = [&](GridShape shape) {
        FrameForm w = FrameForm::one_form(sample_spec(specs[0], g, shape),
                                          sample_spec(specs[1], g, shape),
                                          sample_spec(specs[2], g, shape));
        return coboundary_T(w, 8);
    };

    const auto rep = exactness_probe(build, 8, ProbeBudget{600, 0.0}, {}, {16});
    REQUIRE(rep.levels.size() == 1);
    CHECK(rep.verdict == "EXACT-LIKE");
    CHECK(rep.levels[0].relative_residual < 1e-6);
}

TEST_CASE("probe flags the circle-harmonic generators as obstructed") {
    const auto g = cat_map();
    const std::vector<int> levels{16, 32};

    const TargetBuilder h1 = [&](GridShape shape) {
        return generator_h1(CircleFunction::cosine(1), g, shape, 8).eta;
    };
    const auto rep1 = exactness_probe(h1, 8, ProbeBudget{400, 0.0}, {}, levels);
    CHECK(rep1.verdict == "OBSTRUCTED");
    for (const auto& lv : rep1.levels) CHECK(lv.relative_residual > 0.1);

    const TargetBuilder h2 = [&](GridShape shape) {
        return generator_h2(CircleFunction::sine(1), g, shape, 8).eta;
    };
    const auto rep2 = exactness_probe(h2, 8, ProbeBudget{400, 0.0}, {}, levels);
    CHECK(rep2.verdict == "OBSTRUCTED");
    for (const auto& lv : rep2.levels) CHECK(lv.relative_residual > 0.1);
}

TEST_CASE("generator certificates hold for the harmonic family") {
    const auto g = cat_map();
    const GridShape shape{32, 32};

    for (int k = 1; k <= 2; ++k) {
        CAPTURE(k);
        const auto r1 = generator_h1(CircleFunction::cosine(k), g, shape, 8);
        CHECK(r1.d_defect < 1e-8);
        CHECK(r1.presentation_defect < 1e-10);

        const auto r2 = generator_h2(CircleFunction::sine(k), g, shape, 8);
        CHECK(r2.d_defect < 1e-8);
        CHECK(r2.presentation_defect < 1e-10);
    }
}

TEST_CASE("twisted scalar differences integrate to zero") {
    const auto g = cat_map();
    const GridShape shape{32, 32};
    Rng rng(88);

    const ScalarField f = random_quotient_field(g, shape, rng, narrow(8));
    const auto rep = h0_vanishing_check(f, 8);
    CHECK(rep.integral_rel < 1e-11);
    CHECK(rep.g_norm > 0.0);

    // A fiber-constant field is flow-fixed, so its twisted difference is
    // pure roundoff.
    const ScalarField psi = pullback_circle(g, shape, CircleFunction::cosine(2));
    const auto fixed = h0_vanishing_check(psi, 8);
    CHECK(fixed.f_norm < 1e-13 * fixed.g_norm);
}

TEST_CASE("density primitive reproduces the analytic circle solution") {
    const auto g = cat_map();
    const GridShape shape{32, 64};
    const ScalarField f = pullback_circle(g, shape, CircleFunction::sine(1));

    const auto r = h3_primitive(f, 8);
    CHECK(std::abs(r.c) < 1e-12);
    CHECK(r.report.relative_residual < 1e-8);

    // Solving -(1/log lambda) w'(t) = sin(2 pi t) with w(0) = 0 gives
    // w = (log lambda / 2 pi)(cos(2 pi t) - 1) on the volume-free leg.
    const double lvl = std::log(g.lambda()) / kTwoPi;
    CircleFunction wfun;
    wfun.add_mode(1, 0.5 * lvl).add_mode(-1, 0.5 * lvl).add_mode(0, -lvl);
    FrameForm expected = FrameForm::zero(g, shape, 2);
    expected.comp(0) = pullback_circle(g, shape, wfun);
    CHECK(rel_l2(r.primitive, expected) < 1e-8);
}

TEST_CASE("density primitive of a constant density is the mean itself") {
    const auto g = cat_map();
    const GridShape shape{16, 16};
    const ScalarField ones =
        from_function(g, shape, false, [](double, double, double) { return cplx{1.0, 0.0}; });

    const auto r = h3_primitive(ones, 8);
    CHECK(std::abs(r.c - 1.0) < 1e-14);
    CHECK(form_l2_norm(r.primitive) < 1e-10);
}

TEST_CASE("density primitive handles random densities and reports denominators") {
    const auto g = cat_map();
    const GridShape shape{32, 64};
    SynthOptions opt;
    opt.max_abs_k = 8;
    Rng rng(55);
    const ScalarField f = random_quotient_field(g, shape, rng, opt);

    const auto r = h3_primitive(f, 8);
    CHECK(r.report.relative_residual < 1e-6);

    const auto& st = r.report.stats;
    CHECK(st.K == 16);
    CHECK(st.min_abs >= 1e-3);
    int total = 0;
    for (int c : st.histogram) total += c;
    CHECK(total == (2 * st.K + 1) * (2 * st.K + 1) - 1);
    CHECK(r.report.flagged.empty());
}

TEST_CASE("telescoping difference quotients obey the sup bound and decay") {
    const auto g = cat_map();
    const GridShape shape{32, 32};

    // A flow-fixed field has vanishing quotients at every n.
    const ScalarField psi = pullback_circle(g, shape, CircleFunction::cosine(1));
    const ScalarField none = scale(psi, 0.0);
    const auto fixed = modeleq_check(none, psi, {1, 4});
    REQUIRE(fixed.rows.size() == 2);
    for (const auto& row : fixed.rows) {
        CHECK(row.fn_sup < 1e-13 * fixed.h_sup);
        CHECK(row.within_bound);
    }
    CHECK(fixed.all_within);
    CHECK(fixed.decay_ok);

    // A pure horizontal wave moves; its quotients saturate the 2/n envelope
    // but still shrink like 1/n.
    const ScalarField h = from_function(g, shape, true, [](double x, double, double) {
        return std::polar(1.0, kTwoPi * x);
    });
    const auto moving = modeleq_check(scale(h, 0.0), h, {1, 2, 4, 8});
    CHECK(moving.h_sup == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(moving.all_within);
    CHECK(moving.decay_ok);
    for (const auto& row : moving.rows) {
        CAPTURE(row.n);
        CHECK(row.fn_sup <= row.bound * (1.0 + 1e-12));
    }
}

TEST_CASE("injectivity check passes projected forms and refuses alpha") {
    const auto g = cat_map();
    const GridShape shape{32, 32};
    Rng rng(77);

    for (int degree = 1; degree <= 2; ++degree) {
        CAPTURE(degree);
        const FrameForm w = invariant_part(random_form(g, shape, rng, degree, narrow(6)));
        const auto rep = iso_injectivity_check(w, 8);
        CHECK(rep.status == "PASS");
        CHECK(rep.lie_ratio <= 1e-6);

        // The projection is idempotent and genuinely flow-fixed.
        CHECK(rel_l2(invariant_part(w), w) < 1e-13);
        CHECK(rel_l2(pullback_form_flow_x(w, 1.0), w) < 1e-13);
    }

    const FrameForm alpha = FrameForm::monomial(g, shape, 1, 0);
    const auto refusal = iso_injectivity_check(alpha, 8);
    CHECK(refusal.status == "NOT-INVARIANT");
    CHECK(std::abs(refusal.gamma_defect - 1.0) < 1e-12);
}

TEST_CASE("flow averages satisfy the fundamental theorem of calculus") {
    const auto g = cat_map();
    const GridShape shape{32, 32};
    Rng rng(41);
    const ScalarField f = random_quotient_field(g, shape, rng, narrow(5));
    const QuadratureSpec quad{16, 16};

    const ScalarField lhs_x = flow_average(deriv_x(f), 0.7, FrameVector::X, quad);
    CHECK(rel_l2(lhs_x, sub(pullback_flow_x(f, 0.7), f)) < 1e-9);

    const ScalarField lhs_y = flow_average(deriv_y(f), -0.4, FrameVector::Y, quad);
    CHECK(rel_l2(lhs_y, sub(pullback_flow_y(f, -0.4), f)) < 1e-9);

    CHECK(l2_norm(flow_average(f, 0.0, FrameVector::X, quad)) == 0.0);
    CHECK_THROWS_AS(flow_average(f, 1.0, FrameVector::Z, quad), std::invalid_argument);
}

TEST_CASE("independence deflation keeps the harmonic pair") {
    const auto g = cat_map();
    const GridShape shape{16, 16};

    const auto empty = independence_report(0, 1, g, shape, 8, ProbeBudget{50, 0.0});
    CHECK(empty.rank == 0);
    CHECK(empty.residual_fractions.empty());

    const auto rep = independence_report(1, 1, g, shape, 8, ProbeBudget{300, 0.0});
    REQUIRE(rep.residual_fractions.size() == 2);
    REQUIRE(rep.gram_eigenvalues.size() == 2);
    CHECK(rep.rank == 2);
    for (double r : rep.residual_fractions) CHECK(r > 0.1);

    CHECK_THROWS_AS(independence_report(1, 0, g, shape, 8, ProbeBudget{50, 0.0}),
                    std::invalid_argument);
}
