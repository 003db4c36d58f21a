#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "hypertorus/gluing.hpp"

using namespace hypertorus;

namespace {

/// Independent spectral data for an integer matrix, via Eigen's general
/// eigensolver instead of the quadratic formula used by the library.
struct SpectralOracle {
    double lambda;
    double slope_a;
    double slope_b;
};

SpectralOracle oracle_for(const std::array<std::int64_t, 4>& m) {
    Eigen::Matrix2d M;
    M << static_cast<double>(m[0]), static_cast<double>(m[1]), static_cast<double>(m[2]),
        static_cast<double>(m[3]);
    Eigen::EigenSolver<Eigen::Matrix2d> es(M);
    const double l0 = es.eigenvalues()(0).real();
    const double l1 = es.eigenvalues()(1).real();
    const int big = l0 > l1 ? 0 : 1;
    const int small = 1 - big;
    SpectralOracle o{};
    o.lambda = es.eigenvalues()(big).real();
    // Eigenvector (1, s) for eigenvalue l solves m00 + m01 s = l.
    o.slope_a = (o.lambda - static_cast<double>(m[0])) / static_cast<double>(m[1]);
    o.slope_b =
        (es.eigenvalues()(small).real() - static_cast<double>(m[0])) / static_cast<double>(m[1]);
    return o;
}

}  // namespace

TEST_CASE("spectral data matches an independent eigensolver") {
    const std::array<std::array<std::int64_t, 4>, 3> mats{
        std::array<std::int64_t, 4>{2, 1, 1, 1},
        std::array<std::int64_t, 4>{3, 1, 2, 1},
        std::array<std::int64_t, 4>{5, 2, 2, 1},
    };
    for (const auto& m : mats) {
        CAPTURE(m[0]);
        const HyperbolicGluing g = HyperbolicGluing::from_matrix(Mat2i{m});
        const SpectralOracle o = oracle_for(m);
        CHECK(g.lambda() == doctest::Approx(o.lambda).epsilon(1e-13));
        CHECK(g.slope_a() == doctest::Approx(o.slope_a).epsilon(1e-12));
        CHECK(g.slope_b() == doctest::Approx(o.slope_b).epsilon(1e-12));
        CHECK(g.log_lambda() == doctest::Approx(std::log(o.lambda)).epsilon(1e-13));
    }
}

TEST_CASE("golden-mean matrix pins the classic constants") {
    const HyperbolicGluing g = HyperbolicGluing::from_matrix(Mat2i{{2, 1, 1, 1}});
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;  // golden ratio
    CHECK(g.lambda() == doctest::Approx(phi * phi).epsilon(1e-14));
    CHECK(g.slope_a() == doctest::Approx(phi - 1.0).epsilon(1e-14));
    CHECK(g.slope_b() == doctest::Approx(-phi).epsilon(1e-14));
    // a - b = sqrt(5); the volume factor is log(lambda)/sqrt(5).
    CHECK(g.volume_factor() ==
          doctest::Approx(std::log(phi * phi) / std::sqrt(5.0)).epsilon(1e-14));
    CHECK(g.volume_factor() == doctest::Approx(0.4304089410).epsilon(1e-8));
    CHECK(g.lambda_pow(1.0) == doctest::Approx(g.lambda()).epsilon(1e-14));
    CHECK(g.lambda_pow(-1.0) == doctest::Approx(1.0 / g.lambda()).epsilon(1e-14));
    CHECK(g.lambda_pow(0.0) == 1.0);
}

TEST_CASE("non-hyperbolic or non-unimodular matrices are refused") {
    CHECK_THROWS_AS(HyperbolicGluing::from_matrix(Mat2i{{1, 0, 0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(HyperbolicGluing::from_matrix(Mat2i{{0, -1, 1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(HyperbolicGluing::from_matrix(Mat2i{{2, 3, 1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(HyperbolicGluing::from_matrix(Mat2i{{2, 1, 0, 0}}), std::invalid_argument);
}

TEST_CASE("matrix helpers: determinant, inverse, transpose, apply") {
    const Mat2i A{{2, 1, 1, 1}};
    CHECK(A.det() == 1);
    CHECK(A.trace() == 3);
    const Mat2i Ai = A.inverse_unimodular();
    const auto id1 = Ai.apply(A.apply(5, -3)[0], A.apply(5, -3)[1]);
    CHECK(id1[0] == 5);
    CHECK(id1[1] == -3);
    const Mat2i At = A.transpose();
    CHECK(At.apply(1, 0)[0] == 2);
    CHECK(At.apply(1, 0)[1] == 1);
}

TEST_CASE("seam permutation: small-grid image and inverse consistency") {
    const HyperbolicGluing g = HyperbolicGluing::from_matrix(Mat2i{{2, 1, 1, 1}});

    // N = 2: the inverse matrix sends (1,0) to (1,-1) = (1,1) mod 2.
    const GridPermutation p2 = g.grid_permutation(2);
    CHECK(p2.at(1, 0) == 1 + 1 * 2);

    const int N = 8;
    const GridPermutation p = g.grid_permutation(N);
    REQUIRE(static_cast<int>(p.fwd.size()) == N * N);
    for (int idx = 0; idx < N * N; ++idx) {
        CHECK(p.inv[p.fwd[idx]] == idx);
        CHECK(p.fwd[p.inv[idx]] == idx);
    }

    // Iterating the permutation cycles back to the start (it is a bijection
    // of a finite set; every orbit closes within N*N steps).
    int idx = 3;
    int steps = 0;
    do {
        idx = p.fwd[idx];
        ++steps;
    } while (idx != 3 && steps <= N * N);
    CHECK(idx == 3);
    CHECK(steps <= N * N);
}
