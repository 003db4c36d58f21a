#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace hypertorus {

/// 2x2 integer matrix, row-major: [[m00, m01], [m10, m11]].
struct Mat2i {
    std::array<std::int64_t, 4> m{1, 0, 0, 1};

    std::int64_t det() const { return m[0] * m[3] - m[1] * m[2]; }
    std::int64_t trace() const { return m[0] + m[3]; }
    /// Inverse, valid only when det == 1.
    Mat2i inverse_unimodular() const { return Mat2i{{m[3], -m[1], -m[2], m[0]}}; }
    Mat2i transpose() const { return Mat2i{{m[0], m[2], m[1], m[3]}}; }
    std::array<std::int64_t, 2> apply(std::int64_t x, std::int64_t y) const {
        return {m[0] * x + m[1] * y, m[2] * x + m[3] * y};
    }
    bool operator==(const Mat2i&) const = default;
    std::string str() const;
};

/// Permutation of the N x N spatial grid induced by an integer unimodular map:
/// (i, j) -> B(i, j) mod N. Stored as flat index maps, idx = j*N + i.
struct GridPermutation {
    int N = 0;
    std::vector<std::int32_t> fwd;  ///< image index of each source index
    std::vector<std::int32_t> inv;  ///< inverse permutation

    std::int32_t at(int i, int j) const { return fwd[static_cast<std::size_t>(j) * N + i]; }
};

/// Glue data of the mapping torus over A in SL(2,Z) with trace >= 3.
///
/// lambda is the expanding eigenvalue, a and b the eigenvector slopes:
/// A(1,a)^T = lambda (1,a)^T and A(1,b)^T = lambda^{-1} (1,b)^T.
/// The hyperbolicity test is integer-exact: det A == 1, trace >= 3, and
/// trace^2 - 4 not a perfect square (so the slopes are irrational).
class HyperbolicGluing {
  public:
    /// Validates and builds. Throws std::invalid_argument with a reason
    /// (determinant, trace, or rational-eigenvector rejection).
    static HyperbolicGluing from_matrix(const Mat2i& A);

    /// Test-only escape hatch: accepts precomputed eigen-data without
    /// validation, so degenerate/rational slopes can be synthesized.
    static HyperbolicGluing unchecked(const Mat2i& A, double lambda, double a, double b);

    const Mat2i& matrix() const { return A_; }
    double lambda() const { return lambda_; }
    double slope_a() const { return a_; }
    double slope_b() const { return b_; }
    double log_lambda() const { return log_lambda_; }

    /// lambda^t = exp(t log lambda), monotone in t.
    double lambda_pow(double t) const;

    /// sigma(i,j) = A^{-1}(i,j) mod N: the seam identification of the t=1
    /// slice with the t=0 slice. Exact on the grid because A^{-1} is integer
    /// unimodular. Requires N >= 1.
    GridPermutation grid_permutation(int N) const;

    /// Frame volume density: the top frame form equals
    /// (log lambda / (a - b)) dx dy dt in slab coordinates.
    double volume_factor() const { return log_lambda_ / (a_ - b_); }

    bool operator==(const HyperbolicGluing& o) const { return A_ == o.A_; }

  private:
    HyperbolicGluing() = default;
    Mat2i A_;
    double lambda_ = 0, a_ = 0, b_ = 0, log_lambda_ = 0;
};

/// Parse "a,b,c,d" (row-major) into a matrix. Throws on malformed input.
Mat2i parse_matrix_arg(const std::string& s);

}  // namespace hypertorus
