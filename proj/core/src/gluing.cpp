#include "hypertorus/gluing.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace hypertorus {

std::string Mat2i::str() const {
    std::ostringstream os;
    os << "[[" << m[0] << "," << m[1] << "],[" << m[2] << "," << m[3] << "]]";
    return os.str();
}

namespace {

bool is_perfect_square(std::int64_t v) {
    if (v < 0) return false;
    auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
    for (std::int64_t c = r - 2; c <= r + 2; ++c)
        if (c >= 0 && c * c == v) return true;
    return false;
}

std::int64_t mod_n(std::int64_t v, std::int64_t n) {
    std::int64_t r = v % n;
    return r < 0 ? r + n : r;
}

}  // namespace

HyperbolicGluing HyperbolicGluing::from_matrix(const Mat2i& A) {
    if (A.det() != 1)
        throw std::invalid_argument("gluing matrix must have determinant 1, got det(" +
                                    A.str() + ") = " + std::to_string(A.det()));
    const std::int64_t tr = A.trace();
    if (tr < 3)
        throw std::invalid_argument("gluing matrix must have trace >= 3, got trace(" +
                                    A.str() + ") = " + std::to_string(tr));
    const std::int64_t disc = tr * tr - 4;
    if (is_perfect_square(disc))
        throw std::invalid_argument("trace^2 - 4 = " + std::to_string(disc) +
                                    " is a perfect square; eigenvector slopes would be rational");

    HyperbolicGluing g;
    g.A_ = A;
    const double root = std::sqrt(static_cast<double>(disc));
    g.lambda_ = (static_cast<double>(tr) + root) / 2.0;
    g.log_lambda_ = std::log(g.lambda_);
    // Slopes from the eigenvector equations. With det = 1 and trace >= 3 both
    // off-diagonal entries are nonzero (otherwise the diagonal would multiply
    // to 1 in integers, forcing trace = +-2), but prefer the better-conditioned
    // row anyway.
    const double lam = g.lambda_, lam_inv = 1.0 / g.lambda_;
    if (A.m[1] != 0) {
        g.a_ = (lam - static_cast<double>(A.m[0])) / static_cast<double>(A.m[1]);
        g.b_ = (lam_inv - static_cast<double>(A.m[0])) / static_cast<double>(A.m[1]);
    } else {
        g.a_ = static_cast<double>(A.m[2]) / (lam - static_cast<double>(A.m[3]));
        g.b_ = static_cast<double>(A.m[2]) / (lam_inv - static_cast<double>(A.m[3]));
    }
    return g;
}

HyperbolicGluing HyperbolicGluing::unchecked(const Mat2i& A, double lambda, double a, double b) {
    HyperbolicGluing g;
    g.A_ = A;
    g.lambda_ = lambda;
    g.a_ = a;
    g.b_ = b;
    g.log_lambda_ = std::log(lambda);
    return g;
}

double HyperbolicGluing::lambda_pow(double t) const { return std::exp(t * log_lambda_); }

GridPermutation HyperbolicGluing::grid_permutation(int N) const {
    if (N < 1) throw std::invalid_argument("grid_permutation requires N >= 1");
    const Mat2i Ainv = A_.inverse_unimodular();
    GridPermutation p;
    p.N = N;
    p.fwd.resize(static_cast<std::size_t>(N) * N);
    p.inv.resize(static_cast<std::size_t>(N) * N);
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < N; ++i) {
            const auto im = Ainv.apply(i, j);
            const auto ii = mod_n(im[0], N);
            const auto jj = mod_n(im[1], N);
            const auto src = static_cast<std::size_t>(j) * N + i;
            const auto dst = static_cast<std::size_t>(jj) * N + ii;
            p.fwd[src] = static_cast<std::int32_t>(dst);
            p.inv[dst] = static_cast<std::int32_t>(src);
        }
    }
    return p;
}

Mat2i parse_matrix_arg(const std::string& s) {
    Mat2i A;
    std::istringstream is(s);
    for (int k = 0; k < 4; ++k) {
        std::string tok;
        if (!std::getline(is, tok, ',') || tok.empty())
            throw std::invalid_argument("matrix argument must be 'a,b,c,d', got '" + s + "'");
        std::size_t pos = 0;
        A.m[k] = std::stoll(tok, &pos);
        if (pos != tok.size())
            throw std::invalid_argument("bad matrix entry '" + tok + "' in '" + s + "'");
    }
    std::string rest;
    if (std::getline(is, rest) && !rest.empty())
        throw std::invalid_argument("matrix argument must have exactly 4 entries: '" + s + "'");
    return A;
}

}  // namespace hypertorus
