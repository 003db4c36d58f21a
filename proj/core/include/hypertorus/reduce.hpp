#pragma once

#include <algorithm>
#include <complex>
#include <span>

namespace hypertorus {

/// Fixed-shape pairwise reductions. The combination tree depends only on the
/// element count, never on thread count or chunk scheduling, so sums are
/// bit-reproducible and carry the usual O(log n) pairwise error bound.

namespace detail {
template <class T>
T pairwise_sum_impl(std::span<const T> v) {
    if (v.size() <= 8) {
        T acc{};
        for (const auto& x : v) acc += x;
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum_impl(v.subspan(0, half)) + pairwise_sum_impl(v.subspan(half));
}
}  // namespace detail

inline std::complex<double> pairwise_sum(std::span<const std::complex<double>> v) {
    return detail::pairwise_sum_impl(v);
}
inline double pairwise_sum(std::span<const double> v) { return detail::pairwise_sum_impl(v); }

namespace detail {
inline double pairwise_sum_sq_impl(std::span<const std::complex<double>> v) {
    if (v.size() <= 8) {
        double acc = 0;
        for (const auto& x : v) acc += x.real() * x.real() + x.imag() * x.imag();
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum_sq_impl(v.subspan(0, half)) + pairwise_sum_sq_impl(v.subspan(half));
}
}  // namespace detail

/// Pairwise sum of |v_i|^2.
inline double pairwise_sum_sq(std::span<const std::complex<double>> v) {
    return detail::pairwise_sum_sq_impl(v);
}

/// Max of |v_i| (order-independent).
inline double sup_abs(std::span<const std::complex<double>> v) {
    double m = 0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace hypertorus
