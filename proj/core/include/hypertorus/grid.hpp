#pragma once

#include <cstddef>

namespace hypertorus {

/// Sample layout for fields on the slab [0,1)^2 x [0,1): N x N spatial points
/// per slice, n_slices slices at t_l = l / n_slices. Flat index
/// (l * N + j) * N + i for the sample at (x, y, t) = (i/N, j/N, l/n_slices);
/// i (the x index) is fastest, matching row-major 2D FFTs per slice.
struct GridShape {
    int N = 0;
    int n_slices = 0;

    std::size_t slice_size() const { return static_cast<std::size_t>(N) * N; }
    std::size_t size() const { return slice_size() * n_slices; }
    std::size_t index(int i, int j, int l) const {
        return (static_cast<std::size_t>(l) * N + j) * N + i;
    }
    bool operator==(const GridShape&) const = default;
};

/// Signed frequency of FFT bin m on an N-point grid: m for m < N/2, else m - N.
inline int fft_freq(int m, int N) { return m < (N + 1) / 2 ? m : m - N; }

}  // namespace hypertorus
