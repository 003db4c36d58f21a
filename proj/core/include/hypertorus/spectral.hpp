#pragma once

#include <complex>
#include <functional>

#include "hypertorus/grid.hpp"

namespace hypertorus {

/// Per-slice 2D FFTs and a full-volume transform, backed by cached plans.
/// Plans are created with a deterministic strategy (no machine timing), so
/// transform results are bit-stable across runs and thread counts.
namespace spectral {

using cplx = std::complex<double>;

/// Creates (and caches) the N x N slice plans up front; call before using
/// forward_slice/inverse_slice from inside a parallel region.
void warm_plans(int N);
/// Same for the length-n line plans.
void warm_line(int n);

/// In-place unnormalized forward DFT of one N x N slice (sign -1 exponent).
void forward_slice(cplx* slice, int N);
/// In-place unnormalized inverse DFT; caller divides by N^2.
void inverse_slice(cplx* slice, int N);

/// In-place unnormalized 1D DFT along a stride-1 line of length n.
void forward_line(cplx* line, int n);
void inverse_line(cplx* line, int n);

/// Applies fn per slice in the spectral domain: data is FFT'd slice by slice,
/// fn(slice_modes, l) mutates the N x N mode array of slice l (bin (mj, mi)
/// at mj*N + mi, frequencies via fft_freq), and the slice is transformed back
/// and normalized. Parallel over slices; deterministic.
void map_slice_modes(cplx* data, const GridShape& shape,
                     const std::function<void(cplx*, int)>& fn);

}  // namespace spectral

}  // namespace hypertorus
