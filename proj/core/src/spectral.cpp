#include "hypertorus/spectral.hpp"

#include <fftw3.h>

#include <functional>
#include <map>
#include <mutex>

#include "hypertorus/parallel.hpp"

namespace hypertorus::spectral {

namespace {

// FFTW plan cache. FFTW_ESTIMATE picks the algorithm from the problem shape
// alone (no runtime measurement), which keeps results reproducible;
// FFTW_UNALIGNED lets one plan serve any std::vector buffer via the
// new-array execute interface, which is thread-safe.
class Plans {
  public:
    static Plans& instance() {
        static Plans p;
        return p;
    }

    fftw_plan slice(int N, int sign) {
        std::lock_guard lk(mu_);
        auto key = std::pair{N, sign};
        auto it = slice_plans_.find(key);
        if (it != slice_plans_.end()) return it->second;
        std::vector<cplx> buf(static_cast<std::size_t>(N) * N);
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        fftw_plan plan = fftw_plan_dft_2d(N, N, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        slice_plans_[key] = plan;
        return plan;
    }

    fftw_plan line(int n, int sign) {
        std::lock_guard lk(mu_);
        auto key = std::pair{n, sign};
        auto it = line_plans_.find(key);
        if (it != line_plans_.end()) return it->second;
        std::vector<cplx> buf(static_cast<std::size_t>(n));
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        fftw_plan plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        line_plans_[key] = plan;
        return plan;
    }

  private:
    Plans() = default;
    std::mutex mu_;
    std::map<std::pair<int, int>, fftw_plan> slice_plans_, line_plans_;
};

void execute(fftw_plan plan, cplx* data) {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, p, p);
}

}  // namespace

void warm_plans(int N) {
    (void)Plans::instance().slice(N, FFTW_FORWARD);
    (void)Plans::instance().slice(N, FFTW_BACKWARD);
}

void warm_line(int n) {
    (void)Plans::instance().line(n, FFTW_FORWARD);
    (void)Plans::instance().line(n, FFTW_BACKWARD);
}

void forward_slice(cplx* slice, int N) { execute(Plans::instance().slice(N, FFTW_FORWARD), slice); }
void inverse_slice(cplx* slice, int N) { execute(Plans::instance().slice(N, FFTW_BACKWARD), slice); }
void forward_line(cplx* line, int n) { execute(Plans::instance().line(n, FFTW_FORWARD), line); }
void inverse_line(cplx* line, int n) { execute(Plans::instance().line(n, FFTW_BACKWARD), line); }

void map_slice_modes(cplx* data, const GridShape& shape,
                     const std::function<void(cplx*, int)>& fn) {
    const int N = shape.N;
    const double inv = 1.0 / static_cast<double>(shape.slice_size());
    // Warm the plan cache before entering the parallel region.
    (void)Plans::instance().slice(N, FFTW_FORWARD);
    (void)Plans::instance().slice(N, FFTW_BACKWARD);
    pool::parallel_for(shape.n_slices, [&](int l) {
        cplx* s = data + static_cast<std::size_t>(l) * shape.slice_size();
        forward_slice(s, N);
        fn(s, l);
        inverse_slice(s, N);
        for (std::size_t q = 0; q < shape.slice_size(); ++q) s[q] *= inv;
    });
}

}  // namespace hypertorus::spectral
