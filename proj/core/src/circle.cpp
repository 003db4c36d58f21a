#include "hypertorus/circle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypertorus/parallel.hpp"

namespace hypertorus {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
}  // namespace

CircleFunction CircleFunction::one() { return CircleFunction({{0, 1.0}}); }

CircleFunction CircleFunction::harmonic(int m) { return CircleFunction({{m, 1.0}}); }

CircleFunction CircleFunction::cosine(int m) {
    return CircleFunction({{m, 0.5}, {-m, 0.5}});
}

CircleFunction CircleFunction::sine(int m) {
    return CircleFunction({{m, -0.5 * kI}, {-m, 0.5 * kI}});
}

cplx CircleFunction::eval(double t) const {
    cplx acc = 0.0;
    for (const auto& [m, c] : modes_) acc += c * std::polar(1.0, kTwoPi * m * t);
    return acc;
}

CircleFunction CircleFunction::derivative() const {
    std::vector<std::pair<int, cplx>> out;
    out.reserve(modes_.size());
    for (const auto& [m, c] : modes_)
        if (m != 0) out.emplace_back(m, kTwoPi * kI * static_cast<double>(m) * c);
    return CircleFunction(std::move(out));
}

cplx CircleFunction::mean() const {
    cplx acc = 0.0;
    for (const auto& [m, c] : modes_)
        if (m == 0) acc += c;
    return acc;
}

CircleFunction& CircleFunction::add_mode(int m, cplx c) {
    for (auto& [mm, cc] : modes_) {
        if (mm == m) {
            cc += c;
            return *this;
        }
    }
    modes_.emplace_back(m, c);
    return *this;
}

ScalarField pullback_circle(const HyperbolicGluing& g, GridShape shape,
                            const CircleFunction& psi) {
    std::vector<cplx> data(shape.size());
    const std::size_t ss = shape.slice_size();
    pool::parallel_for(shape.n_slices, [&](int l) {
        const cplx v = psi.eval(static_cast<double>(l) / shape.n_slices);
        cplx* dst = data.data() + static_cast<std::size_t>(l) * ss;
        std::fill(dst, dst + ss, v);
    });
    return ScalarField(g, shape, false, std::move(data));
}

}  // namespace hypertorus
