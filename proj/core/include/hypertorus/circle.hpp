#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "hypertorus/scalar_field.hpp"

namespace hypertorus {

/// Trigonometric polynomial on the base circle (the t direction of the
/// bundle), psi(t) = sum_m c_m e^{2 pi i m t}. Functions of t alone descend to
/// the quotient automatically, since the gluing acts only on the fibers.
class CircleFunction {
  public:
    CircleFunction() = default;
    explicit CircleFunction(std::vector<std::pair<int, cplx>> modes) : modes_(std::move(modes)) {}

    static CircleFunction one();
    static CircleFunction harmonic(int m);  // e^{2 pi i m t}
    static CircleFunction cosine(int m);    // cos(2 pi m t)
    static CircleFunction sine(int m);      // sin(2 pi m t)

    const std::vector<std::pair<int, cplx>>& modes() const { return modes_; }

    cplx eval(double t) const;
    /// psi'(t) (another trigonometric polynomial).
    CircleFunction derivative() const;
    /// c_0, the circle average.
    cplx mean() const;

    CircleFunction& add_mode(int m, cplx c);

  private:
    std::vector<std::pair<int, cplx>> modes_;
};

/// Pulls psi back through the bundle projection: the field (x, y, t) -> psi(t),
/// constant on every fiber. Always a legitimate quotient field.
ScalarField pullback_circle(const HyperbolicGluing& g, GridShape shape, const CircleFunction& psi);

}  // namespace hypertorus
