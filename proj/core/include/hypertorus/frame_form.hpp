#pragma once

#include <vector>

#include "hypertorus/scalar_field.hpp"

namespace hypertorus {

/// The three invariant frame fields, in the order their dual covectors appear
/// in component tuples.
enum class FrameVector { X = 0, Y = 1, Z = 2 };

/// Number of frame-basis monomials in each degree: {1, 3, 3, 1}.
int component_count(int degree);

/// Differential form written in the invariant coframe (alpha, beta, theta):
///   degree 0:  f
///   degree 1:  f alpha + g beta + h theta
///   degree 2:  F alpha^beta + G alpha^theta + H beta^theta
///   degree 3:  F alpha^beta^theta
/// Components are scalar fields on the same grid with the same gluing. All
/// structure constants of the calculus live in the free functions below.
class FrameForm {
  public:
    FrameForm(int degree, std::vector<ScalarField> components);

    static FrameForm zero(const HyperbolicGluing& g, GridShape shape, int degree);
    static FrameForm scalar(ScalarField f);
    static FrameForm one_form(ScalarField f, ScalarField g, ScalarField h);
    static FrameForm two_form(ScalarField F, ScalarField G, ScalarField H);
    static FrameForm top_form(ScalarField F);
    /// The basis monomial `which` of the given degree (coefficient one).
    static FrameForm monomial(const HyperbolicGluing& g, GridShape shape, int degree, int which);

    int degree() const { return degree_; }
    int n_components() const { return static_cast<int>(comps_.size()); }
    const ScalarField& comp(int i) const { return comps_.at(static_cast<std::size_t>(i)); }
    ScalarField& comp(int i) { return comps_.at(static_cast<std::size_t>(i)); }

    const HyperbolicGluing& gluing() const { return comps_.front().gluing(); }
    const GridShape& shape() const { return comps_.front().shape(); }
    bool slab() const;
    /// Worst seam defect across components.
    double seam_defect() const;

  private:
    int degree_;
    std::vector<ScalarField> comps_;
};

/// Exterior derivative in the frame basis. Uses the grid's spectral X/Y
/// derivatives and order-`fd_order` finite differences for Z.
FrameForm exterior_d(const FrameForm& w, int fd_order = 8);

/// Wedge product (throws if the degrees sum past 3). Products of component
/// fields are dealiased.
FrameForm wedge(const FrameForm& a, const FrameForm& b);

/// Interior product (contraction) with a frame vector. Degree 0 throws.
FrameForm interior(FrameVector v, const FrameForm& w);

/// Lie derivative along a frame vector via the Cartan formula
/// i_v d + d i_v.
FrameForm lie_derivative(FrameVector v, const FrameForm& w, int fd_order = 8);

/// Pullback along the time-s expanding horocycle flow / time-u contracting
/// one. The coframe mixes: the theta component picks up -s (expanding) or +u
/// (contracting) times the alpha/beta data.
FrameForm pullback_form_flow_x(const FrameForm& w, double s);
FrameForm pullback_form_flow_y(const FrameForm& w, double u);

FrameForm form_add(const FrameForm& a, const FrameForm& b);
FrameForm form_sub(const FrameForm& a, const FrameForm& b);
FrameForm form_scale(const FrameForm& a, cplx c);

/// Max over components of the sup norm.
double form_sup_norm(const FrameForm& w);
/// l2 norm of the stacked component vector: sqrt(sum of component RMS^2).
double form_l2_norm(const FrameForm& w);

}  // namespace hypertorus
