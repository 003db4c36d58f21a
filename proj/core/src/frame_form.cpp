#include "hypertorus/frame_form.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hypertorus {

int component_count(int degree) {
    switch (degree) {
        case 0: return 1;
        case 1: return 3;
        case 2: return 3;
        case 3: return 1;
        default: throw std::invalid_argument("component_count: degree must be 0..3");
    }
}

FrameForm::FrameForm(int degree, std::vector<ScalarField> components)
    : degree_(degree), comps_(std::move(components)) {
    if (static_cast<int>(comps_.size()) != component_count(degree))
        throw std::invalid_argument("FrameForm: wrong component count for degree " +
                                    std::to_string(degree));
    for (const auto& c : comps_) {
        if (!(c.shape() == comps_.front().shape()) || !(c.gluing() == comps_.front().gluing()))
            throw std::invalid_argument("FrameForm: components live on different grids");
    }
}

FrameForm FrameForm::zero(const HyperbolicGluing& g, GridShape shape, int degree) {
    std::vector<ScalarField> comps;
    const int n = component_count(degree);
    comps.reserve(n);
    for (int i = 0; i < n; ++i)
        comps.emplace_back(g, shape, false, std::vector<cplx>(shape.size(), cplx{0.0, 0.0}));
    return FrameForm(degree, std::move(comps));
}

FrameForm FrameForm::scalar(ScalarField f) { return FrameForm(0, {std::move(f)}); }

FrameForm FrameForm::one_form(ScalarField f, ScalarField g, ScalarField h) {
    return FrameForm(1, {std::move(f), std::move(g), std::move(h)});
}

FrameForm FrameForm::two_form(ScalarField F, ScalarField G, ScalarField H) {
    return FrameForm(2, {std::move(F), std::move(G), std::move(H)});
}

FrameForm FrameForm::top_form(ScalarField F) { return FrameForm(3, {std::move(F)}); }

FrameForm FrameForm::monomial(const HyperbolicGluing& g, GridShape shape, int degree, int which) {
    if (which < 0 || which >= component_count(degree))
        throw std::invalid_argument("FrameForm::monomial: component index out of range");
    FrameForm w = zero(g, shape, degree);
    std::vector<cplx> ones(shape.size(), cplx{1.0, 0.0});
    w.comp(which) = ScalarField(g, shape, false, std::move(ones));
    return w;
}

bool FrameForm::slab() const {
    for (const auto& c : comps_)
        if (c.slab()) return true;
    return false;
}

double FrameForm::seam_defect() const {
    double worst = 0.0;
    for (const auto& c : comps_) worst = std::max(worst, c.seam_defect());
    return worst;
}

namespace {

ScalarField frame_apply(FrameVector v, const ScalarField& f, int fd_order) {
    switch (v) {
        case FrameVector::X: return deriv_x(f);
        case FrameVector::Y: return deriv_y(f);
        case FrameVector::Z: return deriv_z(f, fd_order);
    }
    throw std::invalid_argument("frame_apply: bad vector");
}

}  // namespace

FrameForm exterior_d(const FrameForm& w, int fd_order) {
    switch (w.degree()) {
        case 0: {
            const ScalarField& f = w.comp(0);
            return FrameForm::one_form(deriv_x(f), deriv_y(f), deriv_z(f, fd_order));
        }
        case 1: {
            // d(f a + g b + h th) = (Xg - Yf) a^b + (Xh - Zf - f) a^th
            //                     + (Yh - Zg + g) b^th;
            // the zeroth-order terms come from da = -a^th, db = +b^th.
            const ScalarField& f = w.comp(0);
            const ScalarField& gg = w.comp(1);
            const ScalarField& h = w.comp(2);
            ScalarField ab = sub(deriv_x(gg), deriv_y(f));
            ScalarField at = sub(sub(deriv_x(h), deriv_z(f, fd_order)), f);
            ScalarField bt = add(sub(deriv_y(h), deriv_z(gg, fd_order)), gg);
            return FrameForm::two_form(std::move(ab), std::move(at), std::move(bt));
        }
        case 2: {
            // d(F a^b + G a^th + H b^th) = (ZF - YG + XH) a^b^th; the three
            // basis 2-forms are closed, so only derivative terms survive.
            const ScalarField& F = w.comp(0);
            const ScalarField& G = w.comp(1);
            const ScalarField& H = w.comp(2);
            return FrameForm::top_form(add(sub(deriv_z(F, fd_order), deriv_y(G)), deriv_x(H)));
        }
        case 3:
            // The next degree up is identically zero and has no
            // representation here; callers must not differentiate top forms.
            throw std::invalid_argument("exterior_d: top-degree form (derivative is identically zero)");
        default: throw std::invalid_argument("exterior_d: bad degree");
    }
}

FrameForm wedge(const FrameForm& a, const FrameForm& b) {
    const int da = a.degree(), db = b.degree();
    if (da + db > 3) throw std::invalid_argument("wedge: degrees sum past the top degree");
    const auto& g = a.gluing();
    const auto shape = a.shape();
    if (!(shape == b.shape()) || !(g == b.gluing()))
        throw std::invalid_argument("wedge: operands live on different grids");

    auto mul = [](const ScalarField& u, const ScalarField& v) {
        return pointwise_product(u, v, true);
    };

    if (da == 0) {
        std::vector<ScalarField> comps;
        for (int i = 0; i < b.n_components(); ++i) comps.push_back(mul(a.comp(0), b.comp(i)));
        return FrameForm(db, std::move(comps));
    }
    if (db == 0) {
        std::vector<ScalarField> comps;
        for (int i = 0; i < a.n_components(); ++i) comps.push_back(mul(a.comp(i), b.comp(0)));
        return FrameForm(da, std::move(comps));
    }
    if (da == 1 && db == 1) {
        // (f1 a + g1 b + h1 th) ^ (f2 a + g2 b + h2 th)
        ScalarField ab = sub(mul(a.comp(0), b.comp(1)), mul(a.comp(1), b.comp(0)));
        ScalarField at = sub(mul(a.comp(0), b.comp(2)), mul(a.comp(2), b.comp(0)));
        ScalarField bt = sub(mul(a.comp(1), b.comp(2)), mul(a.comp(2), b.comp(1)));
        return FrameForm::two_form(std::move(ab), std::move(at), std::move(bt));
    }
    if (da == 1 && db == 2) {
        // Only complementary monomials survive: f^(b^th), g^(a^th), h^(a^b),
        // with the sign of the permutation that restores a^b^th.
        ScalarField top = add(sub(mul(a.comp(0), b.comp(2)), mul(a.comp(1), b.comp(1))),
                              mul(a.comp(2), b.comp(0)));
        return FrameForm::top_form(std::move(top));
    }
    if (da == 2 && db == 1) {
        // Even-by-odd degree commutes.
        return wedge(b, a);
    }
    throw std::invalid_argument("wedge: unsupported degree combination");
}

FrameForm interior(FrameVector v, const FrameForm& w) {
    const auto& g = w.gluing();
    const auto shape = w.shape();
    auto zero_field = [&] {
        return ScalarField(g, shape, false, std::vector<cplx>(shape.size(), cplx{0.0, 0.0}));
    };
    switch (w.degree()) {
        case 0: throw std::invalid_argument("interior: degree-0 form has no contraction");
        case 1:
            return FrameForm::scalar(w.comp(static_cast<int>(v)));
        case 2: {
            const ScalarField& F = w.comp(0);  // a^b
            const ScalarField& G = w.comp(1);  // a^th
            const ScalarField& H = w.comp(2);  // b^th
            switch (v) {
                case FrameVector::X: return FrameForm::one_form(zero_field(), F, G);
                case FrameVector::Y: return FrameForm::one_form(scale(F, -1.0), zero_field(), H);
                case FrameVector::Z:
                    return FrameForm::one_form(scale(G, -1.0), scale(H, -1.0), zero_field());
            }
            throw std::invalid_argument("interior: bad vector");
        }
        case 3: {
            const ScalarField& F = w.comp(0);
            switch (v) {
                case FrameVector::X: return FrameForm::two_form(zero_field(), zero_field(), F);
                case FrameVector::Y:
                    return FrameForm::two_form(zero_field(), scale(F, -1.0), zero_field());
                case FrameVector::Z: return FrameForm::two_form(F, zero_field(), zero_field());
            }
            throw std::invalid_argument("interior: bad vector");
        }
        default: throw std::invalid_argument("interior: bad degree");
    }
}

FrameForm lie_derivative(FrameVector v, const FrameForm& w, int fd_order) {
    if (w.degree() == 0) {
        return FrameForm::scalar(frame_apply(v, w.comp(0), fd_order));
    }
    FrameForm d_iv = exterior_d(interior(v, w), fd_order);
    if (w.degree() == 3) return d_iv;  // d of a top form vanishes
    FrameForm iv_d = interior(v, exterior_d(w, fd_order));
    return form_add(iv_d, d_iv);
}

namespace {

// Shared shape of both flow pullbacks: pull every component back along the
// flow, then add `coupling * s` times the pulled-back source component into
// the target component (the coframe shear).
FrameForm flow_pullback(const FrameForm& w, double s, bool expanding) {
    auto pull = [&](const ScalarField& f) {
        return expanding ? pullback_flow_x(f, s) : pullback_flow_y(f, s);
    };
    switch (w.degree()) {
        case 0: return FrameForm::scalar(pull(w.comp(0)));
        case 1: {
            ScalarField f = pull(w.comp(0));
            ScalarField g = pull(w.comp(1));
            ScalarField h = pull(w.comp(2));
            // alpha -> alpha - s theta under the expanding flow;
            // beta  -> beta  + u theta under the contracting one.
            ScalarField h2 = expanding ? axpy(-s, f, h) : axpy(+s, g, h);
            return FrameForm::one_form(std::move(f), std::move(g), std::move(h2));
        }
        case 2: {
            ScalarField F = pull(w.comp(0));
            ScalarField G = pull(w.comp(1));
            ScalarField H = pull(w.comp(2));
            if (expanding) {
                ScalarField H2 = axpy(+s, F, H);  // a^b -> a^b + s b^th
                return FrameForm::two_form(std::move(F), std::move(G), std::move(H2));
            }
            ScalarField G2 = axpy(+s, F, G);  // a^b -> a^b + u a^th
            return FrameForm::two_form(std::move(F), std::move(G2), std::move(H));
        }
        case 3: return FrameForm::top_form(pull(w.comp(0)));
        default: throw std::invalid_argument("flow pullback: bad degree");
    }
}

}  // namespace

FrameForm pullback_form_flow_x(const FrameForm& w, double s) { return flow_pullback(w, s, true); }

FrameForm pullback_form_flow_y(const FrameForm& w, double u) { return flow_pullback(w, u, false); }

namespace {

FrameForm zip(const FrameForm& a, const FrameForm& b, const char* op,
              const std::function<ScalarField(const ScalarField&, const ScalarField&)>& f) {
    if (a.degree() != b.degree()) throw std::invalid_argument(std::string(op) + ": degree mismatch");
    std::vector<ScalarField> comps;
    comps.reserve(a.n_components());
    for (int i = 0; i < a.n_components(); ++i) comps.push_back(f(a.comp(i), b.comp(i)));
    return FrameForm(a.degree(), std::move(comps));
}

}  // namespace

FrameForm form_add(const FrameForm& a, const FrameForm& b) {
    return zip(a, b, "form_add", [](const ScalarField& u, const ScalarField& v) { return add(u, v); });
}

FrameForm form_sub(const FrameForm& a, const FrameForm& b) {
    return zip(a, b, "form_sub", [](const ScalarField& u, const ScalarField& v) { return sub(u, v); });
}

FrameForm form_scale(const FrameForm& a, cplx c) {
    std::vector<ScalarField> comps;
    comps.reserve(a.n_components());
    for (int i = 0; i < a.n_components(); ++i) comps.push_back(scale(a.comp(i), c));
    return FrameForm(a.degree(), std::move(comps));
}

double form_sup_norm(const FrameForm& w) {
    double m = 0.0;
    for (int i = 0; i < w.n_components(); ++i) m = std::max(m, sup_norm(w.comp(i)));
    return m;
}

double form_l2_norm(const FrameForm& w) {
    double acc = 0.0;
    for (int i = 0; i < w.n_components(); ++i) {
        const double v = l2_norm(w.comp(i));
        acc += v * v;
    }
    return std::sqrt(acc);
}

}  // namespace hypertorus
