#pragma once

#include <cmath>

#include "hypertorus/frame_form.hpp"
#include "hypertorus/gluing.hpp"
#include "hypertorus/scalar_field.hpp"
#include "hypertorus/synth.hpp"

namespace hypertorus::testutil {

inline HyperbolicGluing cat_map() { return HyperbolicGluing::from_matrix(Mat2i{{2, 1, 1, 1}}); }

inline double rel_l2(const ScalarField& got, const ScalarField& want) {
    return l2_norm(sub(got, want)) / std::max(l2_norm(want), 1e-300);
}

inline double rel_l2(const FrameForm& got, const FrameForm& want) {
    return form_l2_norm(form_sub(got, want)) / std::max(form_l2_norm(want), 1e-300);
}

}  // namespace hypertorus::testutil
