#pragma once

#include <iosfwd>
#include <string>

#include "hypertorus/frame_form.hpp"
#include "hypertorus/scalar_field.hpp"

namespace hypertorus {

/// Binary field/form files. Little-endian, fixed layout:
///
///   field record:  "HTFIELD1" | int32 N | int32 n_slices | uint8 slab
///                  | uint8 dtype | int64 A[0..3] | samples
///   form file:     "HTFORM01" | uint8 degree | component field records
///
/// dtype is the byte width of one complex sample: 16 = double pairs (the
/// default; required for round-tripping analytic data at solver accuracy),
/// 8 = float pairs for compact interchange. Samples are row-major in the
/// grid's native order (x fastest, then y, then the slice index).

void write_field(const std::string& path, const ScalarField& f, bool wide = true);
ScalarField read_field(const std::string& path);

void write_form(const std::string& path, const FrameForm& w, bool wide = true);
FrameForm read_form(const std::string& path);

void write_field_record(std::ostream& out, const ScalarField& f, bool wide);
ScalarField read_field_record(std::istream& in);

/// Debug dump: one CSV row per sample, columns i, j, slice, re, im.
void write_field_csv(const std::string& path, const ScalarField& f);

}  // namespace hypertorus
