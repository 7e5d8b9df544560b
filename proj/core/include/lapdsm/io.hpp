#pragma once

#include <iosfwd>
#include <string>

#include "lapdsm/aperture.hpp"
#include "lapdsm/dsm.hpp"
#include "lapdsm/scene.hpp"

namespace lapdsm::io {

// "incidence_index,theta_radians,re,im" header, one row per (incidence,
// receiver) in receiver order, numbers with 17 significant digits.
void write_far_field_csv(std::ostream& out, const FarFieldData& data);
void save_far_field_csv(const std::string& path, const FarFieldData& data);

// Inverse of write_far_field_csv. Angles must match the aperture's receivers
// to 1e-9; throws ValidationError otherwise.
FarFieldData read_far_field_csv(std::istream& in, const ApertureSet& aperture);
FarFieldData load_far_field_csv(const std::string& path, const ApertureSet& aperture);

// "x,y,value" rows in grid order.
void write_index_csv(std::ostream& out, const IndexField& field);
// P2 raster, row 0 at the top, pixel = round(255 * value / max).
void write_pgm(std::ostream& out, const IndexField& field);

void save_index(const std::string& prefix, const IndexField& field);

void save_text(const std::string& path, const std::string& text);

std::string format_number(double v);

}  // namespace lapdsm::io
