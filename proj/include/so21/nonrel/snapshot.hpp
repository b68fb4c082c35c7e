#pragma once

#include <filesystem>

#include "so21/nonrel/field.hpp"

namespace so21::nonrel {

/// Columns x, y, re_psi1, im_psi1, re_psi2, im_psi2; scalar fields write
/// zeros in the psi2 columns.
void write_csv(const WaveField& field, const std::filesystem::path& path);

/// `<stem>.bin`: little-endian float64 (re, im) pairs, component-major, each
/// component row-major in y. `<stem>.json`: N, L, components, time,
/// gauge_frame.
void write_raw(const WaveField& field, const std::filesystem::path& stem);

/// Inverse of write_raw.
WaveField read_raw(const std::filesystem::path& stem);

}  // namespace so21::nonrel
