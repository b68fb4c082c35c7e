#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace so21::nonrel::fft {

// Square n x n arrays stored row-major with y as the row index. Forward
// transforms are unnormalized; inverse transforms divide by the number of
// points transformed.

void forward_2d(Eigen::ArrayXcd& data, std::size_t n);
void inverse_2d(Eigen::ArrayXcd& data, std::size_t n);

/// 1D transforms of every row (along x).
void forward_rows(Eigen::ArrayXcd& data, std::size_t n);
void inverse_rows(Eigen::ArrayXcd& data, std::size_t n);

/// 1D transforms of every column (along y).
void forward_cols(Eigen::ArrayXcd& data, std::size_t n);
void inverse_cols(Eigen::ArrayXcd& data, std::size_t n);

}  // namespace so21::nonrel::fft
