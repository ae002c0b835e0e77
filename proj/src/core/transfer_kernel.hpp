#pragma once

#include <Eigen/Dense>

#include "core/field.hpp"
#include "core/optics.hpp"

namespace ghostphase {

using CMatrix = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// h[out, in] in 1/m, so that out_m = sum_i h[m,i] * in_i * pitch_in.
class TransferKernel {
 public:
  TransferKernel(Grid1D grid_in, Grid1D grid_out, CMatrix h);

  const Grid1D& grid_in() const noexcept { return grid_in_; }
  const Grid1D& grid_out() const noexcept { return grid_out_; }
  const CMatrix& matrix() const noexcept { return h_; }

 private:
  Grid1D grid_in_;
  Grid1D grid_out_;
  CMatrix h_;
};

TransferKernel identity_kernel(const Grid1D& grid);

/// Diagonal kernel aperture_i * exp(i*theta_i) / pitch.
TransferKernel object_kernel(const PhaseObject& obj);

/// Swaps the planes: h^T maps the old output plane back onto the old input plane.
TransferKernel transpose(const TransferKernel& k);

ComplexField apply_kernel(const TransferKernel& k, const ComplexField& f);

/// Cascade k1 then k2: h = h2 * h1 * pitch_mid.
TransferKernel compose(const TransferKernel& k2, const TransferKernel& k1, unsigned workers = 0);

/// a * b computed in fixed 64-row blocks, parallel over blocks. The block
/// partition never depends on the worker count.
CMatrix blocked_product(const CMatrix& a, const CMatrix& b, unsigned workers = 0);

}  // namespace ghostphase
