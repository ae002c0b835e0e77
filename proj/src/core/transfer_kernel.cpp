#include "core/transfer_kernel.hpp"

#include <sstream>

#include "core/error.hpp"
#include "core/parallel.hpp"

namespace ghostphase {

TransferKernel::TransferKernel(Grid1D grid_in, Grid1D grid_out, CMatrix h)
    : grid_in_(grid_in), grid_out_(grid_out), h_(std::move(h)) {
  if (static_cast<std::size_t>(h_.rows()) != grid_out_.size() ||
      static_cast<std::size_t>(h_.cols()) != grid_in_.size()) {
    std::ostringstream os;
    os << "kernel matrix is " << h_.rows() << "x" << h_.cols() << " but grids need " << grid_out_.size() << "x"
       << grid_in_.size();
    throw_config(os.str());
  }
}

TransferKernel identity_kernel(const Grid1D& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  CMatrix h = CMatrix::Identity(n, n) / grid.pitch();
  return TransferKernel(grid, grid, std::move(h));
}

TransferKernel object_kernel(const PhaseObject& obj) {
  const auto n = static_cast<Eigen::Index>(obj.grid.size());
  CMatrix h = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = obj.reflectance(static_cast<std::size_t>(i)) / obj.grid.pitch();
  return TransferKernel(obj.grid, obj.grid, std::move(h));
}

TransferKernel transpose(const TransferKernel& k) {
  return TransferKernel(k.grid_out(), k.grid_in(), k.matrix().transpose());
}

ComplexField apply_kernel(const TransferKernel& k, const ComplexField& f) {
  if (!(f.grid() == k.grid_in())) throw_config("apply_kernel: field grid differs from the kernel input plane");
  Eigen::Map<const Eigen::VectorXcd> in(f.amp().data(), static_cast<Eigen::Index>(f.size()));
  std::vector<cdouble> out(k.grid_out().size());
  Eigen::Map<Eigen::VectorXcd> out_map(out.data(), static_cast<Eigen::Index>(out.size()));
  out_map.noalias() = k.matrix() * in;
  out_map *= k.grid_in().pitch();
  return ComplexField(k.grid_out(), std::move(out));
}

CMatrix blocked_product(const CMatrix& a, const CMatrix& b, unsigned workers) {
  if (a.cols() != b.rows()) throw_config("blocked_product: inner dimensions differ");
  constexpr Eigen::Index block = 64;
  CMatrix c(a.rows(), b.cols());
  const auto blocks = static_cast<std::size_t>((a.rows() + block - 1) / block);
  parallel_for(blocks, workers, [&](std::size_t bi) {
    const Eigen::Index r0 = static_cast<Eigen::Index>(bi) * block;
    const Eigen::Index h = std::min(block, a.rows() - r0);
    c.middleRows(r0, h).noalias() = a.middleRows(r0, h) * b;
  });
  return c;
}

TransferKernel compose(const TransferKernel& k2, const TransferKernel& k1, unsigned workers) {
  if (!(k1.grid_out() == k2.grid_in())) throw_config("compose: output plane of the first kernel is not the input plane of the second");
  CMatrix h = blocked_product(k2.matrix(), k1.matrix(), workers);
  h *= k1.grid_out().pitch();
  return TransferKernel(k1.grid_in(), k2.grid_out(), std::move(h));
}

}  // namespace ghostphase
