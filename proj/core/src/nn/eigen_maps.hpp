#pragma once

#include "pcc/nn/tensor.hpp"

#include <Eigen/Core>

namespace pcc::nn::detail {

using RowMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using VectorMap = Eigen::Map<Eigen::Matrix<Real, Eigen::Dynamic, 1>>;
using ConstVectorMap = Eigen::Map<const Eigen::Matrix<Real, Eigen::Dynamic, 1>>;

inline MatrixMap as_matrix(Tensor& t, std::size_t offset, std::size_t rows, std::size_t cols) {
  return MatrixMap(t.data() + offset, static_cast<Eigen::Index>(rows),
                   static_cast<Eigen::Index>(cols));
}
inline ConstMatrixMap as_matrix(const Tensor& t, std::size_t offset, std::size_t rows,
                                std::size_t cols) {
  return ConstMatrixMap(t.data() + offset, static_cast<Eigen::Index>(rows),
                        static_cast<Eigen::Index>(cols));
}
inline VectorMap as_vector(Tensor& t) {
  return VectorMap(t.data(), static_cast<Eigen::Index>(t.size()));
}
inline ConstVectorMap as_vector(const Tensor& t) {
  return ConstVectorMap(t.data(), static_cast<Eigen::Index>(t.size()));
}

}  // namespace pcc::nn::detail
