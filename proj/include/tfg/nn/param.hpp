// nn/param.hpp

// Copyright 2026  tfgen authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef TFG_NN_PARAM_HPP_
#define TFG_NN_PARAM_HPP_

#include <functional>
#include <string>

#include "tfg/core/rng.hpp"
#include "tfg/core/tensor.hpp"

namespace tfg::nn {

// One learnable tensor plus its gradient accumulator. Hierarchical names key
// optimizer state and checkpoint entries.
template <typename S>
struct Param {
  std::string name;
  Mat<S> value;
  Mat<S> grad;

  void resize(Eigen::Index rows, Eigen::Index cols) {
    value = Mat<S>::Zero(rows, cols);
    grad = Mat<S>::Zero(rows, cols);
  }
  void zero_grad() { grad.setZero(); }

  void init_normal(Rng &rng, double stddev) {
    for (Eigen::Index j = 0; j < value.cols(); ++j)
      for (Eigen::Index i = 0; i < value.rows(); ++i) value(i, j) = S(rng.normal() * stddev);
  }
};

template <typename S>
using ParamVisitor = std::function<void(Param<S> &)>;

// Gradient flow utilities shared by the trainer and the gradient-check tests.
template <typename S>
void zero_grads(const std::vector<Param<S> *> &params) {
  for (auto *p : params) p->zero_grad();
}

template <typename S>
double grad_norm(const std::vector<Param<S> *> &params) {
  double sq = 0.0;
  for (auto *p : params) sq += double(p->grad.squaredNorm());
  return std::sqrt(sq);
}

template <typename S>
void clip_grad_norm(const std::vector<Param<S> *> &params, double max_norm) {
  const double n = grad_norm(params);
  if (n > max_norm && n > 0.0) {
    const S scale = S(max_norm / n);
    for (auto *p : params) p->grad *= scale;
  }
}

template <typename S>
void scale_grads(const std::vector<Param<S> *> &params, double factor) {
  for (auto *p : params) p->grad *= S(factor);
}

}  // namespace tfg::nn

#endif  // TFG_NN_PARAM_HPP_
