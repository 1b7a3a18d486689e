// nn/adam.hpp

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

#ifndef TFG_NN_ADAM_HPP_
#define TFG_NN_ADAM_HPP_

#include <map>
#include <string>
#include <vector>

#include "tfg/nn/param.hpp"

namespace tfg::nn {

// Adaptive-moment optimizer. Slot state is keyed by parameter name so it can
// round-trip through checkpoints independent of registration order.
template <typename S>
class Adam {
 public:
  struct Slot {
    Mat<S> m, v;
    int64_t t = 0;
  };

  Adam(double lr, double beta1, double beta2, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(const std::vector<Param<S> *> &params) {
    for (Param<S> *p : params) {
      Slot &s = slots_[p->name];
      if (s.m.size() == 0) {
        s.m = Mat<S>::Zero(p->value.rows(), p->value.cols());
        s.v = Mat<S>::Zero(p->value.rows(), p->value.cols());
      }
      s.t += 1;
      s.m = S(beta1_) * s.m + S(1 - beta1_) * p->grad;
      s.v = (S(beta2_) * s.v.array() + S(1 - beta2_) * p->grad.array().square()).matrix();
      const double bc1 = 1.0 - std::pow(beta1_, double(s.t));
      const double bc2 = 1.0 - std::pow(beta2_, double(s.t));
      const S alpha = S(lr_ / bc1);
      p->value.array() -=
          alpha * s.m.array() / ((s.v.array() / S(bc2)).sqrt() + S(eps_));
    }
  }

  double lr() const { return lr_; }
  std::map<std::string, Slot> &slots() { return slots_; }
  const std::map<std::string, Slot> &slots() const { return slots_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  std::map<std::string, Slot> slots_;
};

}  // namespace tfg::nn

#endif  // TFG_NN_ADAM_HPP_
