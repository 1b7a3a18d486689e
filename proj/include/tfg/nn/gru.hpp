// nn/gru.hpp

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

#ifndef TFG_NN_GRU_HPP_
#define TFG_NN_GRU_HPP_

#include <string>
#include <vector>

#include "tfg/nn/param.hpp"

namespace tfg::nn {

// Gated recurrent transition:
//   z = sig(Wz [x; h] + bz)
//   r = sig(Wr [x; h] + br)
//   c = tanh(Wh [x; r.h] + bh)
//   h' = (1 - z).h + z.c
template <typename S>
class GruCell {
 public:
  GruCell(std::string name, int input_dim, int hidden_dim, Rng &rng)
      : name_(std::move(name)), in_(input_dim), hid_(hidden_dim) {
    auto setup = [&](Param<S> &w, Param<S> &b, const char *tag) {
      w.name = name_ + "/w" + tag;
      b.name = name_ + "/b" + tag;
      w.resize(hid_, in_ + hid_);
      b.resize(hid_, 1);
      w.init_normal(rng, 1.0 / std::sqrt(double(in_ + hid_)));
    };
    setup(wz_, bz_, "z");
    setup(wr_, br_, "r");
    setup(wh_, bh_, "h");
  }

  int hidden_dim() const { return hid_; }
  int input_dim() const { return in_; }

  Vec<S> forward(const Vec<S> &h_prev, const Vec<S> &x, bool train) {
    TFG_CHECK(h_prev.size() == hid_ && x.size() == in_, name_, ": dim mismatch (h=",
              h_prev.size(), ", x=", x.size(), ")");
    Vec<S> u(in_ + hid_);
    u << x, h_prev;
    Vec<S> z = sigmoid_vec(wz_.value * u + bz_.value.col(0));
    Vec<S> r = sigmoid_vec(wr_.value * u + br_.value.col(0));
    Vec<S> ur(in_ + hid_);
    ur << x, r.cwiseProduct(h_prev);
    Vec<S> c = (wh_.value * ur + bh_.value.col(0)).array().tanh().matrix();
    Vec<S> h = (Vec<S>::Ones(hid_) - z).cwiseProduct(h_prev) + z.cwiseProduct(c);
    if (train) stack_.push_back(Cache{x, h_prev, z, r, c, ur});
    return h;
  }

  // returns (grad_x, grad_h_prev)
  std::pair<Vec<S>, Vec<S>> backward(const Vec<S> &gh) {
    TFG_CHECK(!stack_.empty(), name_, ": backward without forward");
    Cache cc = std::move(stack_.back());
    stack_.pop_back();

    Vec<S> gz = gh.cwiseProduct(cc.c - cc.h_prev);
    Vec<S> gc = gh.cwiseProduct(cc.z);
    Vec<S> gh_prev = gh.cwiseProduct(Vec<S>::Ones(hid_) - cc.z);

    // candidate path
    Vec<S> gpc = gc.cwiseProduct((S(1) - cc.c.array().square()).matrix());
    wh_.grad.noalias() += gpc * cc.ur.transpose();
    bh_.grad.col(0) += gpc;
    Vec<S> gur = wh_.value.transpose() * gpc;
    Vec<S> gx = gur.head(in_);
    Vec<S> grh = gur.tail(hid_);
    Vec<S> gr = grh.cwiseProduct(cc.h_prev);
    gh_prev += grh.cwiseProduct(cc.r);

    // gate paths
    Vec<S> u(in_ + hid_);
    u << cc.x, cc.h_prev;
    Vec<S> gpr = gr.cwiseProduct(cc.r.cwiseProduct(Vec<S>::Ones(hid_) - cc.r));
    wr_.grad.noalias() += gpr * u.transpose();
    br_.grad.col(0) += gpr;
    Vec<S> gpz = gz.cwiseProduct(cc.z.cwiseProduct(Vec<S>::Ones(hid_) - cc.z));
    wz_.grad.noalias() += gpz * u.transpose();
    bz_.grad.col(0) += gpz;

    Vec<S> gu = wr_.value.transpose() * gpr + wz_.value.transpose() * gpz;
    gx += gu.head(in_);
    gh_prev += gu.tail(hid_);
    return {gx, gh_prev};
  }

  void visit(const ParamVisitor<S> &f) {
    f(wz_);
    f(bz_);
    f(wr_);
    f(br_);
    f(wh_);
    f(bh_);
  }
  void clear_cache() { stack_.clear(); }

 private:
  static Vec<S> sigmoid_vec(const Vec<S> &x) {
    return (S(1) / (S(1) + (-x.array()).exp())).matrix();
  }

  struct Cache {
    Vec<S> x, h_prev, z, r, c, ur;
  };

  std::string name_;
  int in_, hid_;
  Param<S> wz_, bz_, wr_, br_, wh_, bh_;
  std::vector<Cache> stack_;
};

}  // namespace tfg::nn

#endif  // TFG_NN_GRU_HPP_
