// nn/layers.hpp

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

#ifndef TFG_NN_LAYERS_HPP_
#define TFG_NN_LAYERS_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "tfg/nn/param.hpp"

namespace tfg::nn {

// Layers keep a LIFO cache of forward activations: one forward(train=true)
// pushes, one backward pops. A sequence of K generator steps therefore runs
// backward strictly in reverse step order.

// ---------------------------------------------------------------------------
// 2D convolution, square kernel, im2col + GEMM

template <typename S>
class Conv2d {
 public:
  Conv2d(std::string name, int cin, int cout, int k, int stride, int pad, Rng &rng)
      : name_(std::move(name)), cin_(cin), cout_(cout), k_(k), stride_(stride), pad_(pad) {
    w_.name = name_ + "/w";
    b_.name = name_ + "/b";
    w_.resize(cout, Eigen::Index(cin) * k * k);
    b_.resize(cout, 1);
    w_.init_normal(rng, std::sqrt(2.0 / (double(cin) * k * k)));
  }

  int out_dim(int in) const { return (in + 2 * pad_ - k_) / stride_ + 1; }

  FeatureMap<S> forward(const FeatureMap<S> &x, bool train) {
    TFG_CHECK(x.c == cin_, name_, ": expected ", cin_, " channels, got ", x.c);
    const int oh = out_dim(x.h), ow = out_dim(x.w);
    TFG_CHECK(oh > 0 && ow > 0, name_, ": input ", x.h, "x", x.w, " too small");
    Mat<S> patches = im2col(x, oh, ow);
    FeatureMap<S> y(cout_, oh, ow);
    y.v.noalias() = patches * w_.value.transpose();
    y.v.rowwise() += b_.value.col(0).transpose();
    if (train) stack_.push_back(Cache{std::move(patches), x.h, x.w});
    return y;
  }

  FeatureMap<S> backward(const FeatureMap<S> &gy) {
    TFG_CHECK(!stack_.empty(), name_, ": backward without forward");
    Cache cache = std::move(stack_.back());
    stack_.pop_back();
    w_.grad.noalias() += gy.v.transpose() * cache.patches;
    b_.grad.col(0).noalias() += gy.v.colwise().sum().transpose();
    Mat<S> gpatches = gy.v * w_.value;  // pos x (cin*k*k)
    return col2im(gpatches, cache.in_h, cache.in_w, gy.h, gy.w);
  }

  void visit(const ParamVisitor<S> &f) {
    f(w_);
    f(b_);
  }
  void clear_cache() { stack_.clear(); }

 private:
  Mat<S> im2col(const FeatureMap<S> &x, int oh, int ow) const {
    Mat<S> patches = Mat<S>::Zero(Eigen::Index(oh) * ow, Eigen::Index(cin_) * k_ * k_);
    for (int ci = 0; ci < cin_; ++ci) {
      const S *src = x.v.col(ci).data();
      for (int ky = 0; ky < k_; ++ky) {
        for (int kx = 0; kx < k_; ++kx) {
          S *dst = patches.col((Eigen::Index(ci) * k_ + ky) * k_ + kx).data();
          for (int oy = 0; oy < oh; ++oy) {
            const int y = oy * stride_ - pad_ + ky;
            if (y < 0 || y >= x.h) continue;
            for (int ox = 0; ox < ow; ++ox) {
              const int xx = ox * stride_ - pad_ + kx;
              if (xx < 0 || xx >= x.w) continue;
              dst[Eigen::Index(oy) * ow + ox] = src[Eigen::Index(y) * x.w + xx];
            }
          }
        }
      }
    }
    return patches;
  }

  FeatureMap<S> col2im(const Mat<S> &gpatches, int in_h, int in_w, int oh, int ow) const {
    FeatureMap<S> gx(cin_, in_h, in_w);
    for (int ci = 0; ci < cin_; ++ci) {
      S *dst = gx.v.col(ci).data();
      for (int ky = 0; ky < k_; ++ky) {
        for (int kx = 0; kx < k_; ++kx) {
          const S *src = gpatches.col((Eigen::Index(ci) * k_ + ky) * k_ + kx).data();
          for (int oy = 0; oy < oh; ++oy) {
            const int y = oy * stride_ - pad_ + ky;
            if (y < 0 || y >= in_h) continue;
            for (int ox = 0; ox < ow; ++ox) {
              const int xx = ox * stride_ - pad_ + kx;
              if (xx < 0 || xx >= in_w) continue;
              dst[Eigen::Index(y) * in_w + xx] += src[Eigen::Index(oy) * ow + ox];
            }
          }
        }
      }
    }
    return gx;
  }

  struct Cache {
    Mat<S> patches;
    int in_h, in_w;
  };

  std::string name_;
  int cin_, cout_, k_, stride_, pad_;
  Param<S> w_, b_;
  std::vector<Cache> stack_;
};

// ---------------------------------------------------------------------------
// 2D transposed convolution (kernel 4 / stride 2 / pad 1 doubles the grid)

template <typename S>
class ConvTranspose2d {
 public:
  ConvTranspose2d(std::string name, int cin, int cout, int k, int stride, int pad, Rng &rng)
      : name_(std::move(name)), cin_(cin), cout_(cout), k_(k), stride_(stride), pad_(pad) {
    w_.name = name_ + "/w";
    b_.name = name_ + "/b";
    w_.resize(cin, Eigen::Index(cout) * k * k);
    b_.resize(cout, 1);
    w_.init_normal(rng, std::sqrt(2.0 / (double(cin) * k * k / double(stride * stride))));
  }

  int out_dim(int in) const { return (in - 1) * stride_ - 2 * pad_ + k_; }

  FeatureMap<S> forward(const FeatureMap<S> &x, bool train) {
    TFG_CHECK(x.c == cin_, name_, ": expected ", cin_, " channels, got ", x.c);
    const int oh = out_dim(x.h), ow = out_dim(x.w);
    Mat<S> cols(x.v.rows(), w_.value.cols());
    cols.noalias() = x.v * w_.value;  // pos_in x (cout*k*k)
    FeatureMap<S> y(cout_, oh, ow);
    scatter(cols, x.h, x.w, y);
    for (int co = 0; co < cout_; ++co) y.v.col(co).array() += b_.value(co, 0);
    if (train) stack_.push_back(Cache{x.v, x.h, x.w});
    return y;
  }

  FeatureMap<S> backward(const FeatureMap<S> &gy) {
    TFG_CHECK(!stack_.empty(), name_, ": backward without forward");
    Cache cache = std::move(stack_.back());
    stack_.pop_back();
    Mat<S> gcols = gather(gy, cache.in_h, cache.in_w);  // pos_in x (cout*k*k)
    w_.grad.noalias() += cache.input.transpose() * gcols;
    b_.grad.col(0).noalias() += gy.v.colwise().sum().transpose();
    FeatureMap<S> gx(cin_, cache.in_h, cache.in_w);
    gx.v.noalias() = gcols * w_.value.transpose();
    return gx;
  }

  void visit(const ParamVisitor<S> &f) {
    f(w_);
    f(b_);
  }
  void clear_cache() { stack_.clear(); }

 private:
  void scatter(const Mat<S> &cols, int in_h, int in_w, FeatureMap<S> &y) const {
    for (int co = 0; co < cout_; ++co) {
      S *dst = y.v.col(co).data();
      for (int ky = 0; ky < k_; ++ky) {
        for (int kx = 0; kx < k_; ++kx) {
          const S *src = cols.col((Eigen::Index(co) * k_ + ky) * k_ + kx).data();
          for (int iy = 0; iy < in_h; ++iy) {
            const int oy = iy * stride_ - pad_ + ky;
            if (oy < 0 || oy >= y.h) continue;
            for (int ix = 0; ix < in_w; ++ix) {
              const int ox = ix * stride_ - pad_ + kx;
              if (ox < 0 || ox >= y.w) continue;
              dst[Eigen::Index(oy) * y.w + ox] += src[Eigen::Index(iy) * in_w + ix];
            }
          }
        }
      }
    }
  }

  Mat<S> gather(const FeatureMap<S> &gy, int in_h, int in_w) const {
    Mat<S> gcols = Mat<S>::Zero(Eigen::Index(in_h) * in_w, Eigen::Index(cout_) * k_ * k_);
    for (int co = 0; co < cout_; ++co) {
      const S *src = gy.v.col(co).data();
      for (int ky = 0; ky < k_; ++ky) {
        for (int kx = 0; kx < k_; ++kx) {
          S *dst = gcols.col((Eigen::Index(co) * k_ + ky) * k_ + kx).data();
          for (int iy = 0; iy < in_h; ++iy) {
            const int oy = iy * stride_ - pad_ + ky;
            if (oy < 0 || oy >= gy.h) continue;
            for (int ix = 0; ix < in_w; ++ix) {
              const int ox = ix * stride_ - pad_ + kx;
              if (ox < 0 || ox >= gy.w) continue;
              dst[Eigen::Index(iy) * in_w + ix] = src[Eigen::Index(oy) * gy.w + ox];
            }
          }
        }
      }
    }
    return gcols;
  }

  struct Cache {
    Mat<S> input;
    int in_h, in_w;
  };

  std::string name_;
  int cin_, cout_, k_, stride_, pad_;
  Param<S> w_, b_;
  std::vector<Cache> stack_;
};

// ---------------------------------------------------------------------------
// 3D convolution over (t, h, w) volumes

template <typename S>
class Conv3d {
 public:
  Conv3d(std::string name, int cin, int cout, int kt, int k, int st, int s, int pt, int p,
         Rng &rng)
      : name_(std::move(name)),
        cin_(cin),
        cout_(cout),
        kt_(kt),
        k_(k),
        st_(st),
        s_(s),
        pt_(pt),
        p_(p) {
    w_.name = name_ + "/w";
    b_.name = name_ + "/b";
    w_.resize(cout, Eigen::Index(cin) * kt * k * k);
    b_.resize(cout, 1);
    w_.init_normal(rng, std::sqrt(2.0 / (double(cin) * kt * k * k)));
  }

  int out_t(int t) const { return (t + 2 * pt_ - kt_) / st_ + 1; }
  int out_hw(int in) const { return (in + 2 * p_ - k_) / s_ + 1; }

  FeatureVolume<S> forward(const FeatureVolume<S> &x, bool train) {
    TFG_CHECK(x.c == cin_, name_, ": expected ", cin_, " channels, got ", x.c);
    const int ot = out_t(x.t), oh = out_hw(x.h), ow = out_hw(x.w);
    TFG_CHECK(ot > 0 && oh > 0 && ow > 0, name_, ": input volume too small (t=", x.t, ")");
    Mat<S> patches = im2col(x, ot, oh, ow);
    FeatureVolume<S> y(cout_, ot, oh, ow);
    y.v.noalias() = patches * w_.value.transpose();
    y.v.rowwise() += b_.value.col(0).transpose();
    if (train) stack_.push_back(Cache{std::move(patches), x.t, x.h, x.w});
    return y;
  }

  FeatureVolume<S> backward(const FeatureVolume<S> &gy) {
    TFG_CHECK(!stack_.empty(), name_, ": backward without forward");
    Cache cache = std::move(stack_.back());
    stack_.pop_back();
    w_.grad.noalias() += gy.v.transpose() * cache.patches;
    b_.grad.col(0).noalias() += gy.v.colwise().sum().transpose();
    Mat<S> gpatches = gy.v * w_.value;
    return col2im(gpatches, cache.in_t, cache.in_h, cache.in_w, gy.t, gy.h, gy.w);
  }

  void visit(const ParamVisitor<S> &f) {
    f(w_);
    f(b_);
  }
  void clear_cache() { stack_.clear(); }

 private:
  Mat<S> im2col(const FeatureVolume<S> &x, int ot, int oh, int ow) const {
    Mat<S> patches =
        Mat<S>::Zero(Eigen::Index(ot) * oh * ow, Eigen::Index(cin_) * kt_ * k_ * k_);
    for (int ci = 0; ci < cin_; ++ci) {
      const S *src = x.v.col(ci).data();
      for (int kt = 0; kt < kt_; ++kt) {
        for (int ky = 0; ky < k_; ++ky) {
          for (int kx = 0; kx < k_; ++kx) {
            const Eigen::Index col = ((Eigen::Index(ci) * kt_ + kt) * k_ + ky) * k_ + kx;
            S *dst = patches.col(col).data();
            for (int oti = 0; oti < ot; ++oti) {
              const int ti = oti * st_ - pt_ + kt;
              if (ti < 0 || ti >= x.t) continue;
              for (int oy = 0; oy < oh; ++oy) {
                const int y = oy * s_ - p_ + ky;
                if (y < 0 || y >= x.h) continue;
                for (int ox = 0; ox < ow; ++ox) {
                  const int xx = ox * s_ - p_ + kx;
                  if (xx < 0 || xx >= x.w) continue;
                  dst[(Eigen::Index(oti) * oh + oy) * ow + ox] =
                      src[(Eigen::Index(ti) * x.h + y) * x.w + xx];
                }
              }
            }
          }
        }
      }
    }
    return patches;
  }

  FeatureVolume<S> col2im(const Mat<S> &gpatches, int in_t, int in_h, int in_w, int ot, int oh,
                          int ow) const {
    FeatureVolume<S> gx(cin_, in_t, in_h, in_w);
    for (int ci = 0; ci < cin_; ++ci) {
      S *dst = gx.v.col(ci).data();
      for (int kt = 0; kt < kt_; ++kt) {
        for (int ky = 0; ky < k_; ++ky) {
          for (int kx = 0; kx < k_; ++kx) {
            const Eigen::Index col = ((Eigen::Index(ci) * kt_ + kt) * k_ + ky) * k_ + kx;
            const S *src = gpatches.col(col).data();
            for (int oti = 0; oti < ot; ++oti) {
              const int ti = oti * st_ - pt_ + kt;
              if (ti < 0 || ti >= in_t) continue;
              for (int oy = 0; oy < oh; ++oy) {
                const int y = oy * s_ - p_ + ky;
                if (y < 0 || y >= in_h) continue;
                for (int ox = 0; ox < ow; ++ox) {
                  const int xx = ox * s_ - p_ + kx;
                  if (xx < 0 || xx >= in_w) continue;
                  dst[(Eigen::Index(ti) * in_h + y) * in_w + xx] +=
                      src[(Eigen::Index(oti) * oh + oy) * ow + ox];
                }
              }
            }
          }
        }
      }
    }
    return gx;
  }

  struct Cache {
    Mat<S> patches;
    int in_t, in_h, in_w;
  };

  std::string name_;
  int cin_, cout_, kt_, k_, st_, s_, pt_, p_;
  Param<S> w_, b_;
  std::vector<Cache> stack_;
};

// ---------------------------------------------------------------------------
// fully connected on column vectors

template <typename S>
class Linear {
 public:
  Linear(std::string name, int in, int out, Rng &rng) : name_(std::move(name)), in_(in), out_(out) {
    w_.name = name_ + "/w";
    b_.name = name_ + "/b";
    w_.resize(out, in);
    b_.resize(out, 1);
    w_.init_normal(rng, std::sqrt(2.0 / double(in)));
  }

  Vec<S> forward(const Vec<S> &x, bool train) {
    TFG_CHECK(x.size() == in_, name_, ": expected input dim ", in_, ", got ", x.size());
    if (train) stack_.push_back(x);
    return w_.value * x + b_.value.col(0);
  }

  Vec<S> backward(const Vec<S> &gy) {
    TFG_CHECK(!stack_.empty(), name_, ": backward without forward");
    Vec<S> x = std::move(stack_.back());
    stack_.pop_back();
    w_.grad.noalias() += gy * x.transpose();
    b_.grad.col(0) += gy;
    return w_.value.transpose() * gy;
  }

  void visit(const ParamVisitor<S> &f) {
    f(w_);
    f(b_);
  }
  void clear_cache() { stack_.clear(); }

 private:
  std::string name_;
  int in_, out_;
  Param<S> w_, b_;
  std::vector<Vec<S>> stack_;
};

// ---------------------------------------------------------------------------
// parameter-free activations (cache stacks like the layers above)

template <typename S>
class LeakyRelu {
 public:
  explicit LeakyRelu(double slope = 0.2) : slope_(S(slope)) {}

  Mat<S> forward(const Mat<S> &x, bool train) {
    Mat<S> y = x.cwiseMax(S(0)) + slope_ * x.cwiseMin(S(0));
    if (train) stack_.push_back(x);
    return y;
  }
  Mat<S> backward(const Mat<S> &gy) {
    TFG_CHECK(!stack_.empty(), "leaky_relu: backward without forward");
    Mat<S> x = std::move(stack_.back());
    stack_.pop_back();
    return (x.array() > S(0)).select(gy, gy * slope_);
  }
  void clear_cache() { stack_.clear(); }

 private:
  S slope_;
  std::vector<Mat<S>> stack_;
};

template <typename S>
class TanhLayer {
 public:
  Mat<S> forward(const Mat<S> &x, bool train) {
    Mat<S> y = x.array().tanh().matrix();
    if (train) stack_.push_back(y);
    return y;
  }
  Mat<S> backward(const Mat<S> &gy) {
    TFG_CHECK(!stack_.empty(), "tanh: backward without forward");
    Mat<S> y = std::move(stack_.back());
    stack_.pop_back();
    return (gy.array() * (S(1) - y.array().square())).matrix();
  }
  void clear_cache() { stack_.clear(); }

 private:
  std::vector<Mat<S>> stack_;
};

template <typename S>
Mat<S> sigmoid(const Mat<S> &x) {
  return (S(1) / (S(1) + (-x.array()).exp())).matrix();
}

}  // namespace tfg::nn

#endif  // TFG_NN_LAYERS_HPP_
