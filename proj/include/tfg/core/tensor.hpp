// core/tensor.hpp

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

#ifndef TFG_CORE_TENSOR_HPP_
#define TFG_CORE_TENSOR_HPP_

#include <Eigen/Dense>
#include <vector>

#include "tfg/core/common.hpp"

namespace tfg {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using Matf = Mat<float>;
using Vecf = Vec<float>;
using Matd = Mat<double>;
using Vecd = Vec<double>;

// Channel-last dense feature map. Storage is (h*w) x c, so each channel is a
// contiguous column; pixel (y, x) of channel ch sits at v(y*w + x, ch).
template <typename S>
struct FeatureMap {
  Mat<S> v;
  int c = 0, h = 0, w = 0;

  FeatureMap() = default;
  FeatureMap(int c_, int h_, int w_) : v(Mat<S>::Zero(h_ * w_, c_)), c(c_), h(h_), w(w_) {}

  static FeatureMap zeros(int c_, int h_, int w_) { return FeatureMap(c_, h_, w_); }

  S &at(int ch, int y, int x) { return v(y * w + x, ch); }
  S at(int ch, int y, int x) const { return v(y * w + x, ch); }

  Eigen::Index pixels() const { return Eigen::Index(h) * w; }
  Eigen::Index size() const { return v.size(); }
  bool same_shape(const FeatureMap &o) const { return c == o.c && h == o.h && w == o.w; }

  template <typename T>
  FeatureMap<T> cast() const {
    FeatureMap<T> r;
    r.v = v.template cast<T>();
    r.c = c;
    r.h = h;
    r.w = w;
    return r;
  }
};

// Spatio-temporal block, (t*h*w) x c with frame-major rows:
// element (ch, ti, y, x) sits at v(((ti*h) + y)*w + x, ch).
template <typename S>
struct FeatureVolume {
  Mat<S> v;
  int c = 0, t = 0, h = 0, w = 0;

  FeatureVolume() = default;
  FeatureVolume(int c_, int t_, int h_, int w_)
      : v(Mat<S>::Zero(Eigen::Index(t_) * h_ * w_, c_)), c(c_), t(t_), h(h_), w(w_) {}

  S &at(int ch, int ti, int y, int x) { return v((Eigen::Index(ti) * h + y) * w + x, ch); }
  S at(int ch, int ti, int y, int x) const { return v((Eigen::Index(ti) * h + y) * w + x, ch); }

  bool same_shape(const FeatureVolume &o) const {
    return c == o.c && t == o.t && h == o.h && w == o.w;
  }
};

// Stacks per-frame maps into a volume (all frames must share one shape).
template <typename S>
FeatureVolume<S> stack_frames(const std::vector<FeatureMap<S>> &frames) {
  TFG_CHECK(!frames.empty(), "stack_frames on empty sequence");
  const auto &f0 = frames.front();
  FeatureVolume<S> out(f0.c, int(frames.size()), f0.h, f0.w);
  for (size_t i = 0; i < frames.size(); ++i) {
    TFG_CHECK(frames[i].same_shape(f0), "frame shape mismatch at ", i);
    out.v.middleRows(Eigen::Index(i) * f0.h * f0.w, f0.h * f0.w) = frames[i].v;
  }
  return out;
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived> &m) {
  return m.allFinite();
}

// channel concatenation / split (column blocks share the pixel grid)
template <typename S>
FeatureMap<S> concat_channels(const FeatureMap<S> &a, const FeatureMap<S> &b) {
  TFG_CHECK(a.h == b.h && a.w == b.w, "concat_channels: grid mismatch ", a.h, "x", a.w, " vs ",
            b.h, "x", b.w);
  FeatureMap<S> out(a.c + b.c, a.h, a.w);
  out.v.leftCols(a.c) = a.v;
  out.v.rightCols(b.c) = b.v;
  return out;
}

template <typename S>
std::pair<FeatureMap<S>, FeatureMap<S>> split_channels(const FeatureMap<S> &x, int c_first) {
  TFG_CHECK(c_first > 0 && c_first < x.c, "split_channels: bad split ", c_first, " of ", x.c);
  FeatureMap<S> a(c_first, x.h, x.w), b(x.c - c_first, x.h, x.w);
  a.v = x.v.leftCols(c_first);
  b.v = x.v.rightCols(x.c - c_first);
  return {std::move(a), std::move(b)};
}

// flatten keeps channel-major order (channels are contiguous column blocks)
template <typename S>
Vec<S> flatten_map(const FeatureMap<S> &x) {
  return Eigen::Map<const Vec<S>>(x.v.data(), x.v.size());
}

template <typename S>
FeatureMap<S> unflatten_map(const Vec<S> &v, int c, int h, int w) {
  TFG_CHECK(v.size() == Eigen::Index(c) * h * w, "unflatten size mismatch");
  FeatureMap<S> out(c, h, w);
  out.v = Eigen::Map<const Mat<S>>(v.data(), Eigen::Index(h) * w, c);
  return out;
}

template <typename S>
Vec<S> flatten_volume(const FeatureVolume<S> &x) {
  return Eigen::Map<const Vec<S>>(x.v.data(), x.v.size());
}

template <typename S>
FeatureVolume<S> unflatten_volume(const Vec<S> &v, int c, int t, int h, int w) {
  TFG_CHECK(v.size() == Eigen::Index(c) * t * h * w, "unflatten size mismatch");
  FeatureVolume<S> out(c, t, h, w);
  out.v = Eigen::Map<const Mat<S>>(v.data(), Eigen::Index(t) * h * w, c);
  return out;
}

}  // namespace tfg

#endif  // TFG_CORE_TENSOR_HPP_
