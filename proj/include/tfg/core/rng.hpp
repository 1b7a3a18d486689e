// core/rng.hpp

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

#ifndef TFG_CORE_RNG_HPP_
#define TFG_CORE_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "tfg/core/common.hpp"

namespace tfg {

// Deterministic generator with hand-rolled distributions. std::*_distribution
// output differs between standard library implementations; everything here is
// pinned to the bit level so checkpointed runs replay exactly.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0x9e3779b97f4a7c15ULL) { reseed(seed); }

  void reseed(uint64_t seed) {
    // splitmix64 expansion of the seed into xoshiro256++ state
    uint64_t x = seed;
    for (int i = 0; i < 4; ++i) {
      x += 0x9e3779b97f4a7c15ULL;
      uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      s_[i] = z ^ (z >> 31);
    }
    has_gauss_ = false;
    gauss_ = 0.0;
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0, 1)
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n)
  uint64_t uniform_int(uint64_t n) {
    TFG_CHECK(n > 0, "uniform_int over empty range");
    // modulo bias negligible for our n << 2^64, and determinism matters more
    return next_u64() % n;
  }

  // standard normal via Box-Muller (cached second value)
  double normal() {
    if (has_gauss_) {
      has_gauss_ = false;
      return gauss_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    gauss_ = r * std::sin(theta);
    has_gauss_ = true;
    return r * std::cos(theta);
  }

  template <typename T>
  void shuffle(std::vector<T> &v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = size_t(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // state round-trips through checkpoints
  std::vector<uint64_t> state() const {
    std::vector<uint64_t> st(s_, s_ + 4);
    st.push_back(has_gauss_ ? 1 : 0);
    uint64_t bits;
    static_assert(sizeof(bits) == sizeof(gauss_));
    std::memcpy(&bits, &gauss_, sizeof(bits));
    st.push_back(bits);
    return st;
  }

  void set_state(const std::vector<uint64_t> &st) {
    TFG_CHECK(st.size() == 6, "bad rng state size ", st.size());
    for (int i = 0; i < 4; ++i) s_[i] = st[size_t(i)];
    has_gauss_ = st[4] != 0;
    std::memcpy(&gauss_, &st[5], sizeof(gauss_));
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t s_[4] = {};
  bool has_gauss_ = false;
  double gauss_ = 0.0;
};

// Derives a stream seed from a root seed and a role tag, so independent
// consumers (data order, init, crops, ...) never share a stream.
inline uint64_t derive_seed(uint64_t root, const std::string &tag) {
  uint64_t h = 0xcbf29ce484222325ULL ^ root;
  for (char c : tag) {
    h ^= uint64_t(uint8_t(c));
    h *= 0x100000001b3ULL;
  }
  h ^= root >> 7;
  return h;
}

}  // namespace tfg

#endif  // TFG_CORE_RNG_HPP_
