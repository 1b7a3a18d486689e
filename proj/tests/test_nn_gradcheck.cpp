// tests/test_nn_gradcheck.cpp

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

#include "doctest.h"
#include "oracles/gradcheck.hpp"
#include "tfg/nn/adam.hpp"
#include "tfg/loss/losses.hpp"
#include "tfg/model/discriminators.hpp"
#include "tfg/model/generator.hpp"

using namespace tfg;
using namespace tfg::model;
using tfg::testing::check_data_grads;
using tfg::testing::check_param_grads;

namespace {

FeatureMap<double> random_map(int c, int h, int w, Rng &rng, double scale = 0.5) {
  FeatureMap<double> m(c, h, w);
  for (Eigen::Index i = 0; i < m.v.size(); ++i) m.v.data()[i] = rng.uniform(-scale, scale);
  return m;
}

FeatureVolume<double> random_volume(int c, int t, int h, int w, Rng &rng, double scale = 0.5) {
  FeatureVolume<double> v(c, t, h, w);
  for (Eigen::Index i = 0; i < v.v.size(); ++i) v.v.data()[i] = rng.uniform(-scale, scale);
  return v;
}

template <typename Module>
std::vector<nn::Param<double> *> params_of(Module &m) {
  std::vector<nn::Param<double> *> out;
  m.visit([&](nn::Param<double> &p) { out.push_back(&p); });
  return out;
}

void zero_all(const std::vector<nn::Param<double> *> &ps) {
  for (auto *p : ps) p->zero_grad();
}

}  // namespace

TEST_CASE("gradcheck: conv2d parameters and input") {
  Rng rng(101);
  nn::Conv2d<double> conv("c", 3, 5, 4, 2, 1, rng);
  FeatureMap<double> x = random_map(3, 8, 8, rng);
  FeatureMap<double> probe = random_map(5, 4, 4, rng, 1.0);

  auto loss = [&]() {
    nn::Conv2d<double> &cc = conv;
    return (cc.forward(x, false).v.array() * probe.v.array()).sum();
  };
  auto ps = params_of(conv);
  zero_all(ps);
  conv.forward(x, true);
  FeatureMap<double> gx = conv.backward(probe);
  auto res = check_param_grads(ps, loss, rng, 12);
  CHECK(res.pass_fraction() == 1.0);
  auto resx = check_data_grads(x.v, gx.v, loss, rng, 20);
  CHECK(resx.pass_fraction() == 1.0);
}

TEST_CASE("gradcheck: transposed conv parameters and input") {
  Rng rng(102);
  nn::ConvTranspose2d<double> dc("d", 4, 3, 4, 2, 1, rng);
  FeatureMap<double> x = random_map(4, 4, 4, rng);
  FeatureMap<double> probe = random_map(3, 8, 8, rng, 1.0);

  auto loss = [&]() { return (dc.forward(x, false).v.array() * probe.v.array()).sum(); };
  auto ps = params_of(dc);
  zero_all(ps);
  dc.forward(x, true);
  FeatureMap<double> gx = dc.backward(probe);
  CHECK(check_param_grads(ps, loss, rng, 12).pass_fraction() == 1.0);
  CHECK(check_data_grads(x.v, gx.v, loss, rng, 20).pass_fraction() == 1.0);
}

TEST_CASE("gradcheck: conv3d parameters and input") {
  Rng rng(103);
  nn::Conv3d<double> conv("c3", 2, 4, 3, 4, 1, 2, 1, 1, rng);
  FeatureVolume<double> x = random_volume(2, 4, 8, 8, rng);
  auto shape = conv.forward(x, false);
  FeatureVolume<double> probe = random_volume(shape.c, shape.t, shape.h, shape.w, rng, 1.0);

  auto loss = [&]() { return (conv.forward(x, false).v.array() * probe.v.array()).sum(); };
  auto ps = params_of(conv);
  zero_all(ps);
  conv.forward(x, true);
  FeatureVolume<double> gx = conv.backward(probe);
  CHECK(check_param_grads(ps, loss, rng, 12).pass_fraction() == 1.0);
  CHECK(check_data_grads(x.v, gx.v, loss, rng, 20).pass_fraction() == 1.0);
}

TEST_CASE("gradcheck: gru cell through a three-step chain") {
  Rng rng(104);
  const int in = 5, hid = 8;
  nn::GruCell<double> gru("g", in, hid, rng);
  std::vector<Vec<double>> xs;
  for (int t = 0; t < 3; ++t) {
    Vec<double> x(in);
    for (int i = 0; i < in; ++i) x(i) = rng.uniform(-1, 1);
    xs.push_back(x);
  }
  Vec<double> probe(hid);
  for (int i = 0; i < hid; ++i) probe(i) = rng.uniform(-1, 1);

  auto loss = [&]() {
    Vec<double> h = Vec<double>::Zero(hid);
    for (const auto &x : xs) h = gru.forward(h, x, false);
    return probe.dot(h);
  };
  auto ps = params_of(gru);
  zero_all(ps);
  Vec<double> h = Vec<double>::Zero(hid);
  for (const auto &x : xs) h = gru.forward(h, x, true);
  Vec<double> gh = probe;
  for (int t = 2; t >= 0; --t) {
    auto [gx, ghp] = gru.backward(gh);
    gh = ghp;
  }
  CHECK(check_param_grads(ps, loss, rng, 12).pass_fraction() == 1.0);
}

TEST_CASE("gradcheck: gru zero-state bias path is finite and deterministic") {
  Rng rng(105);
  nn::GruCell<double> gru("g", 4, 6, rng);
  const Vec<double> h0 = Vec<double>::Zero(6);
  const Vec<double> x0 = Vec<double>::Zero(4);
  const Vec<double> h1 = gru.forward(h0, x0, false);
  const Vec<double> h2 = gru.forward(h0, x0, false);
  CHECK(h1.allFinite());
  CHECK((h1 - h2).norm() == 0.0);
}

TEST_CASE("gradcheck: audio encoder") {
  Rng rng(106);
  const ModelConfig cfg = ModelConfig::toy();
  AudioEncoder<double> enc(cfg, rng);
  Mat<double> window(cfg.mfcc_rows, cfg.mfcc_cols);
  for (Eigen::Index i = 0; i < window.size(); ++i) window.data()[i] = rng.uniform(-1, 1);
  Vec<double> probe(cfg.z_audio_dim);
  for (int i = 0; i < cfg.z_audio_dim; ++i) probe(i) = rng.uniform(-1, 1);

  auto loss = [&]() { return probe.dot(enc.forward(window, false)); };
  auto ps = params_of(enc);
  zero_all(ps);
  enc.forward(window, true);
  Mat<double> gw = enc.backward(probe);
  CHECK(check_param_grads(ps, loss, rng, 10).pass_fraction() >= 0.95);
  CHECK(check_data_grads(window, gw, loss, rng, 15).pass_fraction() >= 0.95);
}

TEST_CASE("gradcheck: image encoder with skip gradients") {
  Rng rng(107);
  const ModelConfig cfg = ModelConfig::toy();
  ImageEncoder<double> enc(cfg, rng);
  FeatureMap<double> img = random_map(3, cfg.image_size, cfg.image_size, rng);

  Vec<double> probe_z(cfg.z_image_dim);
  for (int i = 0; i < cfg.z_image_dim; ++i) probe_z(i) = rng.uniform(-1, 1);
  auto probe_skips = enc.zero_skips();
  for (auto &s : probe_skips)
    for (Eigen::Index i = 0; i < s.v.size(); ++i) s.v.data()[i] = rng.uniform(-0.3, 0.3);

  auto loss = [&]() {
    auto out = enc.forward(img, false);
    double l = probe_z.dot(out.z);
    for (size_t i = 0; i < out.skips.size(); ++i)
      l += (out.skips[i].v.array() * probe_skips[i].v.array()).sum();
    return l;
  };
  auto ps = params_of(enc);
  zero_all(ps);
  enc.forward(img, true);
  FeatureMap<double> gimg = enc.backward(probe_z, &probe_skips);
  CHECK(check_param_grads(ps, loss, rng, 10).pass_fraction() >= 0.95);
  CHECK(check_data_grads(img.v, gimg.v, loss, rng, 15).pass_fraction() >= 0.95);
}

TEST_CASE("gradcheck: frame decoder") {
  Rng rng(108);
  const ModelConfig cfg = ModelConfig::toy();
  ImageEncoder<double> enc(cfg, rng);
  FrameDecoder<double> dec(cfg, rng);
  FeatureMap<double> img = random_map(3, cfg.image_size, cfg.image_size, rng);
  auto encoded = enc.forward(img, false);

  Vec<double> dec_in(cfg.hidden_dim);
  for (int i = 0; i < cfg.hidden_dim; ++i) dec_in(i) = rng.uniform(-1, 1);
  FeatureMap<double> probe = random_map(3, cfg.image_size, cfg.image_size, rng, 1.0);

  auto loss = [&]() {
    return (dec.forward(dec_in, encoded.skips, false).v.array() * probe.v.array()).sum();
  };
  auto ps = params_of(dec);
  zero_all(ps);
  dec.forward(dec_in, encoded.skips, true);
  auto grads = dec.backward(probe);
  CHECK(check_param_grads(ps, loss, rng, 10).pass_fraction() >= 0.95);
  Mat<double> din_mat = dec_in;
  Mat<double> gin_mat = grads.dec_in;
  CHECK(check_data_grads(din_mat, gin_mat, [&]() {
          Vec<double> v = din_mat;
          return (dec.forward(v, encoded.skips, false).v.array() * probe.v.array()).sum();
        },
        rng, 12).pass_fraction() >= 0.95);
}

TEST_CASE("gradcheck: full generator, frame-to-frame and recurrent schemes") {
  for (const auto scheme : {GenerationScheme::kFrameToFrame, GenerationScheme::kRecurrent}) {
    Rng rng(109);
    const ModelConfig cfg = ModelConfig::toy();
    Generator<double> gen(cfg, scheme, 42);
    const int K = 3;
    FeatureMap<double> identity = random_map(3, cfg.image_size, cfg.image_size, rng);
    std::vector<Mat<double>> windows;
    for (int t = 0; t < K; ++t) {
      Mat<double> w(cfg.mfcc_rows, cfg.mfcc_cols);
      for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-1, 1);
      windows.push_back(w);
    }
    std::vector<FeatureMap<double>> probes;
    for (int t = 0; t < K; ++t)
      probes.push_back(random_map(3, cfg.image_size, cfg.image_size, rng, 1.0));

    auto loss = [&]() {
      const auto frames = gen.generate(identity, windows, false);
      double l = 0;
      for (int t = 0; t < K; ++t) l += (frames[size_t(t)].v.array() * probes[size_t(t)].v.array()).sum();
      return l;
    };
    auto ps = gen.params();
    zero_all(ps);
    gen.generate(identity, windows, true);
    gen.backward(probes);
    auto res = check_param_grads(ps, loss, rng, 8);
    INFO("scheme ", to_string(scheme), " worst rel err ", res.worst_rel);
    CHECK(res.pass_fraction() >= 0.95);
  }
}

TEST_CASE("gradcheck: image discriminator through the GAN losses") {
  Rng rng(110);
  const ModelConfig cfg = ModelConfig::toy();
  DiscImage<double> disc(cfg, rng);
  FeatureMap<double> real = random_map(3, cfg.image_size, cfg.image_size, rng);
  FeatureMap<double> fake = random_map(3, cfg.image_size, cfg.image_size, rng);

  auto loss = [&]() {
    Vec<double> rl(1), fl(1);
    rl(0) = disc.forward(real, false);
    fl(0) = disc.forward(fake, false);
    return loss::gan_disc_loss_logits<double>(rl, fl, nullptr, nullptr);
  };
  auto ps = params_of(disc);
  zero_all(ps);
  Vec<double> rl(1), fl(1);
  rl(0) = disc.forward(real, true);
  fl(0) = disc.forward(fake, true);
  Vec<double> grl, gfl;
  loss::gan_disc_loss_logits<double>(rl, fl, &grl, &gfl);
  disc.backward(gfl(0));  // LIFO: fake was pushed last
  FeatureMap<double> greal = disc.backward(grl(0));
  CHECK(check_param_grads(ps, loss, rng, 10).pass_fraction() >= 0.95);
  CHECK(check_data_grads(real.v, greal.v, loss, rng, 12).pass_fraction() >= 0.95);

  // generator-side loss gradient w.r.t. the fake image
  auto gen_loss = [&]() {
    Vec<double> l(1);
    l(0) = disc.forward(fake, false);
    return loss::gan_gen_loss_logits<double>(l, nullptr);
  };
  zero_all(ps);
  Vec<double> l(1);
  l(0) = disc.forward(fake, true);
  Vec<double> gl;
  loss::gan_gen_loss_logits<double>(l, &gl);
  FeatureMap<double> gfake = disc.backward(gl(0));
  CHECK(check_data_grads(fake.v, gfake.v, gen_loss, rng, 12).pass_fraction() >= 0.95);
}

TEST_CASE("gradcheck: video discriminator") {
  Rng rng(111);
  const ModelConfig cfg = ModelConfig::toy();
  DiscVideo<double> disc(cfg, rng);
  FeatureVolume<double> clip =
      random_volume(3, cfg.video_clip_len, cfg.image_size, cfg.image_size, rng);

  auto loss = [&]() {
    Vec<double> l(1);
    l(0) = disc.forward(clip, false);
    return loss::gan_gen_loss_logits<double>(l, nullptr);
  };
  auto ps = params_of(disc);
  zero_all(ps);
  Vec<double> l(1);
  l(0) = disc.forward(clip, true);
  Vec<double> gl;
  loss::gan_gen_loss_logits<double>(l, &gl);
  FeatureVolume<double> gclip = disc.backward(gl(0));
  CHECK(check_param_grads(ps, loss, rng, 10).pass_fraction() >= 0.95);
  CHECK(check_data_grads(clip.v, gclip.v, loss, rng, 12).pass_fraction() >= 0.95);
}

TEST_CASE("gradcheck: lip reader through both lip-reading losses") {
  Rng rng(112);
  const ModelConfig cfg = ModelConfig::toy();
  LipReader<double> lip(cfg, rng);
  FeatureVolume<double> real = random_volume(3, 5, cfg.mouth_crop, cfg.mouth_crop, rng);
  FeatureVolume<double> fake = random_volume(3, 5, cfg.mouth_crop, cfg.mouth_crop, rng);
  const int label = 1;

  auto loss = [&]() {
    const Vec<double> rl = lip.forward(real, false);
    const Vec<double> fl = lip.forward(fake, false);
    return loss::lipread_disc_loss<double>(rl, fl, label, nullptr, nullptr);
  };
  auto ps = params_of(lip);
  zero_all(ps);
  const Vec<double> rl = lip.forward(real, true);
  const Vec<double> fl = lip.forward(fake, true);
  Vec<double> grl, gfl;
  loss::lipread_disc_loss<double>(rl, fl, label, &grl, &gfl);
  lip.backward(gfl);
  lip.backward(grl);
  CHECK(check_param_grads(ps, loss, rng, 10).pass_fraction() >= 0.95);

  // generator-side CE gradient w.r.t. fake mouth pixels
  auto gen_loss = [&]() {
    return loss::lipread_gen_loss<double>(lip.forward(fake, false), label, nullptr);
  };
  zero_all(ps);
  Vec<double> gl;
  loss::lipread_gen_loss<double>(lip.forward(fake, true), label, &gl);
  FeatureVolume<double> gfake = lip.backward(gl);
  CHECK(check_data_grads(fake.v, gfake.v, gen_loss, rng, 12).pass_fraction() >= 0.95);
}

TEST_CASE("gradcheck: reconstruction loss against its frame gradients") {
  Rng rng(113);
  std::vector<FeatureMap<double>> gen, truth;
  for (int t = 0; t < 3; ++t) {
    gen.push_back(random_map(3, 6, 6, rng));
    truth.push_back(random_map(3, 6, 6, rng));
  }
  std::vector<FeatureMap<double>> grads(3);
  for (int t = 0; t < 3; ++t) grads[size_t(t)] = FeatureMap<double>(3, 6, 6);
  loss::recon_loss_backward(gen, truth, 1.0, &grads);
  auto loss = [&]() { return loss::recon_loss(gen, truth); };
  for (int t = 0; t < 3; ++t) {
    CHECK(check_data_grads(gen[size_t(t)].v, grads[size_t(t)].v, loss, rng, 10).pass_fraction() >=
          0.95);
  }
}

TEST_CASE("adam: converges on a quadratic and clipping bounds the norm") {
  Rng rng(114);
  nn::Param<double> p;
  p.name = "x";
  p.resize(4, 1);
  p.init_normal(rng, 2.0);
  nn::Adam<double> adam(0.1, 0.9, 0.999);
  std::vector<nn::Param<double> *> ps{&p};
  for (int it = 0; it < 400; ++it) {
    p.zero_grad();
    p.grad = 2.0 * p.value;  // d/dx |x|^2
    adam.step(ps);
  }
  CHECK(p.value.norm() < 1e-3);

  p.grad.setConstant(10.0);
  nn::clip_grad_norm(ps, 5.0);
  CHECK(nn::grad_norm(ps) == doctest::Approx(5.0).epsilon(1e-9));
}
