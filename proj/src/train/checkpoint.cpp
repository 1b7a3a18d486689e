// train/checkpoint.cpp

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

#include "tfg/train/checkpoint.hpp"

#include <cstring>

#include "tfg/io/archive.hpp"

namespace tfg::train {

namespace {

std::vector<uint8_t> tensor_blob(const Matf &m) {
  std::vector<uint8_t> out(8 + sizeof(float) * size_t(m.size()));
  const uint32_t rows = uint32_t(m.rows()), cols = uint32_t(m.cols());
  std::memcpy(out.data(), &rows, 4);
  std::memcpy(out.data() + 4, &cols, 4);
  std::memcpy(out.data() + 8, m.data(), sizeof(float) * size_t(m.size()));
  return out;
}

Matf blob_tensor(const std::vector<uint8_t> &blob, const std::string &what) {
  TFG_CHECK(blob.size() >= 8, "truncated tensor blob: ", what);
  uint32_t rows = 0, cols = 0;
  std::memcpy(&rows, blob.data(), 4);
  std::memcpy(&cols, blob.data() + 4, 4);
  TFG_CHECK(blob.size() == 8 + sizeof(float) * size_t(rows) * cols, "tensor blob size mismatch: ",
            what);
  Matf m(rows, cols);
  std::memcpy(m.data(), blob.data() + 8, sizeof(float) * size_t(m.size()));
  return m;
}

}  // namespace

void save_checkpoint(const std::string &path, const CheckpointMeta &meta,
                     const std::vector<nn::Param<float> *> &params,
                     const std::map<std::string, nn::Adam<float> *> &optimizers) {
  ArchiveWriter ar(path);
  ar.add_string("config.json", meta.config.dump(2));
  ar.add_string("progress.json", meta.progress.dump(2));

  if (meta.norm_stats.valid()) {
    std::vector<double> ns;
    for (Eigen::Index i = 0; i < meta.norm_stats.mean.size(); ++i)
      ns.push_back(meta.norm_stats.mean(i));
    for (Eigen::Index i = 0; i < meta.norm_stats.stddev.size(); ++i)
      ns.push_back(meta.norm_stats.stddev(i));
    ar.add("norm_stats.f64", ns.data(), ns.size() * sizeof(double));
  }

  for (const auto &[name, state] : meta.rng_states) {
    ar.add("rng/" + name, state.data(), state.size() * sizeof(uint64_t));
  }

  for (const nn::Param<float> *p : params) {
    ar.add_bytes("tensors/" + p->name, tensor_blob(p->value));
  }

  for (const auto &[opt_name, opt] : optimizers) {
    for (const auto &[pname, slot] : opt->slots()) {
      const std::string base = strcat_msg("opt/", opt_name, "/", pname);
      ar.add_bytes(base + "/m", tensor_blob(slot.m));
      ar.add_bytes(base + "/v", tensor_blob(slot.v));
      ar.add(base + "/t", &slot.t, sizeof(slot.t));
    }
  }
  ar.finish();
}

CheckpointMeta load_checkpoint(const std::string &path,
                               const std::vector<nn::Param<float> *> &params,
                               const std::map<std::string, nn::Adam<float> *> &optimizers) {
  ArchiveReader ar(path);
  CheckpointMeta meta;
  meta.config = nlohmann::json::parse(ar.read_string("config.json"), nullptr, false);
  TFG_CHECK(!meta.config.is_discarded(), "malformed config in checkpoint: ", path);
  meta.progress = nlohmann::json::parse(ar.read_string("progress.json"), nullptr, false);
  TFG_CHECK(!meta.progress.is_discarded(), "malformed progress in checkpoint: ", path);

  if (ar.contains("norm_stats.f64")) {
    const std::vector<uint8_t> blob = ar.read("norm_stats.f64");
    const size_t n = blob.size() / sizeof(double) / 2;
    meta.norm_stats.mean.resize(Eigen::Index(n));
    meta.norm_stats.stddev.resize(Eigen::Index(n));
    std::memcpy(meta.norm_stats.mean.data(), blob.data(), n * sizeof(double));
    std::memcpy(meta.norm_stats.stddev.data(), blob.data() + n * sizeof(double),
                n * sizeof(double));
  }

  for (const std::string &name : ar.names()) {
    if (name.rfind("rng/", 0) == 0) {
      const std::vector<uint8_t> blob = ar.read(name);
      std::vector<uint64_t> st(blob.size() / sizeof(uint64_t));
      std::memcpy(st.data(), blob.data(), blob.size());
      meta.rng_states[name.substr(4)] = std::move(st);
    }
  }

  for (nn::Param<float> *p : params) {
    const std::string key = "tensors/" + p->name;
    TFG_CHECK(ar.contains(key), "checkpoint missing tensor ", p->name, ": ", path);
    Matf loaded = blob_tensor(ar.read(key), p->name);
    TFG_CHECK(loaded.rows() == p->value.rows() && loaded.cols() == p->value.cols(),
              "tensor shape mismatch for ", p->name, " (checkpoint ", loaded.rows(), "x",
              loaded.cols(), ", model ", p->value.rows(), "x", p->value.cols(), ")");
    p->value = std::move(loaded);
  }

  for (const auto &[opt_name, opt] : optimizers) {
    opt->slots().clear();
    const std::string prefix = strcat_msg("opt/", opt_name, "/");
    for (const std::string &name : ar.names()) {
      if (name.rfind(prefix, 0) != 0 || name.size() < 2) continue;
      if (name.substr(name.size() - 2) != "/m") continue;
      const std::string pname = name.substr(prefix.size(), name.size() - prefix.size() - 2);
      auto &slot = opt->slots()[pname];
      slot.m = blob_tensor(ar.read(prefix + pname + "/m"), pname);
      slot.v = blob_tensor(ar.read(prefix + pname + "/v"), pname);
      const std::vector<uint8_t> tb = ar.read(prefix + pname + "/t");
      TFG_CHECK(tb.size() == sizeof(slot.t), "bad optimizer step blob for ", pname);
      std::memcpy(&slot.t, tb.data(), sizeof(slot.t));
    }
  }
  return meta;
}

nlohmann::json peek_checkpoint_config(const std::string &path) {
  ArchiveReader ar(path);
  nlohmann::json j = nlohmann::json::parse(ar.read_string("config.json"), nullptr, false);
  TFG_CHECK(!j.is_discarded(), "malformed config in checkpoint: ", path);
  return j;
}

}  // namespace tfg::train
