// tests/test_cli.cpp

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

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "tfg/data/corpus.hpp"
#include "tfg/io/config_json.hpp"
#include "tfg/io/png_io.hpp"
#include "tfg/io/wav.hpp"

using namespace tfg;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string &tag) {
  const fs::path p = fs::temp_directory_path() / ("tfg_cli_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

int run_cli(const std::string &args) {
  const std::string cmd = std::string(TFG_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

json tiny_run_config() {
  json model;
  model["enc_channels"] = {4, 6, 8, 10, 12};
  model["z_audio_dim"] = 12;
  model["z_image_dim"] = 12;
  model["hidden_dim"] = 16;
  model["audio_channels"] = {4, 6, 8};
  model["disc_image_channels"] = {4, 6, 8, 10};
  model["disc_video_channels"] = {4, 6, 8};
  model["lipread_channels"] = {4, 6, 8};
  model["video_clip_len"] = 8;
  model["vocab"] = 4;

  json train;
  train["stage1_epochs"] = 1;
  train["stage2_epochs"] = 0;
  train["batch_size"] = 2;
  train["seed"] = 5;
  train["lipread_pretrain_epochs"] = 1;

  json synth;
  synth["vocabulary_size"] = 4;
  synth["clip_frames"] = 8;
  synth["train_clips"] = 6;
  synth["test_clips"] = 2;
  synth["rng_seed"] = 31;

  json cfg;
  cfg["model"] = model;
  cfg["train"] = train;
  cfg["synthetic"] = synth;
  return cfg;
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream os(path);
  os << content;
}

std::vector<char> slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::vector<char>((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
}

// minimal structural validator for the shipped report schemas: checks type,
// required and (recursively) properties
bool validate_against_schema(const json &doc, const json &schema);

bool check_type(const json &doc, const std::string &type) {
  if (type == "object") return doc.is_object();
  if (type == "array") return doc.is_array();
  if (type == "string") return doc.is_string();
  if (type == "number") return doc.is_number();
  if (type == "integer") return doc.is_number_integer();
  if (type == "boolean") return doc.is_boolean();
  return true;
}

bool validate_against_schema(const json &doc, const json &schema) {
  if (schema.contains("type") && !check_type(doc, schema["type"].get<std::string>()))
    return false;
  if (schema.contains("required")) {
    for (const auto &key : schema["required"]) {
      if (!doc.contains(key.get<std::string>())) return false;
    }
  }
  if (schema.contains("properties") && doc.is_object()) {
    for (const auto &[key, sub] : schema["properties"].items()) {
      if (doc.contains(key) && !validate_against_schema(doc.at(key), sub)) return false;
    }
  }
  if (schema.contains("items") && doc.is_array()) {
    for (const auto &item : doc) {
      if (!validate_against_schema(item, schema["items"])) return false;
    }
  }
  return true;
}

std::string repo_schema(const std::string &name) {
  return (fs::path(TFG_CLI_PATH).parent_path().parent_path().parent_path() / "schemas" / name)
      .string();
}

}  // namespace

TEST_CASE("cli: synth-data writes a valid deterministic corpus, rejects bad config") {
  const std::string dir = temp_dir("synth");
  write_file(dir + "/cfg.json", tiny_run_config().dump());
  REQUIRE(run_cli("synth-data --config " + dir + "/cfg.json --out " + dir + "/c1.tfar") == 0);
  REQUIRE(run_cli("synth-data --config " + dir + "/cfg.json --out " + dir + "/c2.tfar") == 0);
  CHECK(slurp(dir + "/c1.tfar") == slurp(dir + "/c2.tfar"));

  const data::Corpus corpus = data::Corpus::open(dir + "/c1.tfar");
  CHECK(corpus.size() == 8);

  json bad = tiny_run_config();
  bad["synthetic"]["vocabulary_size"] = 1;  // violates V >= 2
  write_file(dir + "/bad.json", bad.dump());
  CHECK(run_cli("synth-data --config " + dir + "/bad.json --out " + dir + "/bad.tfar") != 0);
}

TEST_CASE("cli: train produces checkpoint, log and persisted run config") {
  const std::string dir = temp_dir("train");
  write_file(dir + "/cfg.json", tiny_run_config().dump());
  REQUIRE(run_cli("synth-data --config " + dir + "/cfg.json --out " + dir + "/c.tfar") == 0);
  REQUIRE(run_cli("train --config " + dir + "/cfg.json --corpus " + dir + "/c.tfar --out " +
                  dir + "/run --scheme recurrent") == 0);
  CHECK(fs::exists(dir + "/run/checkpoint_final.tfar"));
  CHECK(fs::exists(dir + "/run/config.json"));
  std::ifstream log(dir + "/run/log.csv");
  std::string header;
  std::getline(log, header);
  CHECK(header.rfind("stage,epoch,step,l_rec", 0) == 0);

  // stage-2-only override smoke: resume path exercised through the CLI
  REQUIRE(run_cli("train --config " + dir + "/cfg.json --corpus " + dir + "/c.tfar --out " +
                  dir + "/run2 --stage1-epochs 1 --stage2-epochs 0 --resume " + dir +
                  "/run/checkpoint_final.tfar --force-load") == 0);
}

TEST_CASE("cli: generate is deterministic, short clips are rejected") {
  const std::string dir = temp_dir("gen");
  write_file(dir + "/cfg.json", tiny_run_config().dump());
  REQUIRE(run_cli("synth-data --config " + dir + "/cfg.json --out " + dir + "/c.tfar") == 0);
  REQUIRE(run_cli("train --config " + dir + "/cfg.json --corpus " + dir + "/c.tfar --out " +
                  dir + "/run") == 0);

  // identity image + driving audio from a synthetic sample
  data::SyntheticAvatarConfig scfg;
  scfg.vocabulary_size = 4;
  scfg.clip_frames = 8;
  scfg.rng_seed = 31;
  std::vector<float> wav;
  const data::TalkingFaceSample s = data::synth_sample(scfg, 2, 77, &wav);
  write_png_rgb(dir + "/identity.png", image_to_u8(s.identity), 128, 128);
  write_wav(dir + "/drive.wav", wav, 16000);

  const std::string ckpt = dir + "/run/checkpoint_final.tfar";
  REQUIRE(run_cli("generate --checkpoint " + ckpt + " --identity " + dir +
                  "/identity.png --wav " + dir + "/drive.wav --out " + dir + "/f1 --seed 4") == 0);
  REQUIRE(run_cli("generate --checkpoint " + ckpt + " --identity " + dir +
                  "/identity.png --wav " + dir + "/drive.wav --out " + dir + "/f2 --seed 4") == 0);

  // 8 frames: floor((950ms - 350ms) / 40ms) + 1
  CHECK(fs::exists(dir + "/f1/000007.png"));
  CHECK_FALSE(fs::exists(dir + "/f1/000008.png"));
  CHECK(slurp(dir + "/f1/000000.png") == slurp(dir + "/f2/000000.png"));
  CHECK(slurp(dir + "/f1/000007.png") == slurp(dir + "/f2/000007.png"));

  const json meta = load_json_file(dir + "/f1/generation.json");
  CHECK(meta.at("frames").get<int>() == 8);
  CHECK(validate_against_schema(meta, load_json_file(repo_schema("generation_metadata.schema.json"))));

  // clip shorter than one analysis window
  std::vector<float> tiny(4800, 0.1f);  // 300 ms
  write_wav(dir + "/short.wav", tiny, 16000);
  CHECK(run_cli("generate --checkpoint " + ckpt + " --identity " + dir +
                "/identity.png --wav " + dir + "/short.wav --out " + dir + "/f3") != 0);
}

TEST_CASE("cli: evaluate emits a schema-valid report; ground-truth identity case") {
  const std::string dir = temp_dir("eval");
  write_file(dir + "/cfg.json", tiny_run_config().dump());
  REQUIRE(run_cli("synth-data --config " + dir + "/cfg.json --out " + dir + "/c.tfar") == 0);

  REQUIRE(run_cli("evaluate --ground-truth --corpus " + dir + "/c.tfar --out " + dir +
                  "/gt.json") == 0);
  const json gt = load_json_file(dir + "/gt.json");
  CHECK(gt["metrics"]["psnr"].get<double>() == doctest::Approx(100.0));
  CHECK(gt["metrics"]["ssim"].get<double>() == doctest::Approx(1.0));
  CHECK(gt["metrics"]["lmd"].get<double>() == doctest::Approx(0.0));

  REQUIRE(run_cli("train --config " + dir + "/cfg.json --corpus " + dir + "/c.tfar --out " +
                  dir + "/run") == 0);
  REQUIRE(run_cli("evaluate --checkpoint " + dir + "/run/checkpoint_final.tfar --corpus " + dir +
                  "/c.tfar --out " + dir + "/report.json --per-sample") == 0);
  const json rep = load_json_file(dir + "/report.json");
  CHECK(validate_against_schema(rep, load_json_file(repo_schema("evaluation_report.schema.json"))));
  CHECK(rep["metrics"].contains("psnr"));
  CHECK(rep["metrics"].contains("ssim"));
  CHECK(rep["metrics"].contains("lmd"));
  // a barely trained model may render no dark mouth at all; the metric is
  // then reported as skipped instead of fabricated
  const bool aperture_reported = rep["metrics"].contains("aperture_correlation");
  bool aperture_skipped = false;
  for (const auto &s : rep["skipped"])
    if (s.get<std::string>().rfind("aperture_correlation", 0) == 0) aperture_skipped = true;
  CHECK((aperture_reported || aperture_skipped));
}

TEST_CASE("cli: ablate emits the report rows and scheme motion maps") {
  const std::string dir = temp_dir("ablate");
  json cfg = tiny_run_config();
  cfg["train"]["stage1_epochs"] = 1;
  cfg["train"]["stage2_epochs"] = 0;  // structural plumbing run
  write_file(dir + "/cfg.json", cfg.dump());
  REQUIRE(run_cli("synth-data --config " + dir + "/cfg.json --out " + dir + "/c.tfar") == 0);
  REQUIRE(run_cli("ablate --config " + dir + "/cfg.json --corpus " + dir + "/c.tfar --out " +
                  dir + "/ab") == 0);
  const json rep = load_json_file(dir + "/ab/ablation_report.json");
  CHECK(validate_against_schema(rep, load_json_file(repo_schema("ablation_report.schema.json"))));
  REQUIRE(rep["loss_ablation"].size() == 4);
  CHECK(rep["loss_ablation"][0]["losses"] == "L_r");
  CHECK(rep["loss_ablation"][3]["losses"] == "L_r_I_V_l");
  REQUIRE(rep["scheme_comparison"].size() == 3);
  for (const char *scheme : {"sequential", "frame", "recurrent"}) {
    CHECK(fs::exists(dir + "/ab/motion_" + std::string(scheme) + ".png"));
  }
}
