// io/config_json.hpp

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

#ifndef TFG_IO_CONFIG_JSON_HPP_
#define TFG_IO_CONFIG_JSON_HPP_

#include <string>

#include "json.hpp"

namespace tfg::audio {
struct MfccConfig;
void to_json(nlohmann::json &j, const MfccConfig &c);
void from_json(const nlohmann::json &j, MfccConfig &c);
}  // namespace tfg::audio

namespace tfg::data {
struct SyntheticAvatarConfig;
void to_json(nlohmann::json &j, const SyntheticAvatarConfig &c);
void from_json(const nlohmann::json &j, SyntheticAvatarConfig &c);
}  // namespace tfg::data

namespace tfg::model {
struct ModelConfig;
void to_json(nlohmann::json &j, const ModelConfig &c);
void from_json(const nlohmann::json &j, ModelConfig &c);
}  // namespace tfg::model

namespace tfg {

// Reads a JSON document from disk with a hard error on malformed content.
nlohmann::json load_json_file(const std::string &path);
void save_json_file(const std::string &path, const nlohmann::json &j);

// FNV-1a over the canonical (sorted-key, compact) dump; used as config hash.
uint64_t json_hash(const nlohmann::json &j);
std::string hash_hex(uint64_t h);

}  // namespace tfg

#endif  // TFG_IO_CONFIG_JSON_HPP_
