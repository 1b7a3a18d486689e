// core/common.hpp

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

#ifndef TFG_CORE_COMMON_HPP_
#define TFG_CORE_COMMON_HPP_

#include <sstream>
#include <stdexcept>
#include <string>

namespace tfg {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

namespace detail {
inline void format_into(std::ostringstream &) {}
template <typename T, typename... Rest>
void format_into(std::ostringstream &os, const T &v, const Rest &...rest) {
  os << v;
  format_into(os, rest...);
}
}  // namespace detail

template <typename... Args>
std::string strcat_msg(const Args &...args) {
  std::ostringstream os;
  detail::format_into(os, args...);
  return os.str();
}

}  // namespace tfg

// Always-on invariant check; throws tfg::Error so CLI failures surface as a
// one-line diagnostic instead of an abort.
#define TFG_CHECK(cond, ...)                                              \
  do {                                                                    \
    if (!(cond)) {                                                        \
      throw ::tfg::Error(::tfg::strcat_msg("check failed (" #cond "): ", \
                                           __VA_ARGS__));                 \
    }                                                                     \
  } while (0)

#endif  // TFG_CORE_COMMON_HPP_
