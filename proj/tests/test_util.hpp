// Copyright 2026 The lambdarc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef LAMBDARC_TESTS_TEST_UTIL_HPP
#define LAMBDARC_TESTS_TEST_UTIL_HPP

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lambdarc/codec_sim.hpp"

namespace lambdarc::test {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("lambdarc_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline ContentScript uniform_script(const FrameTruth& truth, std::size_t n, double gamma = 0.0,
                                    double sigma = 0.0, std::uint64_t seed = 1) {
  ContentScript script;
  script.truths.assign(n, truth);
  script.seed = seed;
  script.coupling_gamma = gamma;
  script.noise_sigma = sigma;
  return script;
}

}  // namespace lambdarc::test

#endif  // LAMBDARC_TESTS_TEST_UTIL_HPP
