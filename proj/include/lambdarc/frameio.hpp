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

#ifndef LAMBDARC_FRAMEIO_HPP
#define LAMBDARC_FRAMEIO_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace lambdarc {

// Luma-only picture with samples normalized to [0, 1].
class Frame {
 public:
  Frame() = default;
  // Constant frame.
  Frame(int width, int height, double fill = 0.0);
  // Takes ownership of a row-major plane; validates size and sample range.
  Frame(int width, int height, std::vector<double> luma);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t area() const noexcept { return luma_.size(); }
  bool empty() const noexcept { return luma_.empty(); }

  double at(int x, int y) const { return luma_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const double> samples() const noexcept { return luma_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> luma_;
};

struct FramePair {
  FramePair(Frame ref, Frame cur);

  Frame reference;
  Frame current;
};

struct Sequence {
  Sequence(std::vector<Frame> frames, double frame_rate);

  std::vector<Frame> frames;
  double frame_rate = 30.0;

  int width() const { return frames.front().width(); }
  int height() const { return frames.front().height(); }
  std::size_t size() const { return frames.size(); }
};

// YUV4MPEG2 reader. Accepts 8-bit 4:2:0 variants and mono; only luma is kept.
Sequence load_y4m(const std::filesystem::path& path);

// Writes luma as 8-bit (round-to-nearest) with C420jpeg and mid-gray chroma.
void write_y4m(const std::filesystem::path& path, const Sequence& seq);

// Headerless 8-bit Y-only planes of width x height, back to back.
Sequence load_raw_luma(const std::filesystem::path& path, int width, int height,
                       double frame_rate = 30.0);

// Procedural texture: band-limited lattice noise plus two oriented
// sinusoidal gratings around mid-gray. Texture amplitude grows monotonically
// with spatial_energy and never saturates; phase translates the pattern.
Frame synth_frame(int width, int height, double spatial_energy, double phase,
                  std::uint64_t seed);

// Mean of |horizontal difference| and |vertical difference| over the frame.
double mean_abs_gradient(const Frame& frame);

}  // namespace lambdarc

#endif  // LAMBDARC_FRAMEIO_HPP
