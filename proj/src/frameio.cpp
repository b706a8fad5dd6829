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

#include "lambdarc/frameio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>

#include "lambdarc/error.hpp"
#include "lambdarc/random.hpp"

namespace lambdarc {

Frame::Frame(int width, int height, double fill)
    : Frame(width, height,
            std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                    static_cast<std::size_t>(std::max(height, 0)),
                                fill)) {}

Frame::Frame(int width, int height, std::vector<double> luma)
    : width_(width), height_(height), luma_(std::move(luma)) {
  require(width > 0 && height > 0, ErrorKind::kArgument,
          "frame dimensions must be positive, got " + std::to_string(width) + "x" +
              std::to_string(height));
  require(luma_.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
          ErrorKind::kArgument, "luma plane size does not match frame dimensions");
  for (double s : luma_) {
    require(s >= 0.0 && s <= 1.0, ErrorKind::kArgument, "luma sample outside [0, 1]");
  }
}

FramePair::FramePair(Frame ref, Frame cur) : reference(std::move(ref)), current(std::move(cur)) {
  require(reference.width() == current.width() && reference.height() == current.height(),
          ErrorKind::kArgument, "frame pair dimensions differ");
}

Sequence::Sequence(std::vector<Frame> f, double rate) : frames(std::move(f)), frame_rate(rate) {
  require(!frames.empty(), ErrorKind::kArgument, "sequence must hold at least one frame");
  require(frame_rate > 0.0, ErrorKind::kArgument, "frame rate must be positive");
  for (const Frame& frame : frames) {
    require(frame.width() == frames.front().width() && frame.height() == frames.front().height(),
            ErrorKind::kArgument, "sequence frames must share dimensions");
  }
}

namespace {

enum class Chroma { k420, kMono };

struct Y4mHeader {
  int width = 0;
  int height = 0;
  double frame_rate = 25.0;
  Chroma chroma = Chroma::k420;
};

int parse_positive_int(const std::string& token) {
  const std::string digits = token.substr(1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
    fail(ErrorKind::kParse, "malformed Y4M header token '" + token + "'");
  }
  const long value = std::stol(digits);
  if (value <= 0 || value > 1 << 16) {
    fail(ErrorKind::kParse, "malformed Y4M header token '" + token + "'");
  }
  return static_cast<int>(value);
}

Y4mHeader parse_header(const std::string& line) {
  std::istringstream in(line);
  std::string token;
  in >> token;
  if (token != "YUV4MPEG2") {
    fail(ErrorKind::kParse, "missing Y4M signature, found '" + token + "'");
  }
  Y4mHeader header;
  while (in >> token) {
    switch (token[0]) {
      case 'W':
        header.width = parse_positive_int(token);
        break;
      case 'H':
        header.height = parse_positive_int(token);
        break;
      case 'F': {
        const auto colon = token.find(':');
        if (colon == std::string::npos) {
          fail(ErrorKind::kParse, "malformed Y4M header token '" + token + "'");
        }
        try {
          const double num = std::stod(token.substr(1, colon - 1));
          const double den = std::stod(token.substr(colon + 1));
          if (num <= 0.0 || den <= 0.0) throw std::invalid_argument("rate");
          header.frame_rate = num / den;
        } catch (const std::logic_error&) {
          fail(ErrorKind::kParse, "malformed Y4M header token '" + token + "'");
        }
        break;
      }
      case 'C': {
        const std::string cs = token.substr(1);
        if (cs == "420" || cs == "420jpeg" || cs == "420paldv" || cs == "420mpeg2") {
          header.chroma = Chroma::k420;
        } else if (cs == "mono") {
          header.chroma = Chroma::kMono;
        } else {
          fail(ErrorKind::kParse, "unsupported Y4M colorspace token '" + token + "'");
        }
        break;
      }
      case 'I':
      case 'A':
      case 'X':
        break;
      default:
        fail(ErrorKind::kParse, "unknown Y4M header token '" + token + "'");
    }
  }
  if (header.width == 0 || header.height == 0) {
    fail(ErrorKind::kParse, "Y4M header lacks W or H token");
  }
  return header;
}

std::size_t chroma_bytes(const Y4mHeader& h) {
  if (h.chroma == Chroma::kMono) return 0;
  const std::size_t cw = static_cast<std::size_t>(h.width + 1) / 2;
  const std::size_t ch = static_cast<std::size_t>(h.height + 1) / 2;
  return 2 * cw * ch;
}

Frame frame_from_bytes(int width, int height, const std::vector<unsigned char>& bytes) {
  std::vector<double> luma(bytes.size());
  std::transform(bytes.begin(), bytes.end(), luma.begin(),
                 [](unsigned char b) { return static_cast<double>(b) / 255.0; });
  return Frame(width, height, std::move(luma));
}

}  // namespace

Sequence load_y4m(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::kIo, "cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) {
    fail(ErrorKind::kParse, "empty Y4M file " + path.string());
  }
  const Y4mHeader header = parse_header(line);
  const std::size_t luma_size =
      static_cast<std::size_t>(header.width) * static_cast<std::size_t>(header.height);
  const std::size_t skip = chroma_bytes(header);

  std::vector<Frame> frames;
  std::vector<unsigned char> buffer(luma_size);
  std::vector<char> chroma(skip);
  while (std::getline(in, line)) {
    const std::size_t index = frames.size();
    if (line.rfind("FRAME", 0) != 0) {
      fail(ErrorKind::kParse, "expected FRAME marker before frame " + std::to_string(index) +
                                  ", found '" + line.substr(0, 16) + "'");
    }
    in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(luma_size));
    if (static_cast<std::size_t>(in.gcount()) != luma_size) {
      fail(ErrorKind::kTruncation, "truncated luma payload in frame " + std::to_string(index));
    }
    in.read(chroma.data(), static_cast<std::streamsize>(skip));
    if (static_cast<std::size_t>(in.gcount()) != skip) {
      fail(ErrorKind::kTruncation, "truncated chroma payload in frame " + std::to_string(index));
    }
    frames.push_back(frame_from_bytes(header.width, header.height, buffer));
  }
  require(!frames.empty(), ErrorKind::kParse, "Y4M file contains no frames");
  return Sequence(std::move(frames), header.frame_rate);
}

void write_y4m(const std::filesystem::path& path, const Sequence& seq) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::kIo, "cannot write " + path.string());

  // Frame rate as a rational with a millisecond-scale denominator.
  const long long num = std::llround(seq.frame_rate * 1000.0);
  out << "YUV4MPEG2 W" << seq.width() << " H" << seq.height() << " F" << num << ":1000"
      << " Ip A1:1 C420jpeg\n";

  const std::size_t cw = static_cast<std::size_t>(seq.width() + 1) / 2;
  const std::size_t ch = static_cast<std::size_t>(seq.height() + 1) / 2;
  const std::vector<char> chroma(2 * cw * ch, static_cast<char>(128));
  std::vector<unsigned char> bytes;
  for (const Frame& frame : seq.frames) {
    bytes.resize(frame.area());
    std::transform(frame.samples().begin(), frame.samples().end(), bytes.begin(),
                   [](double s) { return static_cast<unsigned char>(std::lround(s * 255.0)); });
    out << "FRAME\n";
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.write(chroma.data(), static_cast<std::streamsize>(chroma.size()));
  }
  require(static_cast<bool>(out), ErrorKind::kIo, "write failed for " + path.string());
}

Sequence load_raw_luma(const std::filesystem::path& path, int width, int height,
                       double frame_rate) {
  require(width > 0 && height > 0, ErrorKind::kArgument, "raw reader needs positive dimensions");
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::kIo, "cannot open " + path.string());

  const std::size_t plane = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  require(!data.empty(), ErrorKind::kParse, "raw file is empty");
  if (data.size() % plane != 0) {
    fail(ErrorKind::kTruncation,
         "truncated raw payload in frame " + std::to_string(data.size() / plane));
  }
  std::vector<Frame> frames;
  for (std::size_t off = 0; off < data.size(); off += plane) {
    std::vector<unsigned char> bytes(data.begin() + static_cast<std::ptrdiff_t>(off),
                                     data.begin() + static_cast<std::ptrdiff_t>(off + plane));
    frames.push_back(frame_from_bytes(width, height, bytes));
  }
  return Sequence(std::move(frames), frame_rate);
}

namespace {

constexpr double kLatticeSpacing = 8.0;

double lattice_value(std::uint64_t seed, long long ix, long long iy) {
  const std::uint64_t h = mix64(seed ^ mix64(static_cast<std::uint64_t>(ix) * 0x9E3779B1ULL ^
                                             mix64(static_cast<std::uint64_t>(iy))));
  return 2.0 * unit_from_bits(h) - 1.0;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Smoothly interpolated lattice noise in [-1, 1].
double value_noise(std::uint64_t seed, double x, double y) {
  const double gx = x / kLatticeSpacing;
  const double gy = y / kLatticeSpacing;
  const double fx = std::floor(gx);
  const double fy = std::floor(gy);
  const auto ix = static_cast<long long>(fx);
  const auto iy = static_cast<long long>(fy);
  const double tx = smoothstep(gx - fx);
  const double ty = smoothstep(gy - fy);
  const double v00 = lattice_value(seed, ix, iy);
  const double v10 = lattice_value(seed, ix + 1, iy);
  const double v01 = lattice_value(seed, ix, iy + 1);
  const double v11 = lattice_value(seed, ix + 1, iy + 1);
  const double top = v00 + (v10 - v00) * tx;
  const double bottom = v01 + (v11 - v01) * tx;
  return top + (bottom - top) * ty;
}

}  // namespace

Frame synth_frame(int width, int height, double spatial_energy, double phase,
                  std::uint64_t seed) {
  require(width >= 16 && height >= 16, ErrorKind::kArgument,
          "synth_frame needs width and height of at least 16");
  require(spatial_energy >= 0.0 && std::isfinite(spatial_energy), ErrorKind::kArgument,
          "spatial energy must be finite and non-negative");

  // Saturating map keeps 0.5 + amplitude * texture strictly inside [0, 1].
  const double amplitude = 0.45 * spatial_energy / (1.0 + spatial_energy);

  Rng rng(derive_seed(seed, 0x5EED));
  const double period_a = rng.uniform(6.0, 24.0);
  const double period_b = rng.uniform(6.0, 24.0);
  const double angle_a = rng.uniform(0.0, std::numbers::pi);
  const double angle_b = rng.uniform(0.0, std::numbers::pi);
  const double offset_a = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double offset_b = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const std::uint64_t noise_seed = derive_seed(seed, 0xA015E);

  const double shift_x = 1.0 * phase;
  const double shift_y = 0.5 * phase;
  const double two_pi = 2.0 * std::numbers::pi;

  std::vector<double> luma(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double px = x + shift_x;
      const double py = y + shift_y;
      const double grating_a =
          std::sin(two_pi * (px * std::cos(angle_a) + py * std::sin(angle_a)) / period_a + offset_a);
      const double grating_b =
          std::sin(two_pi * (px * std::cos(angle_b) + py * std::sin(angle_b)) / period_b + offset_b);
      const double texture =
          0.5 * value_noise(noise_seed, px, py) + 0.25 * grating_a + 0.25 * grating_b;
      luma[static_cast<std::size_t>(y) * width + x] = 0.5 + amplitude * texture;
    }
  }
  return Frame(width, height, std::move(luma));
}

double mean_abs_gradient(const Frame& frame) {
  const int w = frame.width();
  const int h = frame.height();
  double sum = 0.0;
  std::size_t count = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x + 1 < w) {
        sum += std::abs(frame.at(x + 1, y) - frame.at(x, y));
        ++count;
      }
      if (y + 1 < h) {
        sum += std::abs(frame.at(x, y + 1) - frame.at(x, y));
        ++count;
      }
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

}  // namespace lambdarc
