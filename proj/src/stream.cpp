#include "prismsim/stream.hpp"

#include <cmath>
#include <fstream>

#include "prismsim/rng.hpp"

namespace prismsim {

double trigger_interval_us(const Trigger& t) {
  if (t.mode == Trigger::Mode::Software) {
    if (!(t.software_us > 0.0))
      throw ConfigError("software trigger interval must be positive");
    return t.software_us;
  }
  if (!(t.led_hz > 0.0)) throw ConfigError("LED trigger frequency must be positive");
  return 1e6 / t.led_hz;
}

namespace {

double parse_num(const std::string& whole, const std::string& part) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(part, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != part.size())
    throw ConfigError("bad base pattern spec: '" + whole + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

std::function<double(std::uint32_t, std::uint32_t)> base_pattern_from_string(
    const std::string& s) {
  auto parts = split(s, ':');
  if (parts[0] == "constant" && parts.size() == 2) {
    double v = parse_num(s, parts[1]);
    return [v](std::uint32_t, std::uint32_t) { return v; };
  }
  if (parts[0] == "gradient" && parts.size() == 3) {
    double start = parse_num(s, parts[1]);
    double step = parse_num(s, parts[2]);
    return [start, step](std::uint32_t x, std::uint32_t y) {
      return start + step * (double(x) + double(y));
    };
  }
  if (parts[0] == "checker" && parts.size() == 4) {
    double a = parse_num(s, parts[1]);
    double b = parse_num(s, parts[2]);
    double cell = parse_num(s, parts[3]);
    if (!(cell >= 1.0)) throw ConfigError("checker cell must be >= 1: '" + s + "'");
    std::uint32_t c = std::uint32_t(cell);
    return [a, b, c](std::uint32_t x, std::uint32_t y) {
      return ((x / c + y / c) % 2 == 0) ? a : b;
    };
  }
  throw ConfigError(
      "unknown base pattern '" + s +
      "' (want constant:V, gradient:START:STEP or checker:A:B:CELL)");
}

FrameStream::FrameStream(const ValidConfig& cfg, const SceneConfig& scene,
                         double interval_us, std::uint32_t bank)
    : cfg_(cfg),
      scene_(scene),
      interval_us_(interval_us),
      bank_(bank),
      total_(cfg.total_frames()) {
  if (!(interval_us > 0.0)) throw ConfigError("trigger interval must be positive");
}

TimedFrame FrameStream::next() {
  if (done()) throw std::logic_error("stream exhausted");
  const std::uint64_t n = ordinal_++;
  const std::uint32_t N = cfg_.frames_per_group();

  TimedFrame f;
  f.group_index = std::uint32_t(n / N) + 1;
  f.frame_index = std::uint32_t(n % N) + 1;
  f.arrival_us = double(n) * interval_us_;
  const bool excitation = f.frame_index % 2 == 0;

  double led = 0.0;
  if (scene_.led && scene_.led->amplitude != 0.0) {
    double t_s = f.arrival_us * 1e-6;
    led = scene_.led->amplitude *
          (1.0 + std::sin(2.0 * M_PI * scene_.led->hz * t_s +
                          scene_.led->phase_rad)) / 2.0;
  }

  const std::uint32_t H = cfg_.geom.height, W = cfg_.geom.width;
  const double vmax = double(cfg_.pixel_max());
  f.pixels.resize(std::size_t(H) * W);
  std::size_t j = 0;
  for (std::uint32_t y = 0; y < H; ++y) {
    for (std::uint32_t x = 0; x < W; ++x, ++j) {
      double v = scene_.base(x, y) + led;
      if (excitation) v += scene_.signal_amplitude;
      if (scene_.noise_sigma > 0.0)
        v += scene_.noise_sigma *
             gauss_ih12(scene_.seed, bank_, n * f.pixels.size() + j);
      double r = std::nearbyint(v);
      if (r < 0.0) r = 0.0;
      if (r > vmax) r = vmax;
      f.pixels[j] = std::uint16_t(r);
    }
  }
  return f;
}

std::vector<TimedFrame> generate_stream(const ValidConfig& cfg,
                                        const SceneConfig& scene,
                                        double interval_us, std::uint32_t bank) {
  FrameStream fs(cfg, scene, interval_us, bank);
  std::vector<TimedFrame> frames;
  frames.reserve(fs.total());
  while (!fs.done()) frames.push_back(fs.next());
  return frames;
}

void write_raw(const std::string& path, const std::vector<std::uint16_t>& px) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  std::vector<unsigned char> bytes(px.size() * 2);
  for (std::size_t i = 0; i < px.size(); ++i) {
    bytes[2 * i] = px[i] & 0xFF;
    bytes[2 * i + 1] = px[i] >> 8;
  }
  f.write(reinterpret_cast<const char*>(bytes.data()),
          std::streamsize(bytes.size()));
}

void write_pgm(const std::string& path, const std::vector<std::uint16_t>& px,
               std::uint32_t height, std::uint32_t width,
               std::uint32_t pixel_depth) {
  if (px.size() != std::size_t(height) * width)
    throw ConfigError("pixel count does not match PGM dimensions");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << "P5\n" << width << " " << height << "\n255\n";
  std::vector<unsigned char> bytes(px.size());
  for (std::size_t i = 0; i < px.size(); ++i) {
    std::uint32_t v = px[i];
    if (pixel_depth > 8)
      v >>= (pixel_depth - 8);
    else if (pixel_depth < 8)
      v <<= (8 - pixel_depth);
    bytes[i] = (unsigned char)(v > 255 ? 255 : v);
  }
  f.write(reinterpret_cast<const char*>(bytes.data()),
          std::streamsize(bytes.size()));
}

}  // namespace prismsim
