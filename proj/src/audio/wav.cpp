#include "oaekit/audio/wav.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "oaekit/error.hpp"
#include "oaekit/log.hpp"

namespace oaekit::audio {
namespace {

static_assert(std::endian::native == std::endian::little,
              "WAV reader assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

SampleBuffer load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("cannot open WAV file: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string name = path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw SchemaViolation(name + ": not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = std::min<std::size_t>(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (available < 16) throw SchemaViolation(name + ": truncated fmt chunk");
      format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      if (format == kFormatExtensible) {
        if (available < 40) throw SchemaViolation(name + ": truncated extensible fmt chunk");
        format = read_u16(chunk + 8 + 24);  // first two bytes of the sub-format GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = available;
    }
    pos = body + size + (size & 1U);
  }

  if (!have_fmt) throw SchemaViolation(name + ": missing fmt chunk");
  if (data == nullptr) throw SchemaViolation(name + ": missing data chunk");
  if (channels == 0) throw SchemaViolation(name + ": zero channels");
  if (rate == 0) throw SchemaViolation(name + ": zero sample rate");

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool pcm24 = format == kFormatPcm && bits == 24;
  const bool f32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !pcm24 && !f32) {
    throw InvalidArgument(name + ": unsupported encoding (format " + std::to_string(format) +
                          ", " + std::to_string(bits) + " bits)");
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t frames = data_size / frame_bytes;
  if (frames == 0) throw InvalidArgument(name + ": zero-length audio stream");

  std::vector<double> mono(frames, 0.0);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + f * frame_bytes + c * bytes_per_sample;
      if (pcm16) {
        acc += static_cast<std::int16_t>(read_u16(p)) / 32768.0;
      } else if (pcm24) {
        std::int32_t v = static_cast<std::int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
        if (v & 0x800000) v -= 0x1000000;
        acc += v / 8388608.0;
      } else {
        float v;
        std::memcpy(&v, p, sizeof v);
        acc += static_cast<double>(v);
      }
    }
    mono[f] = acc / channels;
  }
  return SampleBuffer(std::move(mono), static_cast<int>(rate));
}

WavWriteResult save_wav(const SampleBuffer& buffer, const std::filesystem::path& path,
                        WavEncoding encoding) {
  WavWriteResult result;
  const std::uint16_t bits = encoding == WavEncoding::pcm16   ? 16
                             : encoding == WavEncoding::pcm24 ? 24
                                                              : 32;
  const std::uint16_t format = encoding == WavEncoding::float32 ? kFormatFloat : kFormatPcm;
  const std::uint32_t bytes_per_sample = bits / 8U;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(buffer.size()) * bytes_per_sample;
  const auto rate = static_cast<std::uint32_t>(buffer.sample_rate());

  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, format);
  put_u16(out, 1);
  put_u32(out, rate);
  put_u32(out, rate * bytes_per_sample);
  put_u16(out, static_cast<std::uint16_t>(bytes_per_sample));
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, data_bytes);

  for (double v : buffer.samples()) {
    if (v > 1.0 || v < -1.0) {
      ++result.clipped_samples;
      v = std::clamp(v, -1.0, 1.0);
    }
    switch (encoding) {
      case WavEncoding::pcm16: {
        const long q = std::clamp(std::lround(v * 32768.0), -32768L, 32767L);
        put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
        break;
      }
      case WavEncoding::pcm24: {
        const long q = std::clamp(std::lround(v * 8388608.0), -8388608L, 8388607L);
        const auto u = static_cast<std::uint32_t>(static_cast<std::int32_t>(q));
        out.push_back(static_cast<unsigned char>(u & 0xFF));
        out.push_back(static_cast<unsigned char>((u >> 8) & 0xFF));
        out.push_back(static_cast<unsigned char>((u >> 16) & 0xFF));
        break;
      }
      case WavEncoding::float32: {
        const auto f = static_cast<float>(v);
        std::uint32_t u;
        std::memcpy(&u, &f, sizeof u);
        put_u32(out, u);
        break;
      }
    }
  }

  if (result.clipped_samples > 0) {
    log::warn(path.string() + ": clipped " + std::to_string(result.clipped_samples) +
              " sample(s) to full scale");
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InvalidArgument("cannot write WAV file: " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw InvalidArgument("failed writing WAV file: " + path.string());
  return result;
}

WavEncoding parse_wav_encoding(const std::string& name) {
  if (name == "pcm16") return WavEncoding::pcm16;
  if (name == "pcm24") return WavEncoding::pcm24;
  if (name == "float32") return WavEncoding::float32;
  throw InvalidArgument("unknown WAV encoding '" + name + "' (expected pcm16, pcm24 or float32)");
}

}  // namespace oaekit::audio
