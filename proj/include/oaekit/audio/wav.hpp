#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "oaekit/audio/sample_buffer.hpp"

namespace oaekit::audio {

enum class WavEncoding { pcm16, pcm24, float32 };

// Reads a RIFF/WAVE file (PCM 16/24-bit or IEEE float32, any channel count).
// Multi-channel input is downmixed by averaging channels. Integer PCM is
// scaled by 2^-(bits-1), so +32767 reads as 32767/32768.
SampleBuffer load_wav(const std::filesystem::path& path);

struct WavWriteResult {
  std::size_t clipped_samples = 0;
};

// Writes a mono file. Samples outside [-1, 1] are clipped to the range and a
// warning is logged; the count is returned.
WavWriteResult save_wav(const SampleBuffer& buffer, const std::filesystem::path& path,
                        WavEncoding encoding = WavEncoding::float32);

WavEncoding parse_wav_encoding(const std::string& name);

}  // namespace oaekit::audio
