#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace accentgram::audio {

/// Decoded mono waveform. Samples are in [-1, 1]; the rate is the file's native rate.
struct AudioClip {
  std::vector<double> samples;
  int sample_rate_hz = 0;
  std::string source_id;

  double duration_s() const {
    return sample_rate_hz > 0 ? static_cast<double>(samples.size()) / sample_rate_hz : 0.0;
  }
};

/// Reads a RIFF/WAVE file holding integer PCM (8/16/24/32 bit) or IEEE float
/// (32/64 bit). Multi-channel data is averaged to mono. Throws InputError with
/// the path and byte offset on malformed or unsupported files.
AudioClip load_wav(const std::filesystem::path& path);

/// Same as load_wav, on an in-memory file image. `source_id` is used in errors.
AudioClip decode_wav(std::span<const std::uint8_t> bytes, const std::string& source_id);

}  // namespace accentgram::audio
