#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "accentgram/dataset.hpp"

namespace fixtures {

/// Minimal RIFF/WAVE writer, kept separate from the library's reader.
/// `payload` is the raw interleaved sample bytes.
std::vector<std::uint8_t> wav_image(std::uint16_t format_code, std::uint16_t bits, std::uint16_t channels,
                                    std::uint32_t sample_rate, const std::vector<std::uint8_t>& payload,
                                    bool with_list_chunk = false);

std::vector<std::uint8_t> pcm16_payload(const std::vector<std::int16_t>& interleaved);

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

/// Writes a mono 16-bit file from amplitudes in [-1, 1] (rounded, clipped).
void write_pcm16_wav(const std::filesystem::path& path, const std::vector<double>& samples, std::uint32_t rate);

/// Two groups of i.i.d. N(0, 1) features; feature j (0-based) of group 1 is
/// shifted by shifts[j] (missing entries are 0).
accentgram::GroupedData normal_groups(std::uint64_t seed, std::size_t n_a, std::size_t n_b, std::size_t p,
                                      const std::vector<double>& shifts = {},
                                      const std::vector<double>& scale_b = {});

std::vector<accentgram::SpeakerRecord> to_records(const accentgram::GroupedData& data);

/// Unique scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures

namespace fixtures {

/// Minimal well-formedness check: balanced tags, quoted attributes, no stray
/// '<' or '&'. Enough to catch broken SVG output.
bool well_formed_xml(const std::string& text, std::string* why = nullptr);

}  // namespace fixtures
