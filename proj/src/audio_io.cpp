#include "accentgram/audio_io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

#include "accentgram/error.hpp"

namespace accentgram::audio {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

[[noreturn]] void fail(const std::string& source, std::size_t offset, const std::string& what) {
  std::ostringstream os;
  os << source << ": " << what << " (byte offset " << offset << ")";
  throw InputError(os.str());
}

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

struct Format {
  std::uint16_t code = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

double decode_sample(const std::uint8_t* p, const Format& fmt) {
  if (fmt.code == kFormatFloat) {
    if (fmt.bits == 32) {
      float f;
      std::uint32_t u = read_u32(p);
      std::memcpy(&f, &u, sizeof f);
      return static_cast<double>(f);
    }
    std::uint64_t u = static_cast<std::uint64_t>(read_u32(p)) |
                      (static_cast<std::uint64_t>(read_u32(p + 4)) << 32);
    double d;
    std::memcpy(&d, &u, sizeof d);
    return d;
  }
  switch (fmt.bits) {
    case 8:
      return (static_cast<double>(p[0]) - 128.0) / 128.0;
    case 16:
      return static_cast<double>(static_cast<std::int16_t>(read_u16(p))) / 32768.0;
    case 24: {
      std::int32_t v = static_cast<std::int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
      if (v & 0x800000) v -= 0x1000000;
      return static_cast<double>(v) / 8388608.0;
    }
    default:
      return static_cast<double>(static_cast<std::int32_t>(read_u32(p))) / 2147483648.0;
  }
}

}  // namespace

AudioClip decode_wav(std::span<const std::uint8_t> bytes, const std::string& source_id) {
  const std::size_t size = bytes.size();
  const std::uint8_t* data = bytes.data();
  if (size < 12 || std::memcmp(data, "RIFF", 4) != 0) fail(source_id, 0, "missing RIFF header");
  if (std::memcmp(data + 8, "WAVE", 4) != 0) fail(source_id, 8, "RIFF form type is not WAVE");

  std::optional<Format> fmt;
  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const std::uint8_t* chunk = data + pos;
    const std::uint32_t chunk_size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;

    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16 || body + 16 > size) fail(source_id, pos, "truncated fmt chunk");
      Format f;
      f.code = read_u16(data + body);
      f.channels = read_u16(data + body + 2);
      f.sample_rate = read_u32(data + body + 4);
      f.block_align = read_u16(data + body + 12);
      f.bits = read_u16(data + body + 14);
      if (f.code == kFormatExtensible) {
        if (chunk_size < 40 || body + 40 > size) fail(source_id, pos, "truncated extensible fmt chunk");
        // First two bytes of the sub-format GUID carry the underlying codec tag.
        f.code = read_u16(data + body + 24);
      }
      if (f.code != kFormatPcm && f.code != kFormatFloat) {
        fail(source_id, body, "unsupported codec tag " + std::to_string(f.code));
      }
      const bool bits_ok = f.code == kFormatPcm
                               ? (f.bits == 8 || f.bits == 16 || f.bits == 24 || f.bits == 32)
                               : (f.bits == 32 || f.bits == 64);
      if (!bits_ok) fail(source_id, body + 14, "unsupported bit depth " + std::to_string(f.bits));
      if (f.channels == 0) fail(source_id, body + 2, "zero channels");
      if (f.sample_rate == 0) fail(source_id, body + 4, "zero sample rate");
      if (f.block_align != f.channels * (f.bits / 8)) {
        fail(source_id, body + 12, "block alignment inconsistent with channels and bit depth");
      }
      fmt = f;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!fmt) fail(source_id, pos, "data chunk precedes fmt chunk");
      if (chunk_size == 0) fail(source_id, pos, "zero-length data chunk");
      if (body + chunk_size > size) fail(source_id, size, "truncated data chunk");
      if (chunk_size % fmt->block_align != 0) {
        fail(source_id, body + chunk_size - chunk_size % fmt->block_align,
             "data chunk ends mid-frame");
      }

      const std::size_t n_frames = chunk_size / fmt->block_align;
      const std::size_t width = fmt->bits / 8;
      AudioClip clip;
      clip.sample_rate_hz = static_cast<int>(fmt->sample_rate);
      clip.source_id = source_id;
      clip.samples.resize(n_frames);
      const std::uint8_t* p = data + body;
      for (std::size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (std::uint16_t c = 0; c < fmt->channels; ++c, p += width) acc += decode_sample(p, *fmt);
        double v = acc / fmt->channels;
        if (!(v >= -1.0)) v = -1.0;  // also maps NaN from float files
        clip.samples[i] = std::min(v, 1.0);
      }
      return clip;
    }
    // Skip LIST, fact, and anything else; chunks are word-aligned.
    pos = body + chunk_size + (chunk_size & 1u);
  }
  if (!fmt) fail(source_id, std::min(pos, size), "no fmt chunk");
  fail(source_id, std::min(pos, size), "no data chunk");
}

AudioClip load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file (byte offset 0)");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_wav(bytes, path.string());
}

}  // namespace accentgram::audio
