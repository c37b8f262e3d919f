#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "accentgram/rng.hpp"

namespace fixtures {
namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

std::vector<std::uint8_t> wav_image(std::uint16_t format_code, std::uint16_t bits, std::uint16_t channels,
                                    std::uint32_t sample_rate, const std::vector<std::uint8_t>& payload,
                                    bool with_list_chunk) {
  std::vector<std::uint8_t> body;
  put_tag(body, "WAVE");
  put_tag(body, "fmt ");
  put_u32(body, 16);
  put_u16(body, format_code);
  put_u16(body, channels);
  put_u32(body, sample_rate);
  const std::uint16_t block = static_cast<std::uint16_t>(channels * bits / 8);
  put_u32(body, sample_rate * block);
  put_u16(body, block);
  put_u16(body, bits);
  if (with_list_chunk) {
    put_tag(body, "LIST");
    put_u32(body, 5);
    for (char ch : std::string("INFOx")) body.push_back(static_cast<std::uint8_t>(ch));
    body.push_back(0);  // pad byte
  }
  put_tag(body, "data");
  put_u32(body, static_cast<std::uint32_t>(payload.size()));
  body.insert(body.end(), payload.begin(), payload.end());

  std::vector<std::uint8_t> out;
  put_tag(out, "RIFF");
  put_u32(out, static_cast<std::uint32_t>(body.size()));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

std::vector<std::uint8_t> pcm16_payload(const std::vector<std::int16_t>& interleaved) {
  std::vector<std::uint8_t> out;
  for (std::int16_t s : interleaved) put_u16(out, static_cast<std::uint16_t>(s));
  return out;
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_pcm16_wav(const std::filesystem::path& path, const std::vector<double>& samples, std::uint32_t rate) {
  std::vector<std::int16_t> q;
  for (double s : samples) {
    const double v = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    q.push_back(static_cast<std::int16_t>(v));
  }
  write_file(path, wav_image(1, 16, 1, rate, pcm16_payload(q)));
}

accentgram::GroupedData normal_groups(std::uint64_t seed, std::size_t n_a, std::size_t n_b, std::size_t p,
                                      const std::vector<double>& shifts, const std::vector<double>& scale_b) {
  accentgram::Rng rng(seed);
  std::vector<std::vector<double>> a(n_a, std::vector<double>(p)), b(n_b, std::vector<double>(p));
  for (auto& row : a)
    for (double& v : row) v = rng.normal();
  for (auto& row : b)
    for (std::size_t j = 0; j < p; ++j) {
      const double scale = j < scale_b.size() ? scale_b[j] : 1.0;
      row[j] = rng.normal() * scale + (j < shifts.size() ? shifts[j] : 0.0);
    }
  return accentgram::make_grouped(a, b, {"english", "mandarin"});
}

std::vector<accentgram::SpeakerRecord> to_records(const accentgram::GroupedData& data) {
  std::vector<accentgram::SpeakerRecord> out;
  for (std::size_t i = 0; i < data.n(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "spk%04zu", i);
    const auto row = data.x.row(i);
    out.push_back({id, data.labels[static_cast<std::size_t>(data.group[i])], {row.begin(), row.end()}});
  }
  return out;
}

TempDir::TempDir(const std::string& tag) {
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("accentgram_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace fixtures

namespace fixtures {

bool well_formed_xml(const std::string& text, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::vector<std::string> stack;
  std::size_t i = 0;
  bool seen_root = false;
  while (i < text.size()) {
    if (text[i] == '&') {
      const auto semi = text.find(';', i);
      if (semi == std::string::npos) return fail("unterminated entity");
      const std::string ent = text.substr(i, semi - i + 1);
      if (ent != "&amp;" && ent != "&lt;" && ent != "&gt;" && ent != "&quot;" && ent != "&apos;")
        return fail("unknown entity " + ent);
      i = semi + 1;
      continue;
    }
    if (text[i] != '<') {
      ++i;
      continue;
    }
    const auto close = text.find('>', i);
    if (close == std::string::npos) return fail("unterminated tag");
    std::string tag = text.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.starts_with("?") || tag.starts_with("!--")) continue;
    if (tag.starts_with("/")) {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return fail("mismatched </" + name + ">");
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.ends_with("/");
    if (self_closing) tag.pop_back();
    const auto space = tag.find_first_of(" \t\n");
    const std::string name = tag.substr(0, space);
    if (name.empty()) return fail("empty tag name");
    if (stack.empty()) {
      if (seen_root) return fail("second root element");
      seen_root = true;
    }
    int quotes = 0;
    for (char c : tag) {
      if (c == '"') ++quotes;
      if (c == '<') return fail("'<' inside tag " + name);
    }
    if (quotes % 2 != 0) return fail("unbalanced quotes in " + name);
    if (!self_closing) stack.push_back(name);
  }
  if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
  if (!seen_root) return fail("no root element");
  return true;
}

}  // namespace fixtures
