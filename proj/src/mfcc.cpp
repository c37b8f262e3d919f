#include "accentgram/mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "accentgram/error.hpp"

namespace accentgram::dsp {
namespace {

constexpr double kMelMinLogHz = 1000.0;
constexpr double kHzPerMelLinear = 200.0 / 3.0;
constexpr double kMelMinLog = kMelMinLogHz / kHzPerMelLinear;  // 15
const double kLogStep = std::log(6.4) / 27.0;

// Reflect (without repeating the edge sample) into [0, n).
std::size_t reflect_index(long long i, std::size_t n) {
  if (n == 1) return 0;
  const long long period = 2 * static_cast<long long>(n - 1);
  long long k = i % period;
  if (k < 0) k += period;
  if (k >= static_cast<long long>(n)) k = period - k;
  return static_cast<std::size_t>(k);
}

void fill_frame(std::span<const double> x, const FrameLayout& layout, std::span<const double> window,
                std::size_t t, std::span<double> out) {
  const long long start = static_cast<long long>(t * layout.hop) - static_cast<long long>(layout.fft_size / 2);
  for (std::size_t j = 0; j < layout.fft_size; ++j) {
    out[j] = window[j] == 0.0 ? 0.0 : window[j] * x[reflect_index(start + static_cast<long long>(j), x.size())];
  }
}

}  // namespace

void MfccConfig::validate() const {
  if (!(window_ms > 0)) throw std::invalid_argument("window_ms must be positive");
  if (!(hop_ms > 0)) throw std::invalid_argument("hop_ms must be positive");
  if (hop_ms > window_ms) throw std::invalid_argument("hop_ms must not exceed window_ms");
  if (n_mels < 1) throw std::invalid_argument("n_mels must be positive");
  if (n_mfcc < 1 || n_mfcc > n_mels) throw std::invalid_argument("n_mfcc must be in [1, n_mels]");
  if (!(fmin_hz >= 0)) throw std::invalid_argument("fmin_hz must be non-negative");
  if (fmax_hz && !(*fmax_hz > fmin_hz)) throw std::invalid_argument("fmax_hz must exceed fmin_hz");
  if (!(log_floor > 0)) throw std::invalid_argument("log_floor must be positive");
  if (!(dynamic_range_db > 0)) throw std::invalid_argument("dynamic_range_db must be positive");
}

double hz_to_mel(double hz) {
  if (!(hz >= 0)) throw std::invalid_argument("hz_to_mel: negative frequency");
  if (hz < kMelMinLogHz) return hz / kHzPerMelLinear;
  return kMelMinLog + std::log(hz / kMelMinLogHz) / kLogStep;
}

double mel_to_hz(double mel) {
  if (mel < kMelMinLog) return mel * kHzPerMelLinear;
  return kMelMinLogHz * std::exp(kLogStep * (mel - kMelMinLog));
}

FrameLayout frame_layout(int sample_rate_hz, const MfccConfig& cfg) {
  cfg.validate();
  if (sample_rate_hz <= 0) throw std::invalid_argument("sample rate must be positive");
  FrameLayout layout;
  // Ties round to even: 25 ms at 44.1 kHz is 1102.5 samples → 1102.
  layout.window = static_cast<std::size_t>(std::nearbyint(cfg.window_ms * sample_rate_hz / 1000.0));
  layout.hop = static_cast<std::size_t>(std::nearbyint(cfg.hop_ms * sample_rate_hz / 1000.0));
  if (layout.window == 0 || layout.hop == 0) {
    throw std::invalid_argument("window or hop rounds to zero samples at this sample rate");
  }
  layout.fft_size = 1;
  while (layout.fft_size < layout.window) layout.fft_size <<= 1;
  return layout;
}

std::vector<double> centered_hann(const FrameLayout& layout) {
  std::vector<double> w(layout.fft_size, 0.0);
  const std::size_t offset = (layout.fft_size - layout.window) / 2;
  const double n = static_cast<double>(layout.window);
  for (std::size_t i = 0; i < layout.window; ++i) {
    w[offset + i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n));
  }
  return w;
}

Matrix frame_and_window(const audio::AudioClip& clip, const MfccConfig& cfg) {
  if (clip.samples.empty()) throw InputError(clip.source_id + ": clip has no samples");
  const FrameLayout layout = frame_layout(clip.sample_rate_hz, cfg);
  const auto window = centered_hann(layout);
  const std::size_t n_frames = layout.frame_count(clip.samples.size());
  Matrix frames(n_frames, layout.fft_size);
  for (std::size_t t = 0; t < n_frames; ++t) fill_frame(clip.samples, layout, window, t, frames.row(t));
  return frames;
}

Fft::Fft(std::size_t size) : size_(size), twiddles_(size / 2), bit_reverse_(size) {
  if (size == 0 || (size & (size - 1)) != 0) throw std::invalid_argument("FFT size must be a power of two");
  for (std::size_t k = 0; k < size / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(size);
    twiddles_[k] = {std::cos(angle), std::sin(angle)};
  }
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < size) ++bits;
  for (std::size_t i = 0; i < size; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    bit_reverse_[i] = r;
  }
}

void Fft::transform(std::span<std::complex<double>> data) const {
  if (data.size() != size_) throw std::invalid_argument("FFT input has wrong length");
  for (std::size_t i = 0; i < size_; ++i)
    if (i < bit_reverse_[i]) std::swap(data[i], data[bit_reverse_[i]]);
  for (std::size_t len = 2; len <= size_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = size_ / len;
    for (std::size_t start = 0; start < size_; start += len)
      for (std::size_t k = 0; k < half; ++k) {
        const std::complex<double> u = data[start + k];
        const std::complex<double> v = data[start + k + half] * twiddles_[k * stride];
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
  }
}

void Fft::power(std::span<const double> frame, std::span<double> out) const {
  std::vector<std::complex<double>> buf(frame.begin(), frame.end());
  transform(buf);
  for (std::size_t k = 0; k <= size_ / 2; ++k) out[k] = std::norm(buf[k]);
}

Matrix power_spectrogram(const Matrix& frames) {
  const Fft fft(frames.cols());
  Matrix out(frames.rows(), frames.cols() / 2 + 1);
  for (std::size_t t = 0; t < frames.rows(); ++t) fft.power(frames.row(t), out.row(t));
  return out;
}

std::vector<double> mel_edges_hz(int sample_rate_hz, const MfccConfig& cfg) {
  const double nyquist = sample_rate_hz / 2.0;
  const double fmax = cfg.fmax_hz.value_or(nyquist);
  if (fmax > nyquist) throw std::invalid_argument("fmax_hz exceeds the Nyquist frequency");
  const double lo = hz_to_mel(cfg.fmin_hz);
  const double hi = hz_to_mel(fmax);
  const std::size_t n_edges = static_cast<std::size_t>(cfg.n_mels) + 2;
  std::vector<double> edges(n_edges);
  for (std::size_t i = 0; i < n_edges; ++i) {
    edges[i] = mel_to_hz(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_edges - 1));
  }
  return edges;
}

Matrix mel_filterbank(int sample_rate_hz, std::size_t fft_size, const MfccConfig& cfg) {
  cfg.validate();
  const auto edges = mel_edges_hz(sample_rate_hz, cfg);
  const std::size_t n_bins = fft_size / 2 + 1;
  Matrix fb(static_cast<std::size_t>(cfg.n_mels), n_bins);
  for (std::size_t i = 0; i < fb.rows(); ++i) {
    const double lo = edges[i], mid = edges[i + 1], hi = edges[i + 2];
    const double norm = 2.0 / (hi - lo);
    bool any = false;
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate_hz / static_cast<double>(fft_size);
      const double rising = (f - lo) / (mid - lo);
      const double falling = (hi - f) / (hi - mid);
      const double w = std::max(0.0, std::min(rising, falling));
      fb(i, k) = w * norm;
      any = any || w > 0.0;
    }
    if (!any) {
      throw std::invalid_argument("mel filter " + std::to_string(i) +
                                  " covers no FFT bin; reduce n_mels or lengthen the window");
    }
  }
  return fb;
}

Matrix log_compress(const Matrix& mel_power, double log_floor, double dynamic_range_db) {
  Matrix out(mel_power.rows(), mel_power.cols());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c) {
      const double v = 10.0 * std::log10(std::max(mel_power(r, c), log_floor));
      out(r, c) = v;
      peak = std::max(peak, v);
    }
  const double lowest = peak - dynamic_range_db;
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (double& v : out.row(r)) v = std::max(v, lowest);
  return out;
}

Matrix dct2_basis(std::size_t m, std::size_t n_out) {
  Matrix basis(n_out, m);
  const double md = static_cast<double>(m);
  for (std::size_t k = 0; k < n_out; ++k) {
    const double w = k == 0 ? std::sqrt(1.0 / md) : std::sqrt(2.0 / md);
    for (std::size_t j = 0; j < m; ++j) {
      basis(k, j) = w * std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * static_cast<double>(j) + 1.0) / (2.0 * md));
    }
  }
  return basis;
}

std::vector<double> dct2_orthonormal(std::span<const double> x, std::size_t n_out) {
  if (n_out > x.size()) throw std::invalid_argument("DCT: more outputs than inputs");
  const Matrix basis = dct2_basis(x.size(), n_out);
  std::vector<double> c(n_out, 0.0);
  for (std::size_t k = 0; k < n_out; ++k)
    for (std::size_t j = 0; j < x.size(); ++j) c[k] += basis(k, j) * x[j];
  return c;
}

MfccMatrix extract_mfcc(const audio::AudioClip& clip, const MfccConfig& cfg) {
  if (clip.samples.empty()) throw InputError(clip.source_id + ": clip has no samples");
  const FrameLayout layout = frame_layout(clip.sample_rate_hz, cfg);
  const auto window = centered_hann(layout);
  const Matrix fb = mel_filterbank(clip.sample_rate_hz, layout.fft_size, cfg);
  const Fft fft(layout.fft_size);
  const std::size_t n_frames = layout.frame_count(clip.samples.size());
  const std::size_t n_bins = layout.fft_size / 2 + 1;

  // Frames are streamed so long recordings never hold the full frame matrix.
  Matrix mel_power(n_frames, fb.rows());
  std::vector<double> frame(layout.fft_size), spectrum(n_bins);
  for (std::size_t t = 0; t < n_frames; ++t) {
    fill_frame(clip.samples, layout, window, t, frame);
    fft.power(frame, spectrum);
    auto out = mel_power.row(t);
    for (std::size_t m = 0; m < fb.rows(); ++m) {
      const auto weights = fb.row(m);
      double s = 0.0;
      for (std::size_t k = 0; k < n_bins; ++k) s += weights[k] * spectrum[k];
      out[m] = s;
    }
  }

  const Matrix log_mel = log_compress(mel_power, cfg.log_floor, cfg.dynamic_range_db);
  const Matrix basis = dct2_basis(fb.rows(), static_cast<std::size_t>(cfg.n_mfcc));
  MfccMatrix result;
  result.values = log_mel * basis.transposed();
  result.frame_times.resize(n_frames);
  for (std::size_t t = 0; t < n_frames; ++t) {
    result.frame_times[t] = static_cast<double>(t * layout.hop) / clip.sample_rate_hz;
  }
  for (double v : result.values.data())
    if (!std::isfinite(v)) throw NumericalError(clip.source_id + ": non-finite MFCC value");
  return result;
}

std::vector<double> pool_mean(const MfccMatrix& m) {
  if (m.values.rows() == 0) throw std::invalid_argument("pool_mean: empty MFCC matrix");
  std::vector<double> mean(m.values.cols(), 0.0);
  for (std::size_t t = 0; t < m.values.rows(); ++t) {
    const auto row = m.values.row(t);
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += row[k];
  }
  for (double& v : mean) v /= static_cast<double>(m.values.rows());
  return mean;
}

}  // namespace accentgram::dsp
