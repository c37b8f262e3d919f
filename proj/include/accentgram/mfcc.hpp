#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "accentgram/audio_io.hpp"
#include "accentgram/linalg.hpp"

namespace accentgram::dsp {

struct MfccConfig {
  double window_ms = 25.0;
  double hop_ms = 10.0;
  int n_mels = 128;
  int n_mfcc = 13;
  double fmin_hz = 0.0;
  std::optional<double> fmax_hz;  // defaults to Nyquist
  double log_floor = 1e-10;       // power units
  double dynamic_range_db = 80.0;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

/// Per-frame cepstra before pooling.
struct MfccMatrix {
  Matrix values;                   // n_frames × n_mfcc
  std::vector<double> frame_times; // frame centers, seconds

  std::size_t n_frames() const { return values.rows(); }
};

/// Slaney mel scale: linear below 1 kHz, logarithmic above.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

struct FrameLayout {
  std::size_t window = 0;    // Hann length in samples
  std::size_t hop = 0;
  std::size_t fft_size = 0;  // next power of two >= window

  /// 1 + floor(n_samples / hop)
  std::size_t frame_count(std::size_t n_samples) const { return 1 + n_samples / hop; }
};

FrameLayout frame_layout(int sample_rate_hz, const MfccConfig& cfg);

/// Periodic Hann of length `window`, zero-padded symmetrically to `fft_size`.
std::vector<double> centered_hann(const FrameLayout& layout);

/// Reflect-padded, Hann-windowed frames (n_frames × fft_size).
Matrix frame_and_window(const audio::AudioClip& clip, const MfccConfig& cfg);

/// In-place iterative radix-2 FFT for a fixed power-of-two size.
class Fft {
 public:
  explicit Fft(std::size_t size);
  std::size_t size() const { return size_; }
  void transform(std::span<std::complex<double>> data) const;

  /// |X_k|² for k = 0..size/2 of a real frame.
  void power(std::span<const double> frame, std::span<double> out) const;

 private:
  std::size_t size_;
  std::vector<std::complex<double>> twiddles_;
  std::vector<std::size_t> bit_reverse_;
};

/// Squared-magnitude real DFT of each row: n_frames × (fft_size/2 + 1).
Matrix power_spectrogram(const Matrix& frames);

/// Triangular mel filters (n_mels × (fft_size/2 + 1)), area-normalized.
/// Throws std::invalid_argument if fmax exceeds Nyquist or a filter covers no FFT bin.
Matrix mel_filterbank(int sample_rate_hz, std::size_t fft_size, const MfccConfig& cfg);

/// Filter edge frequencies hz_0 .. hz_{n_mels+1}.
std::vector<double> mel_edges_hz(int sample_rate_hz, const MfccConfig& cfg);

/// 10·log10(max(P, floor)), then clamped to (global max − dynamic range).
Matrix log_compress(const Matrix& mel_power, double log_floor = 1e-10, double dynamic_range_db = 80.0);

/// Orthonormal DCT-II basis rows k = 0..n_out-1 for inputs of length m.
Matrix dct2_basis(std::size_t m, std::size_t n_out);

std::vector<double> dct2_orthonormal(std::span<const double> x, std::size_t n_out);

MfccMatrix extract_mfcc(const audio::AudioClip& clip, const MfccConfig& cfg);

/// Column-wise mean over frames.
std::vector<double> pool_mean(const MfccMatrix& m);

}  // namespace accentgram::dsp
