#include "voxenc/stimuli.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

#include "voxenc/rng.hpp"

namespace voxenc {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Inverse DFT along one axis of an N x N complex grid. O(N^3) per pass,
// plenty at the image sizes this toolkit targets.
void idft_rows(std::vector<std::complex<double>>& grid, int n) {
  std::vector<std::complex<double>> twiddle(n);
  for (int m = 0; m < n; ++m) {
    twiddle[m] = std::polar(1.0, kTwoPi * m / n);
  }
  std::vector<std::complex<double>> row(n);
  for (int r = 0; r < n; ++r) {
    std::complex<double>* base = grid.data() + static_cast<std::size_t>(r) * n;
    for (int k = 0; k < n; ++k) {
      std::complex<double> acc{0.0, 0.0};
      for (int m = 0; m < n; ++m) {
        acc += base[m] * twiddle[static_cast<std::size_t>(k) * m % n];
      }
      row[k] = acc;
    }
    for (int k = 0; k < n; ++k) base[k] = row[k];
  }
}

void transpose(std::vector<std::complex<double>>& grid, int n) {
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c)
      std::swap(grid[static_cast<std::size_t>(r) * n + c],
                grid[static_cast<std::size_t>(c) * n + r]);
}

inline double signed_frequency(int idx, int n) {
  return idx <= n / 2 ? static_cast<double>(idx) : static_cast<double>(idx - n);
}

}  // namespace

double image_mean(const Image& w) {
  double s = std::accumulate(w.pixels.begin(), w.pixels.end(), 0.0);
  return s / static_cast<double>(w.pixels.size());
}

double image_rms(const Image& w) {
  double s = 0.0;
  for (double v : w.pixels) s += v * v;
  return std::sqrt(s / static_cast<double>(w.pixels.size()));
}

Image generate_pink_noise(int size, std::uint64_t seed) {
  if (size < 2) throw std::invalid_argument("generate_pink_noise: size must be >= 2");
  Rng rng(seed);
  const int n = size;
  std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(n) * n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      const double fu = signed_frequency(u, n);
      const double fv = signed_frequency(v, n);
      const double omega = std::sqrt(fu * fu + fv * fv);
      const double phase = kTwoPi * rng.uniform();
      const double amp = omega > 0.0 ? 1.0 / omega : 0.0;  // DC removed
      spectrum[static_cast<std::size_t>(u) * n + v] = std::polar(amp, phase);
    }
  }
  idft_rows(spectrum, n);
  transpose(spectrum, n);
  idft_rows(spectrum, n);
  transpose(spectrum, n);

  Image out(n);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) out.pixels[i] = spectrum[i].real();

  const double mean = image_mean(out);
  for (double& v : out.pixels) v -= mean;
  const double rms = image_rms(out);
  if (rms > 0.0) {
    for (double& v : out.pixels) v /= rms;
  }
  return out;
}

Image scale_contrast(const Image& w, double t) {
  if (t < 0.0) throw std::invalid_argument("scale_contrast: t must be >= 0");
  Image out = w;
  for (double& v : out.pixels) v *= t;
  return out;
}

Image generate_grating(int size, double frequency, double orientation, double phase) {
  if (frequency < 0.0) throw std::invalid_argument("generate_grating: frequency must be >= 0");
  Image out(size);
  const double half = size / 2.0;
  const double c = std::cos(orientation);
  const double s = std::sin(orientation);
  for (int a = 0; a < size; ++a) {
    const double da = a - half;
    for (int b = 0; b < size; ++b) {
      const double db = b - half;
      out.at(a, b) = std::cos(kTwoPi * frequency * (da * c + db * s) / size + phase);
    }
  }
  return out;
}

Image point_stimulus(int size, int a0, int b0, double amplitude) {
  if (a0 < 0 || a0 >= size || b0 < 0 || b0 >= size)
    throw std::invalid_argument("point_stimulus: location outside image");
  Image out(size);
  out.at(a0, b0) = amplitude;
  return out;
}

Image apply_aperture(const Image& w, double radius_fraction) {
  if (!(radius_fraction > 0.0) || radius_fraction > 1.0)
    throw std::invalid_argument("apply_aperture: radius_fraction must be in (0, 1]");
  Image out = w;
  const int size = w.size;
  const double half = size / 2.0;
  const double radius = radius_fraction * half;
  const double ramp_start = 0.9 * radius;
  for (int a = 0; a < size; ++a) {
    for (int b = 0; b < size; ++b) {
      const double r = std::hypot(a - half, b - half);
      double factor;
      if (r <= ramp_start) {
        factor = 1.0;
      } else if (r >= radius) {
        factor = 0.0;
      } else {
        factor = 0.5 * (1.0 + std::cos(M_PI * (r - ramp_start) / (radius - ramp_start)));
      }
      out.at(a, b) *= factor;
    }
  }
  return out;
}

StimulusSet sample_stimulus_set(int size, int n, std::uint64_t seed, bool aperture) {
  if (n < 1) throw std::invalid_argument("sample_stimulus_set: n must be >= 1");
  StimulusSet set;
  set.seed = seed;
  set.images.reserve(n);
  for (int i = 0; i < n; ++i) {
    Image img = generate_pink_noise(size, mix_seed(seed, static_cast<std::uint64_t>(i)));
    if (aperture) img = apply_aperture(img, 1.0);
    set.images.push_back(std::move(img));
  }
  return set;
}

}  // namespace voxenc
