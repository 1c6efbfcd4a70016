#ifndef VOXENC_STIMULI_HPP_
#define VOXENC_STIMULI_HPP_

#include <cstdint>
#include <vector>

namespace voxenc {

/// Square grayscale pixel grid, row-major. Pixel (a, b) is row a, column b;
/// continuous coordinates put the image center at (size/2, size/2).
struct Image {
  int size = 0;
  std::vector<double> pixels;

  Image() = default;
  Image(int size_, double fill = 0.0)
      : size(size_), pixels(static_cast<std::size_t>(size_) * size_, fill) {}

  double& at(int a, int b) { return pixels[static_cast<std::size_t>(a) * size + b]; }
  double at(int a, int b) const { return pixels[static_cast<std::size_t>(a) * size + b]; }
};

/// Ordered set of same-size images plus the seed that generated them
/// (0 when loaded from external storage).
struct StimulusSet {
  std::vector<Image> images;
  std::uint64_t seed = 0;

  int image_size() const { return images.empty() ? 0 : images.front().size; }
};

double image_mean(const Image& w);
double image_rms(const Image& w);

/// Noise image with amplitude spectrum proportional to 1/|omega| (DC removed),
/// standardized to mean 0 and RMS 1. Frequencies are in cycles per image.
Image generate_pink_noise(int size, std::uint64_t seed);

/// t * w pixelwise; for standardized w the result has RMS contrast t.
Image scale_contrast(const Image& w, double t);

/// Full-field cosine: pixel (a,b) = cos(2*pi*f*(da*cos(theta)+db*sin(theta))/size + phase)
/// with (da, db) measured from the image center. Frequency in cycles per image.
Image generate_grating(int size, double frequency, double orientation, double phase);

/// All-zero image except pixel (a0, b0) = amplitude.
Image point_stimulus(int size, int a0, int b0, double amplitude);

/// Attenuates pixels outside radius_fraction * size/2 from the center to zero,
/// with a raised-cosine ramp over the outer 10% of that radius.
Image apply_aperture(const Image& w, double radius_fraction);

/// n standardized pink-noise images (aperture-cropped when requested),
/// each generated from a per-index sub-seed of `seed`.
StimulusSet sample_stimulus_set(int size, int n, std::uint64_t seed, bool aperture);

}  // namespace voxenc

#endif  // VOXENC_STIMULI_HPP_
