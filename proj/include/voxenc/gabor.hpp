#ifndef VOXENC_GABOR_HPP_
#define VOXENC_GABOR_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "voxenc/stimuli.hpp"

namespace voxenc {

/// Static parameters of one complex Gabor wavelet.
struct GaborParams {
  int level = 0;               // scale index, 0 = coarsest
  double orientation = 0.0;    // radians
  double center_a = 0.0;       // pixels, row coordinate
  double center_b = 0.0;       // pixels, column coordinate
  double frequency = 0.0;      // cycles per image
  double sigma_parallel = 0.0;
  double sigma_orthogonal = 0.0;
};

/// Multi-scale, multi-orientation bank of complex Gabor wavelets.
///
/// Scale l tiles the image with a 2^l x 2^l grid of centers at fractions
/// (i + 1/2) / 2^l; orientations are k*pi/orientations. The carrier frequency
/// at scale l is 2^l cycles per image and sigma = (size / 2^l) / 2.5 pixels.
/// Each wavelet's real and imaginary grids are mean-subtracted (making the
/// contrast-energy features exactly invariant to constant offsets) and the
/// complex pair is normalized to unit L2 norm. Grids are stored on a clipped
/// window around the Gaussian envelope.
class GaborBank {
 public:
  GaborBank(int image_size, int levels, int orientations);

  int image_size() const { return image_size_; }
  int levels() const { return levels_; }
  int orientations() const { return orientations_; }
  std::size_t size() const { return params_.size(); }
  const GaborParams& params(std::size_t j) const { return params_[j]; }

  /// Contrast energy of image s against every wavelet:
  /// X_j = (sum Re g_j * s)^2 + (sum Im g_j * s)^2.
  Eigen::VectorXd contrast_energy(const Image& s) const;

  /// Checksum of the bank construction parameters; ties feature matrices
  /// to the bank that produced them.
  const std::string& hash() const { return hash_; }

  /// Mean of a stored (windowed) grid; every grid is mean-subtracted.
  double stored_grid_mean(std::size_t j, bool imaginary) const;

 private:
  struct Patch {
    int row0 = 0, col0 = 0, rows = 0, cols = 0;  // window within the image
    std::vector<double> re, im;                  // row-major over the window
  };

  int image_size_;
  int levels_;
  int orientations_;
  std::vector<GaborParams> params_;
  std::vector<Patch> patches_;
  std::string hash_;
};

enum class FeatureTransform { raw, sqrt, log1psqrt };

std::string to_string(FeatureTransform t);
FeatureTransform feature_transform_from_string(const std::string& s);

/// n stimuli x p contrast-energy features, raw or transformed.
struct FeatureMatrix {
  Eigen::MatrixXd values;  // n x p
  FeatureTransform transform = FeatureTransform::raw;
  std::string bank_hash;

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index p() const { return values.cols(); }
};

/// Elementwise sqrt(x) or log(1 + sqrt(x)); input must be raw.
FeatureMatrix transform_features(const FeatureMatrix& raw, FeatureTransform kind);

/// Row i = contrast_energy of image i. Rows may be computed in parallel.
FeatureMatrix featurize_set(const GaborBank& bank, const StimulusSet& stimuli, int jobs = 1);

}  // namespace voxenc

#endif  // VOXENC_GABOR_HPP_
