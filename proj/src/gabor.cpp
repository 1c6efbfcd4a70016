#include "voxenc/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "voxenc/parallel.hpp"

namespace voxenc {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Gaussian support is clipped at 4.5 sigma (amplitude ~ 4e-5 at the cut).
constexpr double kWindowSigmas = 4.5;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

GaborBank::GaborBank(int image_size, int levels, int orientations)
    : image_size_(image_size), levels_(levels), orientations_(orientations) {
  if (levels < 1) throw std::invalid_argument("GaborBank: levels must be >= 1");
  if (orientations < 1) throw std::invalid_argument("GaborBank: orientations must be >= 1");
  const int finest_grid = 1 << (levels - 1);
  if (image_size < finest_grid)
    throw std::invalid_argument("GaborBank: image too small for the finest center grid");

  for (int level = 0; level < levels; ++level) {
    const int grid = 1 << level;
    const double cell = static_cast<double>(image_size) / grid;
    const double frequency = std::ldexp(1.0, level);  // 2^level cycles per image
    const double sigma = cell / 2.5;
    const int half_window = static_cast<int>(std::ceil(kWindowSigmas * sigma));
    for (int gi = 0; gi < grid; ++gi) {
      for (int gj = 0; gj < grid; ++gj) {
        const double center_a = (gi + 0.5) * cell;
        const double center_b = (gj + 0.5) * cell;
        for (int k = 0; k < orientations; ++k) {
          const double theta = k * M_PI / orientations;
          GaborParams p;
          p.level = level;
          p.orientation = theta;
          p.center_a = center_a;
          p.center_b = center_b;
          p.frequency = frequency;
          p.sigma_parallel = sigma;
          p.sigma_orthogonal = sigma;
          params_.push_back(p);

          Patch patch;
          patch.row0 = std::max(0, static_cast<int>(std::floor(center_a)) - half_window);
          patch.col0 = std::max(0, static_cast<int>(std::floor(center_b)) - half_window);
          const int row1 = std::min(image_size - 1,
                                    static_cast<int>(std::ceil(center_a)) + half_window);
          const int col1 = std::min(image_size - 1,
                                    static_cast<int>(std::ceil(center_b)) + half_window);
          patch.rows = row1 - patch.row0 + 1;
          patch.cols = col1 - patch.col0 + 1;
          patch.re.resize(static_cast<std::size_t>(patch.rows) * patch.cols);
          patch.im.resize(patch.re.size());

          const double cos_t = std::cos(theta);
          const double sin_t = std::sin(theta);
          double sum_re = 0.0, sum_im = 0.0;
          for (int r = 0; r < patch.rows; ++r) {
            const double da = (patch.row0 + r) - center_a;
            for (int c = 0; c < patch.cols; ++c) {
              const double db = (patch.col0 + c) - center_b;
              const double along = da * cos_t + db * sin_t;
              const double across = -da * sin_t + db * cos_t;
              const double envelope =
                  std::exp(-0.5 * (along * along / (sigma * sigma) +
                                   across * across / (sigma * sigma)));
              const double arg = kTwoPi * frequency * along / image_size;
              const std::size_t idx = static_cast<std::size_t>(r) * patch.cols + c;
              patch.re[idx] = envelope * std::cos(arg);
              patch.im[idx] = envelope * std::sin(arg);
              sum_re += patch.re[idx];
              sum_im += patch.im[idx];
            }
          }
          // Mean-subtract within the window; pixels outside are identically
          // zero, so the full-image sum of each grid is exactly zero.
          const double npix = static_cast<double>(patch.re.size());
          const double mean_re = sum_re / npix;
          const double mean_im = sum_im / npix;
          double norm2 = 0.0;
          for (std::size_t i = 0; i < patch.re.size(); ++i) {
            patch.re[i] -= mean_re;
            patch.im[i] -= mean_im;
            norm2 += patch.re[i] * patch.re[i] + patch.im[i] * patch.im[i];
          }
          const double norm = std::sqrt(norm2);
          if (norm > 0.0) {
            for (std::size_t i = 0; i < patch.re.size(); ++i) {
              patch.re[i] /= norm;
              patch.im[i] /= norm;
            }
          }
          patches_.push_back(std::move(patch));
        }
      }
    }
  }

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "gabor-v1:size=%d:levels=%d:orient=%d:f0=1:sigma=2.5:count=%zu",
                image_size, levels, orientations, params_.size());
  std::uint64_t h = fnv1a(buf);
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  hash_ = hex;
}

Eigen::VectorXd GaborBank::contrast_energy(const Image& s) const {
  if (s.size != image_size_)
    throw std::invalid_argument("contrast_energy: image size does not match bank");
  Eigen::VectorXd out(static_cast<Eigen::Index>(patches_.size()));
  for (std::size_t j = 0; j < patches_.size(); ++j) {
    const Patch& patch = patches_[j];
    double dot_re = 0.0, dot_im = 0.0;
    std::size_t idx = 0;
    for (int r = 0; r < patch.rows; ++r) {
      const double* pix = s.pixels.data() +
                          static_cast<std::size_t>(patch.row0 + r) * image_size_ + patch.col0;
      for (int c = 0; c < patch.cols; ++c, ++idx) {
        dot_re += patch.re[idx] * pix[c];
        dot_im += patch.im[idx] * pix[c];
      }
    }
    out[static_cast<Eigen::Index>(j)] = dot_re * dot_re + dot_im * dot_im;
  }
  return out;
}

double GaborBank::stored_grid_mean(std::size_t j, bool imaginary) const {
  const Patch& patch = patches_[j];
  const std::vector<double>& g = imaginary ? patch.im : patch.re;
  double s = 0.0;
  for (double v : g) s += v;
  return s / static_cast<double>(g.size());
}

std::string to_string(FeatureTransform t) {
  switch (t) {
    case FeatureTransform::raw: return "raw";
    case FeatureTransform::sqrt: return "sqrt";
    case FeatureTransform::log1psqrt: return "log1psqrt";
  }
  return "raw";
}

FeatureTransform feature_transform_from_string(const std::string& s) {
  if (s == "raw") return FeatureTransform::raw;
  if (s == "sqrt") return FeatureTransform::sqrt;
  if (s == "log1psqrt") return FeatureTransform::log1psqrt;
  throw std::invalid_argument("unknown feature transform: " + s);
}

FeatureMatrix transform_features(const FeatureMatrix& raw, FeatureTransform kind) {
  if (raw.transform != FeatureTransform::raw)
    throw std::logic_error("transform_features: input matrix is already transformed");
  if (kind == FeatureTransform::raw)
    throw std::invalid_argument("transform_features: kind must be sqrt or log1psqrt");
  FeatureMatrix out;
  out.transform = kind;
  out.bank_hash = raw.bank_hash;
  if (kind == FeatureTransform::sqrt) {
    out.values = raw.values.array().sqrt();
  } else {
    out.values = (raw.values.array().sqrt() + 1.0).log();
  }
  return out;
}

FeatureMatrix featurize_set(const GaborBank& bank, const StimulusSet& stimuli, int jobs) {
  if (stimuli.images.empty())
    throw std::invalid_argument("featurize_set: empty stimulus set");
  if (stimuli.image_size() != bank.image_size())
    throw std::invalid_argument("featurize_set: stimulus size does not match bank");
  FeatureMatrix out;
  out.transform = FeatureTransform::raw;
  out.bank_hash = bank.hash();
  out.values.resize(static_cast<Eigen::Index>(stimuli.images.size()),
                    static_cast<Eigen::Index>(bank.size()));
  parallel_for(stimuli.images.size(), jobs, [&](std::size_t i) {
    out.values.row(static_cast<Eigen::Index>(i)) =
        bank.contrast_energy(stimuli.images[i]).transpose();
  });
  return out;
}

}  // namespace voxenc
