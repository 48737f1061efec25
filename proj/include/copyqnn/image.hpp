#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace copyqnn::data {

/// Row-major grayscale image with values in [0, 1].
struct ImageSample {
    std::vector<double> pixels;
    int width = 0;
    int height = 0;
    std::optional<int> label;

    static ImageSample constant(int w, int h, double value, std::optional<int> label = {});
    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double &at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

enum class AugmentMethod { Jitter, Rotation, Crop, Flip };

std::string to_string(AugmentMethod m);
AugmentMethod augment_method_from_string(const std::string &s);

/// One transform family per config; parameter ranges are fixed so 16x16
/// digits stay legible.
struct AugmentConfig {
    AugmentMethod method = AugmentMethod::Jitter;
    bool gaussian_blur = false;
    std::uint64_t rng_seed = 0;

    double brightness_range = 0.2;   // additive, +-
    double contrast_lo = 0.8;        // multiplicative factor range
    double contrast_hi = 1.25;
    double rotation_deg = 15.0;      // +-
    double crop_min_area = 0.75;     // retained area fraction
    double blur_sigma_lo = 0.1;
    double blur_sigma_hi = 1.0;
};

/// Corner-aligned bilinear interpolation; a 1-pixel output dimension
/// samples the source center.
ImageSample bilinear_downsample(const ImageSample &img, int out_w, int out_h);

/// One random draw of the configured transform (plus optional blur).
ImageSample augment_once(const ImageSample &img, const AugmentConfig &cfg,
                         std::mt19937_64 &gen);

/// The two correlated views of the same source: two independent draws.
std::pair<ImageSample, ImageSample> augment_pair(const ImageSample &img,
                                                 const AugmentConfig &cfg,
                                                 std::mt19937_64 &gen);

/// Seeds a generator from cfg.rng_seed alone and draws the pair.
std::pair<ImageSample, ImageSample> augment_pair(const ImageSample &img,
                                                 const AugmentConfig &cfg);

/// Brightness/contrast affine: clamp(contrast * pix + brightness).
ImageSample jitter(const ImageSample &img, double contrast, double brightness);
/// Rotation about the image center, bilinear, zero padding outside.
ImageSample rotate(const ImageSample &img, double degrees);
/// Crops a window of `area_fraction` of the source at the given offset
/// (fractions of the slack), then resizes back to the source dimensions.
ImageSample crop_resize(const ImageSample &img, double area_fraction, double off_x,
                        double off_y);
ImageSample flip_horizontal(const ImageSample &img);
/// Normalized Gaussian kernel, zero padding; mass is preserved for interior
/// support.
ImageSample gaussian_blur(const ImageSample &img, double sigma);

/// Convex combination of two samples and their soft labels with
/// lambda ~ Beta(alpha, alpha).
struct SoftLabeled {
    ImageSample image;
    std::vector<double> soft_label;
};

SoftLabeled mixup_with_lambda(const SoftLabeled &a, const SoftLabeled &b, double lambda);
SoftLabeled mixup(const SoftLabeled &a, const SoftLabeled &b, double alpha,
                  std::mt19937_64 &gen);

/// Binary PGM dump for eyeballing augmented pairs.
void write_pgm(const ImageSample &img, const std::filesystem::path &path);

/// Row-major pixel vector (the encoder input).
std::vector<double> flatten(const ImageSample &img);

} // namespace copyqnn::data
