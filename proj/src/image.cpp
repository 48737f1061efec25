#include "copyqnn/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "copyqnn/errors.hpp"

namespace copyqnn::data {

ImageSample ImageSample::constant(int w, int h, double value, std::optional<int> label) {
    ImageSample img;
    img.width = w;
    img.height = h;
    img.pixels.assign(static_cast<std::size_t>(w) * h, value);
    img.label = label;
    return img;
}

std::string to_string(AugmentMethod m) {
    switch (m) {
    case AugmentMethod::Jitter: return "jitter";
    case AugmentMethod::Rotation: return "rotation";
    case AugmentMethod::Crop: return "crop";
    case AugmentMethod::Flip: return "flip";
    }
    return "jitter";
}

AugmentMethod augment_method_from_string(const std::string &s) {
    if (s == "jitter") return AugmentMethod::Jitter;
    if (s == "rotation") return AugmentMethod::Rotation;
    if (s == "crop") return AugmentMethod::Crop;
    if (s == "flip") return AugmentMethod::Flip;
    throw ArgumentError("unknown augmentation method '" + s + "'");
}

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

/// Bilinear sample at fractional source coordinates, zero outside.
double sample_bilinear(const ImageSample &img, double x, double y) {
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const double fx = x - x0;
    const double fy = y - y0;
    auto pix = [&](int xx, int yy) -> double {
        if (xx < 0 || yy < 0 || xx >= img.width || yy >= img.height) return 0.0;
        return img.at(xx, yy);
    };
    return (1 - fx) * (1 - fy) * pix(x0, y0) + fx * (1 - fy) * pix(x0 + 1, y0) +
           (1 - fx) * fy * pix(x0, y0 + 1) + fx * fy * pix(x0 + 1, y0 + 1);
}

} // namespace

ImageSample bilinear_downsample(const ImageSample &img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) throw ArgumentError("output dimensions must be >= 1");
    ImageSample out;
    out.width = out_w;
    out.height = out_h;
    out.label = img.label;
    out.pixels.resize(static_cast<std::size_t>(out_w) * out_h);
    const double sx = out_w > 1 ? static_cast<double>(img.width - 1) / (out_w - 1) : 0.0;
    const double sy = out_h > 1 ? static_cast<double>(img.height - 1) / (out_h - 1) : 0.0;
    for (int y = 0; y < out_h; ++y) {
        const double src_y = out_h > 1 ? y * sy : (img.height - 1) / 2.0;
        for (int x = 0; x < out_w; ++x) {
            const double src_x = out_w > 1 ? x * sx : (img.width - 1) / 2.0;
            out.at(x, y) = clamp01(sample_bilinear(img, src_x, src_y));
        }
    }
    return out;
}

ImageSample jitter(const ImageSample &img, double contrast, double brightness) {
    ImageSample out = img;
    for (double &p : out.pixels) p = clamp01(contrast * p + brightness);
    return out;
}

ImageSample rotate(const ImageSample &img, double degrees) {
    const double rad = degrees * std::numbers::pi / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    const double cx = (img.width - 1) / 2.0;
    const double cy = (img.height - 1) / 2.0;
    ImageSample out = img;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            // inverse map into the source frame
            const double dx = x - cx;
            const double dy = y - cy;
            const double sx = c * dx + s * dy + cx;
            const double sy = -s * dx + c * dy + cy;
            out.at(x, y) = clamp01(sample_bilinear(img, sx, sy));
        }
    }
    return out;
}

ImageSample crop_resize(const ImageSample &img, double area_fraction, double off_x,
                        double off_y) {
    const double side = std::sqrt(std::clamp(area_fraction, 0.0, 1.0));
    const int cw = std::max(1, static_cast<int>(std::lround(img.width * side)));
    const int ch = std::max(1, static_cast<int>(std::lround(img.height * side)));
    const int x0 = static_cast<int>(std::lround((img.width - cw) * std::clamp(off_x, 0.0, 1.0)));
    const int y0 = static_cast<int>(std::lround((img.height - ch) * std::clamp(off_y, 0.0, 1.0)));

    ImageSample window;
    window.width = cw;
    window.height = ch;
    window.pixels.resize(static_cast<std::size_t>(cw) * ch);
    for (int y = 0; y < ch; ++y)
        for (int x = 0; x < cw; ++x)
            window.at(x, y) = img.at(x0 + x, y0 + y);
    ImageSample out = bilinear_downsample(window, img.width, img.height);
    out.label = img.label;
    return out;
}

ImageSample flip_horizontal(const ImageSample &img) {
    ImageSample out = img;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            out.at(x, y) = img.at(img.width - 1 - x, y);
    return out;
}

ImageSample gaussian_blur(const ImageSample &img, double sigma) {
    if (sigma <= 0.0) return img;
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += kernel[i + radius];
    }
    for (double &k : kernel) k /= sum;

    // separable passes, zero padding
    ImageSample tmp = img;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int xx = x + i;
                if (xx >= 0 && xx < img.width) acc += kernel[i + radius] * img.at(xx, y);
            }
            tmp.at(x, y) = acc;
        }
    }
    ImageSample out = img;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int yy = y + i;
                if (yy >= 0 && yy < img.height) acc += kernel[i + radius] * tmp.at(x, yy);
            }
            out.at(x, y) = clamp01(acc);
        }
    }
    return out;
}

ImageSample augment_once(const ImageSample &img, const AugmentConfig &cfg,
                         std::mt19937_64 &gen) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    ImageSample out;
    switch (cfg.method) {
    case AugmentMethod::Jitter: {
        const double contrast =
            cfg.contrast_lo + (cfg.contrast_hi - cfg.contrast_lo) * uni(gen);
        const double brightness = cfg.brightness_range * (2.0 * uni(gen) - 1.0);
        out = jitter(img, contrast, brightness);
        break;
    }
    case AugmentMethod::Rotation:
        out = rotate(img, cfg.rotation_deg * (2.0 * uni(gen) - 1.0));
        break;
    case AugmentMethod::Crop: {
        const double area = cfg.crop_min_area + (1.0 - cfg.crop_min_area) * uni(gen);
        const double ox = uni(gen);
        const double oy = uni(gen);
        out = crop_resize(img, area, ox, oy);
        break;
    }
    case AugmentMethod::Flip:
        out = uni(gen) < 0.5 ? flip_horizontal(img) : img;
        break;
    }
    if (cfg.gaussian_blur) {
        const double sigma =
            cfg.blur_sigma_lo + (cfg.blur_sigma_hi - cfg.blur_sigma_lo) * uni(gen);
        out = gaussian_blur(out, sigma);
    }
    return out;
}

std::pair<ImageSample, ImageSample> augment_pair(const ImageSample &img,
                                                 const AugmentConfig &cfg,
                                                 std::mt19937_64 &gen) {
    ImageSample first = augment_once(img, cfg, gen);
    ImageSample second = augment_once(img, cfg, gen);
    return {std::move(first), std::move(second)};
}

std::pair<ImageSample, ImageSample> augment_pair(const ImageSample &img,
                                                 const AugmentConfig &cfg) {
    std::mt19937_64 gen(cfg.rng_seed);
    return augment_pair(img, cfg, gen);
}

SoftLabeled mixup_with_lambda(const SoftLabeled &a, const SoftLabeled &b, double lambda) {
    if (a.image.width != b.image.width || a.image.height != b.image.height)
        throw DimensionError("mixup of images with different dimensions");
    if (a.soft_label.size() != b.soft_label.size())
        throw DimensionError("mixup of labels with different lengths");
    SoftLabeled out;
    out.image = a.image;
    out.image.label.reset();
    for (std::size_t i = 0; i < out.image.pixels.size(); ++i)
        out.image.pixels[i] = lambda * a.image.pixels[i] + (1.0 - lambda) * b.image.pixels[i];
    out.soft_label.resize(a.soft_label.size());
    for (std::size_t i = 0; i < out.soft_label.size(); ++i)
        out.soft_label[i] = lambda * a.soft_label[i] + (1.0 - lambda) * b.soft_label[i];
    return out;
}

SoftLabeled mixup(const SoftLabeled &a, const SoftLabeled &b, double alpha,
                  std::mt19937_64 &gen) {
    std::gamma_distribution<double> gamma(alpha, 1.0);
    const double g1 = gamma(gen);
    const double g2 = gamma(gen);
    const double lambda = (g1 + g2) > 0.0 ? g1 / (g1 + g2) : 0.5;
    return mixup_with_lambda(a, b, lambda);
}

void write_pgm(const ImageSample &img, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    for (double p : img.pixels)
        out.put(static_cast<char>(std::lround(clamp01(p) * 255.0)));
}

std::vector<double> flatten(const ImageSample &img) { return img.pixels; }

} // namespace copyqnn::data
