#include "copyqnn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "copyqnn/idx.hpp"
#include "copyqnn/rng.hpp"

namespace copyqnn::data {

namespace {

constexpr int kSize = 28;

struct Pose {
    double dx, dy;     // translation
    double scale;      // isotropic
    double rot;        // radians
    double stroke;     // half-width of strokes
};

struct Canvas {
    double pix[kSize][kSize] = {};
    Pose pose;

    // glyph coordinates live in [-1, 1]^2; the pose maps them to pixels
    std::pair<double, double> to_pixel(double gx, double gy) const {
        const double c = std::cos(pose.rot), s = std::sin(pose.rot);
        const double rx = c * gx - s * gy;
        const double ry = s * gx + c * gy;
        const double half = kSize / 2.0;
        return {half + pose.dx + rx * pose.scale * half * 0.72,
                half + pose.dy + ry * pose.scale * half * 0.72};
    }

    void stamp(double px, double py, double radius) {
        const int x0 = std::max(0, static_cast<int>(std::floor(px - radius - 1)));
        const int x1 = std::min(kSize - 1, static_cast<int>(std::ceil(px + radius + 1)));
        const int y0 = std::max(0, static_cast<int>(std::floor(py - radius - 1)));
        const int y1 = std::min(kSize - 1, static_cast<int>(std::ceil(py + radius + 1)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double d = std::hypot(x - px, y - py);
                const double v = std::clamp(1.2 - d / radius, 0.0, 1.0);
                pix[y][x] = std::max(pix[y][x], v);
            }
        }
    }

    void segment(double ax, double ay, double bx, double by) {
        auto [px0, py0] = to_pixel(ax, ay);
        auto [px1, py1] = to_pixel(bx, by);
        const double len = std::hypot(px1 - px0, py1 - py0);
        const int steps = std::max(2, static_cast<int>(len * 2.0));
        for (int i = 0; i <= steps; ++i) {
            const double t = static_cast<double>(i) / steps;
            stamp(px0 + t * (px1 - px0), py0 + t * (py1 - py0), pose.stroke);
        }
    }

    void arc(double cx, double cy, double rx, double ry, double a0, double a1) {
        const int steps = 40;
        for (int i = 0; i <= steps; ++i) {
            const double a = a0 + (a1 - a0) * i / steps;
            auto [px, py] = to_pixel(cx + rx * std::cos(a), cy + ry * std::sin(a));
            stamp(px, py, pose.stroke);
        }
    }

    void fill_quad(double x0, double y0, double x1, double y1, double x2, double y2,
                   double x3, double y3) {
        // scanline over a convex quad given in glyph space
        const int steps = 36;
        for (int i = 0; i <= steps; ++i) {
            const double t = static_cast<double>(i) / steps;
            const double lx = x0 + t * (x3 - x0), ly = y0 + t * (y3 - y0);
            const double rxx = x1 + t * (x2 - x1), ryy = y1 + t * (y2 - y1);
            segment(lx, ly, rxx, ryy);
        }
    }
};

void draw_digit(Canvas &cv, int d) {
    constexpr double pi = std::numbers::pi;
    switch (d) {
    case 0: cv.arc(0, 0, 0.55, 0.85, 0, 2 * pi); break;
    case 1:
        cv.segment(0.05, -0.9, 0.05, 0.9);
        cv.segment(-0.25, -0.55, 0.05, -0.9);
        break;
    case 2:
        cv.arc(0, -0.45, 0.5, 0.42, -pi, 0.25);
        cv.segment(0.45, -0.25, -0.5, 0.9);
        cv.segment(-0.5, 0.9, 0.55, 0.9);
        break;
    case 3:
        cv.arc(-0.05, -0.45, 0.5, 0.42, -pi * 0.9, pi * 0.45);
        cv.arc(-0.05, 0.45, 0.55, 0.46, -pi * 0.45, pi * 0.9);
        break;
    case 4:
        cv.segment(0.35, -0.9, 0.35, 0.9);
        cv.segment(0.35, -0.9, -0.55, 0.25);
        cv.segment(-0.55, 0.25, 0.6, 0.25);
        break;
    case 5:
        cv.segment(0.45, -0.9, -0.45, -0.9);
        cv.segment(-0.45, -0.9, -0.45, -0.05);
        cv.arc(-0.02, 0.4, 0.5, 0.48, -pi * 0.55, pi * 0.75);
        break;
    case 6:
        cv.arc(0.0, 0.35, 0.5, 0.5, 0, 2 * pi);
        cv.arc(0.28, -0.25, 0.75, 1.05, pi * 0.6, pi * 0.95);
        break;
    case 7:
        cv.segment(-0.55, -0.85, 0.55, -0.85);
        cv.segment(0.55, -0.85, -0.15, 0.9);
        break;
    case 8:
        cv.arc(0, -0.42, 0.42, 0.4, 0, 2 * pi);
        cv.arc(0, 0.45, 0.5, 0.44, 0, 2 * pi);
        break;
    case 9:
        cv.arc(0.0, -0.35, 0.48, 0.47, 0, 2 * pi);
        cv.segment(0.46, -0.3, 0.3, 0.9);
        break;
    default: break;
    }
}

void draw_fashion(Canvas &cv, int d) {
    switch (d) {
    case 0: // t-shirt: torso + short sleeves
        cv.fill_quad(-0.4, -0.5, 0.4, -0.5, 0.4, 0.8, -0.4, 0.8);
        cv.fill_quad(-0.85, -0.5, -0.4, -0.5, -0.4, -0.05, -0.85, -0.25);
        cv.fill_quad(0.4, -0.5, 0.85, -0.5, 0.85, -0.25, 0.4, -0.05);
        break;
    case 1: // trouser: two legs
        cv.fill_quad(-0.45, -0.85, -0.1, -0.85, -0.18, 0.9, -0.5, 0.9);
        cv.fill_quad(0.1, -0.85, 0.45, -0.85, 0.5, 0.9, 0.18, 0.9);
        cv.fill_quad(-0.45, -0.85, 0.45, -0.85, 0.45, -0.45, -0.45, -0.45);
        break;
    case 2: // pullover: torso + long sleeves
        cv.fill_quad(-0.42, -0.55, 0.42, -0.55, 0.42, 0.8, -0.42, 0.8);
        cv.fill_quad(-0.9, -0.55, -0.42, -0.55, -0.6, 0.7, -0.95, 0.6);
        cv.fill_quad(0.42, -0.55, 0.9, -0.55, 0.95, 0.6, 0.6, 0.7);
        break;
    case 3: // dress: narrow top flaring out
        cv.fill_quad(-0.25, -0.85, 0.25, -0.85, 0.62, 0.9, -0.62, 0.9);
        break;
    case 4: // coat: long body, open front gap
        cv.fill_quad(-0.5, -0.6, -0.06, -0.6, -0.06, 0.9, -0.5, 0.9);
        cv.fill_quad(0.06, -0.6, 0.5, -0.6, 0.5, 0.9, 0.06, 0.9);
        cv.fill_quad(-0.88, -0.6, -0.5, -0.6, -0.62, 0.5, -0.92, 0.42);
        cv.fill_quad(0.5, -0.6, 0.88, -0.6, 0.92, 0.42, 0.62, 0.5);
        break;
    case 5: // sandal: thin sole + straps
        cv.fill_quad(-0.85, 0.55, 0.85, 0.45, 0.88, 0.72, -0.82, 0.82);
        cv.segment(-0.5, 0.6, -0.1, 0.0);
        cv.segment(-0.1, 0.0, 0.35, 0.5);
        break;
    case 6: // shirt: torso + sleeves + collar notch
        cv.fill_quad(-0.38, -0.5, 0.38, -0.5, 0.38, 0.85, -0.38, 0.85);
        cv.fill_quad(-0.8, -0.5, -0.38, -0.5, -0.45, 0.35, -0.85, 0.3);
        cv.fill_quad(0.38, -0.5, 0.8, -0.5, 0.85, 0.3, 0.45, 0.35);
        cv.segment(-0.12, -0.52, 0.0, -0.2);
        cv.segment(0.12, -0.52, 0.0, -0.2);
        break;
    case 7: // sneaker: low horizontal wedge
        cv.fill_quad(-0.85, 0.25, 0.5, 0.0, 0.88, 0.6, -0.85, 0.7);
        break;
    case 8: // bag: box + handle arc
        cv.fill_quad(-0.6, -0.05, 0.6, -0.05, 0.6, 0.8, -0.6, 0.8);
        cv.arc(0.0, -0.15, 0.35, 0.45, std::numbers::pi, 2 * std::numbers::pi);
        break;
    case 9: // ankle boot: shaft + foot
        cv.fill_quad(-0.45, -0.8, 0.1, -0.8, 0.1, 0.3, -0.45, 0.3);
        cv.fill_quad(-0.45, 0.3, 0.75, 0.25, 0.8, 0.72, -0.45, 0.72);
        break;
    default: break;
    }
}

} // namespace

ImageSample synth_sample(SynthKind kind, int class_id, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    Canvas cv;
    cv.pose.dx = (uni(gen) - 0.5) * 4.0;
    cv.pose.dy = (uni(gen) - 0.5) * 4.0;
    cv.pose.scale = 0.8 + uni(gen) * 0.35;
    cv.pose.rot = (uni(gen) - 0.5) * (std::numbers::pi / 9.0);
    cv.pose.stroke = 1.3 + uni(gen) * 1.0;

    if (kind == SynthKind::Digits)
        draw_digit(cv, class_id);
    else
        draw_fashion(cv, class_id);

    ImageSample img;
    img.width = kSize;
    img.height = kSize;
    img.label = class_id;
    img.pixels.resize(kSize * kSize);
    std::normal_distribution<double> noise(0.0, 0.03);
    const double gain = 0.82 + uni(gen) * 0.18;
    for (int y = 0; y < kSize; ++y)
        for (int x = 0; x < kSize; ++x)
            img.pixels[static_cast<std::size_t>(y) * kSize + x] =
                std::clamp(cv.pix[y][x] * gain + noise(gen), 0.0, 1.0);
    return img;
}

std::vector<ImageSample> synth_corpus(SynthKind kind, int count, std::uint64_t seed) {
    std::vector<ImageSample> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const int cls = i % 10;
        out.push_back(synth_sample(kind, cls,
                                   rng::derive_seed(seed, "synth",
                                                    {static_cast<std::uint64_t>(kind),
                                                     static_cast<std::uint64_t>(i)})));
    }
    return out;
}

void write_synth_idx(SynthKind kind, int train_count, int test_count, std::uint64_t seed,
                     const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    const std::vector<ImageSample> train = synth_corpus(kind, train_count, seed);
    const std::vector<ImageSample> test =
        synth_corpus(kind, test_count, rng::derive_seed(seed, "synth-test"));
    write_idx_images(train, dir / "train-images-idx3-ubyte");
    write_idx_labels(train, dir / "train-labels-idx1-ubyte");
    write_idx_images(test, dir / "t10k-images-idx3-ubyte");
    write_idx_labels(test, dir / "t10k-labels-idx1-ubyte");
}

} // namespace copyqnn::data
