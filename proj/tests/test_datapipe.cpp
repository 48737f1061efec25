#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <zlib.h>

#include "copyqnn/errors.hpp"
#include "copyqnn/idx.hpp"
#include "copyqnn/image.hpp"
#include "copyqnn/synth.hpp"
#include "copyqnn/tasks.hpp"

using namespace copyqnn;
using data::AugmentConfig;
using data::AugmentMethod;
using data::ImageSample;

namespace {

std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "copyqnn_datapipe_test";
    std::filesystem::create_directories(dir);
    return dir;
}

void gzip_file(const std::filesystem::path &src, const std::filesystem::path &dst) {
    std::ifstream in(src, std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    gzFile out = gzopen(dst.c_str(), "wb");
    REQUIRE(out != nullptr);
    gzwrite(out, bytes.data(), static_cast<unsigned>(bytes.size()));
    gzclose(out);
}

} // namespace

TEST_CASE("IDX round trip and error contracts") {
    const auto dir = temp_dir();
    const std::vector<ImageSample> corpus = data::synth_corpus(data::SynthKind::Digits, 25, 7);
    data::write_idx_images(corpus, dir / "imgs");
    data::write_idx_labels(corpus, dir / "labels");

    SUBCASE("round trip preserves counts, shape, labels, pixel range") {
        const std::vector<ImageSample> back = data::load_idx(dir / "imgs", dir / "labels");
        REQUIRE(back.size() == 25);
        for (std::size_t i = 0; i < back.size(); ++i) {
            CHECK(back[i].width == 28);
            CHECK(back[i].height == 28);
            CHECK(*back[i].label == static_cast<int>(i % 10));
            for (double p : back[i].pixels) {
                CHECK(p >= 0.0);
                CHECK(p <= 1.0);
            }
        }
    }

    SUBCASE("gzip-compressed files load identically") {
        gzip_file(dir / "imgs", dir / "imgs.gz");
        gzip_file(dir / "labels", dir / "labels.gz");
        const auto plain = data::load_idx(dir / "imgs", dir / "labels");
        const auto zipped = data::load_idx(dir / "imgs.gz", dir / "labels.gz");
        REQUIRE(plain.size() == zipped.size());
        CHECK(plain[3].pixels == zipped[3].pixels);
    }

    SUBCASE("bad magic") {
        std::ofstream bad(dir / "bad", std::ios::binary);
        bad << "NOTANIDXFILE____________";
        bad.close();
        CHECK_THROWS_AS(data::load_idx(dir / "bad", dir / "labels"), BadMagicError);
    }

    SUBCASE("truncation leaves no partial dataset") {
        std::ifstream in(dir / "imgs", std::ios::binary);
        std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
        bytes.resize(bytes.size() / 2);
        std::ofstream out(dir / "short", std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.close();
        CHECK_THROWS_AS(data::load_idx(dir / "short", dir / "labels"), TruncatedFileError);
    }

    SUBCASE("count mismatch") {
        const std::vector<ImageSample> fewer(corpus.begin(), corpus.begin() + 10);
        data::write_idx_labels(fewer, dir / "labels10");
        CHECK_THROWS_AS(data::load_idx(dir / "imgs", dir / "labels10"), CountMismatchError);
    }
}

TEST_CASE("bilinear downsampling") {
    SUBCASE("constant image stays constant at any size") {
        const ImageSample c = ImageSample::constant(28, 28, 0.42);
        for (int side : {16, 4, 1}) {
            const ImageSample out = data::bilinear_downsample(c, side, side);
            for (double p : out.pixels) CHECK(p == doctest::Approx(0.42).epsilon(1e-12));
        }
    }
    SUBCASE("2x2 checkerboard center is 0.5") {
        ImageSample img = ImageSample::constant(2, 2, 0.0);
        img.at(1, 0) = 1.0;
        img.at(0, 1) = 1.0;
        const ImageSample out = data::bilinear_downsample(img, 1, 1);
        CHECK(out.pixels[0] == doctest::Approx(0.5));
    }
    SUBCASE("target shapes for the two consumers") {
        const ImageSample img = data::synth_sample(data::SynthKind::Digits, 3, 99);
        CHECK(data::bilinear_downsample(img, 16, 16).pixels.size() == 256);
        CHECK(data::bilinear_downsample(img, 4, 4).pixels.size() == 16);
    }
}

TEST_CASE("augmentation") {
    const ImageSample img =
        data::bilinear_downsample(data::synth_sample(data::SynthKind::Digits, 5, 13), 16, 16);

    SUBCASE("flip draws are either identity or mirror") {
        AugmentConfig cfg;
        cfg.method = AugmentMethod::Flip;
        cfg.rng_seed = 5;
        auto [a, b] = data::augment_pair(img, cfg);
        const ImageSample mirror = data::flip_horizontal(img);
        for (const ImageSample &view : {a, b}) {
            const bool same = view.pixels == img.pixels;
            const bool mirrored = view.pixels == mirror.pixels;
            CHECK((same || mirrored));
        }
    }

    SUBCASE("jitter on a constant image is the clamped affine map") {
        const ImageSample c = ImageSample::constant(16, 16, 0.4);
        const ImageSample out = data::jitter(c, 1.1, 0.15);
        for (double p : out.pixels)
            CHECK(p == doctest::Approx(std::min(1.0, 1.1 * 0.4 + 0.15)).epsilon(1e-12));
        const ImageSample clamped = data::jitter(c, 1.25, 0.9);
        for (double p : clamped.pixels) CHECK(p == 1.0);
    }

    SUBCASE("blurring a centered delta preserves mass") {
        ImageSample delta = ImageSample::constant(17, 17, 0.0);
        delta.at(8, 8) = 1.0;
        const ImageSample out = data::gaussian_blur(delta, 0.8);
        double mass = 0.0;
        for (double p : out.pixels) mass += p;
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(out.at(8, 8) < 1.0);
        CHECK(out.at(7, 8) > 0.0);
    }

    SUBCASE("pairs are deterministic given the seed, dims preserved, range kept") {
        for (AugmentMethod m : {AugmentMethod::Jitter, AugmentMethod::Rotation,
                                AugmentMethod::Crop, AugmentMethod::Flip}) {
            AugmentConfig cfg;
            cfg.method = m;
            cfg.gaussian_blur = true;
            cfg.rng_seed = 21;
            auto [a1, b1] = data::augment_pair(img, cfg);
            auto [a2, b2] = data::augment_pair(img, cfg);
            CHECK(a1.pixels == a2.pixels);
            CHECK(b1.pixels == b2.pixels);
            CHECK(a1.width == img.width);
            CHECK(a1.height == img.height);
            for (double p : a1.pixels) {
                CHECK(p >= 0.0);
                CHECK(p <= 1.0);
            }
        }
    }
}

TEST_CASE("mixup") {
    const data::SoftLabeled a{ImageSample::constant(4, 4, 1.0), {1.0, 0.0}};
    const data::SoftLabeled b{ImageSample::constant(4, 4, 0.0), {0.0, 1.0}};

    SUBCASE("lambda 1 returns the first sample exactly") {
        const data::SoftLabeled out = data::mixup_with_lambda(a, b, 1.0);
        CHECK(out.image.pixels == a.image.pixels);
        CHECK(out.soft_label == a.soft_label);
    }
    SUBCASE("lambda 0.5 mixes labels symmetrically") {
        const data::SoftLabeled out = data::mixup_with_lambda(a, b, 0.5);
        CHECK(out.soft_label[0] == doctest::Approx(0.5));
        CHECK(out.soft_label[1] == doctest::Approx(0.5));
        for (double p : out.image.pixels) CHECK(p == doctest::Approx(0.5));
    }
    SUBCASE("mixed labels stay probability vectors") {
        std::mt19937_64 gen(3);
        for (int i = 0; i < 50; ++i) {
            const data::SoftLabeled out = data::mixup(a, b, 0.2, gen);
            CHECK(out.soft_label[0] + out.soft_label[1] == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(out.soft_label[0] >= 0.0);
        }
    }
    SUBCASE("dimension mismatch is rejected") {
        const data::SoftLabeled odd{ImageSample::constant(3, 4, 0.5), {0.5, 0.5}};
        CHECK_THROWS_AS(data::mixup_with_lambda(a, odd, 0.5), DimensionError);
    }
}

TEST_CASE("binary task construction") {
    data::DataSource source;
    source.synth_seed = 17;
    source.synth_train_pool = 1200;
    source.synth_test_pool = 300;

    const data::BinaryTask task = data::build_task(source, "m01", 60, 20, 40);
    CHECK(task.name == "m01");
    CHECK(task.train.size() == 60);
    CHECK(task.test.size() == 20);
    CHECK(task.query_pool.size() == 40);
    for (const auto &split : {task.train, task.test, task.query_pool})
        for (const ImageSample &img : split) {
            REQUIRE(img.label.has_value());
            CHECK((*img.label == 0 || *img.label == 1));
        }

    SUBCASE("task names are validated") {
        CHECK_THROWS_AS(data::parse_task_name("x01"), ArgumentError);
        CHECK_THROWS_AS(data::parse_task_name("m00"), ArgumentError);
        CHECK_THROWS_AS(data::parse_task_name("m012"), ArgumentError);
        CHECK(data::parse_task_name("f89").class_b == 9);
    }

    SUBCASE("full pipeline is a pure function of its seeds") {
        const data::BinaryTask again = data::build_task(source, "m01", 60, 20, 40);
        CHECK(again.train[5].pixels == task.train[5].pixels);
        CHECK(again.query_pool[11].pixels == task.query_pool[11].pixels);
    }
}

TEST_CASE("PGM dump") {
    const auto dir = temp_dir();
    const ImageSample img = data::synth_sample(data::SynthKind::Fashion, 1, 3);
    data::write_pgm(img, dir / "sample.pgm");
    std::ifstream in(dir / "sample.pgm", std::ios::binary);
    std::string magic;
    int w, h, maxval;
    in >> magic >> w >> h >> maxval;
    CHECK(magic == "P5");
    CHECK(w == 28);
    CHECK(h == 28);
    CHECK(maxval == 255);
}
