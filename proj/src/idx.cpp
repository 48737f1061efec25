#include "copyqnn/idx.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <zlib.h>

#include "copyqnn/errors.hpp"

namespace copyqnn::data {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<std::uint8_t> read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

bool is_gzip(const std::vector<std::uint8_t> &bytes) {
    return bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b;
}

std::vector<std::uint8_t> gunzip(const std::vector<std::uint8_t> &in,
                                 const std::string &name) {
    z_stream strm{};
    if (inflateInit2(&strm, 15 + 16) != Z_OK)
        throw ParseError("zlib initialization failed for " + name);
    std::vector<std::uint8_t> out;
    std::vector<std::uint8_t> buf(1 << 16);
    strm.next_in = const_cast<Bytef *>(in.data());
    strm.avail_in = static_cast<uInt>(in.size());
    int ret = Z_OK;
    while (ret != Z_STREAM_END) {
        strm.next_out = buf.data();
        strm.avail_out = static_cast<uInt>(buf.size());
        ret = inflate(&strm, Z_NO_FLUSH);
        if (ret != Z_OK && ret != Z_STREAM_END) {
            inflateEnd(&strm);
            throw TruncatedFileError("corrupt gzip stream in " + name);
        }
        out.insert(out.end(), buf.data(), buf.data() + (buf.size() - strm.avail_out));
    }
    inflateEnd(&strm);
    return out;
}

std::uint32_t read_u32_be(const std::vector<std::uint8_t> &bytes, std::size_t offset,
                          const std::string &name) {
    if (offset + 4 > bytes.size())
        throw TruncatedFileError(name + " ends inside the header");
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

std::vector<std::uint8_t> load_payload(const std::filesystem::path &path) {
    std::vector<std::uint8_t> bytes = read_file(path);
    if (is_gzip(bytes)) bytes = gunzip(bytes, path.string());
    return bytes;
}

} // namespace

std::vector<ImageSample> load_idx(const std::filesystem::path &images_path,
                                  const std::filesystem::path &labels_path) {
    const std::vector<std::uint8_t> img_bytes = load_payload(images_path);
    const std::vector<std::uint8_t> lab_bytes = load_payload(labels_path);
    const std::string img_name = images_path.string();
    const std::string lab_name = labels_path.string();

    if (read_u32_be(img_bytes, 0, img_name) != kImageMagic)
        throw BadMagicError(img_name + " does not start with the IDX image magic");
    if (read_u32_be(lab_bytes, 0, lab_name) != kLabelMagic)
        throw BadMagicError(lab_name + " does not start with the IDX label magic");

    const std::uint32_t count = read_u32_be(img_bytes, 4, img_name);
    const std::uint32_t rows = read_u32_be(img_bytes, 8, img_name);
    const std::uint32_t cols = read_u32_be(img_bytes, 12, img_name);
    const std::uint32_t label_count = read_u32_be(lab_bytes, 4, lab_name);

    if (count != label_count)
        throw CountMismatchError(img_name + " holds " + std::to_string(count) +
                                 " images but " + lab_name + " holds " +
                                 std::to_string(label_count) + " labels");

    const std::size_t pixel_bytes = std::size_t{count} * rows * cols;
    if (img_bytes.size() < 16 + pixel_bytes)
        throw TruncatedFileError(img_name + " is shorter than its header promises");
    if (lab_bytes.size() < 8 + count)
        throw TruncatedFileError(lab_name + " is shorter than its header promises");

    std::vector<ImageSample> samples;
    samples.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        ImageSample img;
        img.width = static_cast<int>(cols);
        img.height = static_cast<int>(rows);
        img.label = static_cast<int>(lab_bytes[8 + i]);
        img.pixels.resize(std::size_t{rows} * cols);
        const std::uint8_t *src = img_bytes.data() + 16 + std::size_t{i} * rows * cols;
        for (std::size_t p = 0; p < img.pixels.size(); ++p)
            img.pixels[p] = src[p] / 255.0;
        samples.push_back(std::move(img));
    }
    return samples;
}

void write_idx_images(const std::vector<ImageSample> &images,
                      const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    auto put_u32 = [&](std::uint32_t v) {
        const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                           static_cast<char>(v >> 8), static_cast<char>(v)};
        out.write(b, 4);
    };
    const int rows = images.empty() ? 0 : images.front().height;
    const int cols = images.empty() ? 0 : images.front().width;
    put_u32(kImageMagic);
    put_u32(static_cast<std::uint32_t>(images.size()));
    put_u32(static_cast<std::uint32_t>(rows));
    put_u32(static_cast<std::uint32_t>(cols));
    for (const ImageSample &img : images)
        for (double p : img.pixels)
            out.put(static_cast<char>(std::lround(std::clamp(p, 0.0, 1.0) * 255.0)));
}

void write_idx_labels(const std::vector<ImageSample> &images,
                      const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    auto put_u32 = [&](std::uint32_t v) {
        const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                           static_cast<char>(v >> 8), static_cast<char>(v)};
        out.write(b, 4);
    };
    put_u32(kLabelMagic);
    put_u32(static_cast<std::uint32_t>(images.size()));
    for (const ImageSample &img : images)
        out.put(static_cast<char>(img.label.value_or(0)));
}

} // namespace copyqnn::data
