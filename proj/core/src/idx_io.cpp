#include "stackfuse/idx_io.hpp"

#include "stackfuse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace stackfuse {
namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::uint32_t read_u32_be(std::istream& in, const std::string& what) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
        throw FormatError("idx: truncated file while reading " + what);
    }
    return (static_cast<std::uint32_t>(bytes[0]) << 24) |
           (static_cast<std::uint32_t>(bytes[1]) << 16) |
           (static_cast<std::uint32_t>(bytes[2]) << 8) | static_cast<std::uint32_t>(bytes[3]);
}

void write_u32_be(std::ostream& out, std::uint32_t v) {
    unsigned char bytes[4] = {static_cast<unsigned char>(v >> 24),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

} // namespace

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path) {
    std::ifstream images(images_path, std::ios::binary);
    if (!images) throw IoError("cannot open " + images_path.string());
    std::ifstream labels(labels_path, std::ios::binary);
    if (!labels) throw IoError("cannot open " + labels_path.string());

    const std::uint32_t images_magic = read_u32_be(images, "images magic");
    if (images_magic != kImagesMagic) {
        throw FormatError(images_path.string() + ": bad magic, not an IDX3 image file");
    }
    const std::uint32_t image_count = read_u32_be(images, "image count");
    const std::uint32_t rows = read_u32_be(images, "rows");
    const std::uint32_t cols = read_u32_be(images, "cols");

    const std::uint32_t labels_magic = read_u32_be(labels, "labels magic");
    if (labels_magic != kLabelsMagic) {
        throw FormatError(labels_path.string() + ": bad magic, not an IDX1 label file");
    }
    const std::uint32_t label_count = read_u32_be(labels, "label count");
    if (label_count != image_count) {
        throw FormatError("idx: " + std::to_string(image_count) + " images but " +
                          std::to_string(label_count) + " labels");
    }
    if (rows == 0 || cols == 0 || image_count == 0) {
        throw FormatError("idx: empty image file");
    }

    const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
    Dataset ds;
    ds.feature_len = static_cast<int>(pixels);
    ds.num_classes = 10;
    ds.name = images_path.filename().string();
    ds.samples.resize(image_count);

    std::vector<unsigned char> buffer(pixels);
    for (std::uint32_t i = 0; i < image_count; ++i) {
        if (!images.read(reinterpret_cast<char*>(buffer.data()),
                         static_cast<std::streamsize>(pixels))) {
            throw FormatError(images_path.string() + ": truncated at image " + std::to_string(i));
        }
        Sample& s = ds.samples[i];
        s.features.resize(pixels);
        for (std::size_t p = 0; p < pixels; ++p) {
            s.features[p] = static_cast<double>(buffer[p]) / 255.0;
        }
        int label = labels.get();
        if (label == std::ifstream::traits_type::eof()) {
            throw FormatError(labels_path.string() + ": truncated at label " + std::to_string(i));
        }
        if (label > 9) {
            throw FormatError(labels_path.string() + ": label " + std::to_string(label) +
                              " outside [0, 9] at sample " + std::to_string(i));
        }
        s.label = label;
        s.person = kNoPerson;
    }
    return ds;
}

void write_idx(const Dataset& ds, int rows, int cols,
               const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path) {
    if (rows < 1 || cols < 1 || rows * cols != ds.feature_len) {
        throw InvalidArgumentError("write_idx: rows*cols must equal feature_len");
    }
    if (ds.num_classes > 10) {
        throw InvalidArgumentError("write_idx: IDX labels support at most 10 classes");
    }
    std::ofstream images(images_path, std::ios::binary);
    if (!images) throw IoError("cannot open " + images_path.string() + " for writing");
    std::ofstream labels(labels_path, std::ios::binary);
    if (!labels) throw IoError("cannot open " + labels_path.string() + " for writing");

    write_u32_be(images, kImagesMagic);
    write_u32_be(images, static_cast<std::uint32_t>(ds.size()));
    write_u32_be(images, static_cast<std::uint32_t>(rows));
    write_u32_be(images, static_cast<std::uint32_t>(cols));
    write_u32_be(labels, kLabelsMagic);
    write_u32_be(labels, static_cast<std::uint32_t>(ds.size()));

    std::vector<unsigned char> buffer(static_cast<std::size_t>(ds.feature_len));
    for (const Sample& s : ds.samples) {
        for (std::size_t p = 0; p < buffer.size(); ++p) {
            const double v = std::clamp(s.features[p], 0.0, 1.0);
            buffer[p] = static_cast<unsigned char>(std::lround(v * 255.0));
        }
        images.write(reinterpret_cast<const char*>(buffer.data()),
                     static_cast<std::streamsize>(buffer.size()));
        labels.put(static_cast<char>(s.label));
    }
    if (!images || !labels) throw IoError("failed writing idx pair");
}

} // namespace stackfuse
