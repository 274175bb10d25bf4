#include "eirnri/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>

namespace eirnri {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void io_fail(const std::string& path, const char* what) {
    throw std::runtime_error("png: " + std::string(what) + " (" + path + ")");
}

}  // namespace

std::vector<Matrix> load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) io_fail(path, "cannot open file");

    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8))
        io_fail(path, "not a PNG file");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        io_fail(path, "libpng init failed");
    }
    std::vector<png_bytep> row_ptrs;
    std::vector<png_byte> pixels;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        io_fail(path, "decode error");
    }
    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    if (png_get_bit_depth(png, info) == 16)
        io_fail(path, "16-bit depth not supported (expect 8-bit grayscale or RGB)");
    // Normalize palette/low-depth inputs to 8-bit channels and drop alpha.
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        io_fail(path, "expected 1 or 3 channels after normalization");
    }

    const std::size_t stride = png_get_rowbytes(png, info);
    pixels.resize(stride * height);
    row_ptrs.resize(height);
    for (png_uint_32 i = 0; i < height; ++i) row_ptrs[i] = pixels.data() + i * stride;
    png_read_image(png, row_ptrs.data());
    png_destroy_read_struct(&png, &info, nullptr);

    std::vector<Matrix> out(channels, Matrix(height, width));
    for (png_uint_32 i = 0; i < height; ++i)
        for (png_uint_32 j = 0; j < width; ++j)
            for (int c = 0; c < channels; ++c)
                out[c](i, j) = static_cast<double>(pixels[i * stride + j * channels + c]);
    return out;
}

void save_png(const std::string& path, const std::vector<Matrix>& channels) {
    const int nc = static_cast<int>(channels.size());
    if (nc != 1 && nc != 3) throw std::invalid_argument("save_png: expected 1 or 3 channels");
    const auto rows = channels[0].rows();
    const auto cols = channels[0].cols();
    for (const auto& ch : channels)
        if (ch.rows() != rows || ch.cols() != cols)
            throw std::invalid_argument("save_png: channel shape mismatch");

    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) io_fail(path, "cannot open file for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        io_fail(path, "libpng init failed");
    }
    std::vector<png_byte> pixels(static_cast<std::size_t>(rows) * cols * nc);
    std::vector<png_bytep> row_ptrs(rows);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        io_fail(path, "encode error");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(cols), static_cast<png_uint_32>(rows), 8,
                 nc == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);

    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            for (int c = 0; c < nc; ++c) {
                const double v = std::min(255.0, std::max(0.0, std::round(channels[c](i, j))));
                pixels[(static_cast<std::size_t>(i) * cols + j) * nc + c] =
                    static_cast<png_byte>(v);
            }
    for (Eigen::Index i = 0; i < rows; ++i)
        row_ptrs[i] = pixels.data() + static_cast<std::size_t>(i) * cols * nc;

    png_set_rows(png, info, row_ptrs.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace eirnri
