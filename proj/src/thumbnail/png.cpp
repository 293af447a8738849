/**
 * @file png.cpp
 */

#include "curator/thumbnail/png.hpp"

#include "curator/common/error.hpp"

#include <png.h>

#include <cstring>

namespace curator::thumbnail {

namespace {

struct ReadCursor {
    std::span<const std::uint8_t> data;
    std::size_t pos = 0;
};

void on_error(png_structp png, png_const_charp message) {
    auto* text = static_cast<std::string*>(png_get_error_ptr(png));
    if (text != nullptr) *text = message;
    png_longjmp(png, 1);
}

void on_warning(png_structp, png_const_charp) {}

}  // namespace

auto encode_png(const RgbImage& image) -> std::vector<std::uint8_t> {
    if (image.rgb.size() != static_cast<std::size_t>(image.rows) * image.columns * 3 || image.rows == 0) {
        throw Error(ErrorCode::internal, "RGB buffer does not match its dimensions");
    }
    std::string message;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, on_error, on_warning);
    png_infop info = png != nullptr ? png_create_info_struct(png) : nullptr;
    if (info == nullptr) {
        png_destroy_write_struct(&png, nullptr);
        throw Error(ErrorCode::internal, "libpng initialisation failed");
    }
    std::vector<std::uint8_t> out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorCode::internal, "PNG encoding failed: " + message);
    }
    png_set_write_fn(
        png, &out,
        [](png_structp p, png_bytep data, png_size_t len) {
            auto* buf = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(p));
            buf->insert(buf->end(), data, data + len);
        },
        nullptr);
    png_set_IHDR(png, info, image.columns, image.rows, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_NONE);
    png_set_compression_level(png, 9);
    png_write_info(png, info);
    for (std::uint32_t r = 0; r < image.rows; ++r) {
        png_write_row(png, image.rgb.data() + static_cast<std::size_t>(r) * image.columns * 3);
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

auto decode_png(std::span<const std::uint8_t> bytes) -> RgbImage {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) throw Error(ErrorCode::internal, "not a PNG");
    std::string message;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, on_error, on_warning);
    png_infop info = png != nullptr ? png_create_info_struct(png) : nullptr;
    if (info == nullptr) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error(ErrorCode::internal, "libpng initialisation failed");
    }
    RgbImage out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorCode::internal, "PNG decoding failed: " + message);
    }
    ReadCursor cursor{bytes, 0};
    png_set_read_fn(png, &cursor, [](png_structp p, png_bytep data, png_size_t len) {
        auto* c = static_cast<ReadCursor*>(png_get_io_ptr(p));
        if (c->pos + len > c->data.size()) png_error(p, "truncated PNG");
        std::memcpy(data, c->data.data() + c->pos, len);
        c->pos += len;
    });
    png_read_info(png, info);
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);
    out.columns = png_get_image_width(png, info);
    out.rows = png_get_image_height(png, info);
    out.rgb.resize(static_cast<std::size_t>(out.rows) * out.columns * 3);
    std::vector<png_bytep> rows(out.rows);
    for (std::uint32_t r = 0; r < out.rows; ++r) rows[r] = out.rgb.data() + static_cast<std::size_t>(r) * out.columns * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

}  // namespace curator::thumbnail
