/**
 * @file dicom_pixels_test.cpp
 */

#include "curator/dicom/parser.hpp"
#include "curator/dicom/pixels.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

namespace {

using namespace curator;
using namespace curator::dicom;
using curator::fixture::ImageSpec;
using curator::fixture::make_image;

TEST(DecodePixels, RescaleApplied) {
    ImageSpec spec;
    spec.rows = 2;
    spec.columns = 2;
    spec.is_signed = false;
    spec.rescale_slope = 1.0;
    spec.rescale_intercept = -1024.0;
    spec.stored = {0, 100, 200, 300};
    const auto frame = decode_pixels(make_image(spec), 0);
    EXPECT_EQ(frame.values, (std::vector<std::int32_t>{-1024, -924, -824, -724}));

    spec.rescale_slope.reset();
    spec.rescale_intercept.reset();
    EXPECT_EQ(decode_pixels(make_image(spec), 0).values, (std::vector<std::int32_t>{0, 100, 200, 300}));
}

TEST(DecodePixels, SignedTwosComplement) {
    ImageSpec spec;
    spec.rows = 1;
    spec.columns = 2;
    spec.is_signed = true;
    spec.rescale_slope.reset();
    spec.rescale_intercept.reset();
    auto obj = make_image(spec);
    obj.pixel_payload->bytes = {0xFF, 0xFF, 0x00, 0x80};
    // oracle: assemble the 16-bit word, subtract 2^16 when the top bit is set
    std::vector<std::int32_t> expected;
    for (std::size_t i = 0; i < 4; i += 2) {
        const int word = obj.pixel_payload->bytes[i] | (obj.pixel_payload->bytes[i + 1] << 8);
        expected.push_back(word >= 0x8000 ? word - 0x10000 : word);
    }
    EXPECT_EQ(expected, (std::vector<std::int32_t>{-1, -32768}));
    EXPECT_EQ(decode_pixels(obj, 0).values, expected);
}

TEST(DecodePixels, Errors) {
    ImageSpec spec;
    auto obj = make_image(spec);
    EXPECT_EQ(frame_count(obj), 1U);
    try {
        (void)decode_pixels(obj, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::frame_out_of_range);
    }
    auto rgb = obj;
    set_element(rgb.elements, fixture::el_us(tags::samples_per_pixel, 3));
    try {
        (void)decode_pixels(rgb, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::unsupported_pixel_format);
    }
    auto wide = obj;
    set_element(wide.elements, fixture::el_us(tags::bits_allocated, 32));
    EXPECT_THROW((void)decode_pixels(wide, 0), Error);
    obj.pixel_payload.reset();
    try {
        (void)decode_pixels(obj, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::no_pixel_data);
    }
}

TEST(DecodePixels, EncodeDecodeIdentityAllFormats) {
    std::mt19937_64 rng(5);
    struct Format {
        std::uint32_t bits;
        bool is_signed;
        std::int32_t lo;
        std::int32_t hi;
    };
    for (const auto& f : {Format{8, false, 0, 255}, Format{8, true, -128, 127}, Format{16, false, 0, 65535},
                          Format{16, true, -32768, 32767}}) {
        std::uniform_int_distribution<std::int32_t> d(f.lo, f.hi);
        for (int trial = 0; trial < 20; ++trial) {
            ImageSpec spec;
            spec.bits_allocated = f.bits;
            spec.is_signed = f.is_signed;
            spec.rescale_slope.reset();
            spec.rescale_intercept.reset();
            spec.rows = 3;
            spec.columns = 5;
            spec.frames = 2;
            spec.stored.resize(30);
            for (auto& v : spec.stored) v = d(rng);
            const auto obj = parse_file(write_file(make_image(spec)));
            ASSERT_EQ(frame_count(obj), 2U);
            for (std::uint32_t fr = 0; fr < 2; ++fr) {
                const auto frame = decode_pixels(obj, fr);
                const std::vector<std::int32_t> expected(spec.stored.begin() + fr * 15, spec.stored.begin() + fr * 15 + 15);
                EXPECT_EQ(frame.values, expected) << f.bits << (f.is_signed ? " signed" : " unsigned");
            }
        }
    }
}

TEST(DecodePixels, BitsStoredMasksHighBits) {
    ImageSpec spec;
    spec.is_signed = false;
    spec.rows = 1;
    spec.columns = 1;
    spec.rescale_slope.reset();
    spec.rescale_intercept.reset();
    spec.stored = {0xF123};
    spec.extra = {fixture::el_us(tags::bits_stored, 12), fixture::el_us(tags::high_bit, 11)};
    EXPECT_EQ(decode_pixels(make_image(spec), 0).values, (std::vector<std::int32_t>{0x123}));
}

}  // namespace
