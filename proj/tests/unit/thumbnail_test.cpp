#include "curator/common/error.hpp"
#include "curator/thumbnail/png.hpp"
#include "curator/thumbnail/render.hpp"
#include "curator/thumbnail/thumbnail.hpp"

#include "fixtures.hpp"
#include "render_oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace curator;
using namespace curator::thumbnail;
using fixture::ImageSpec;

namespace {

auto frame_of(std::vector<std::int32_t> values, std::uint32_t rows, std::uint32_t columns) -> dicom::PixelFrame {
    return {rows, columns, std::move(values)};
}

auto ptrs(const std::vector<dicom::DicomObject>& objs) -> std::vector<const dicom::DicomObject*> {
    std::vector<const dicom::DicomObject*> out;
    for (const auto& o : objs) out.push_back(&o);
    return out;
}

auto ct_series(int n, std::uint32_t size = 16) -> std::vector<dicom::DicomObject> {
    std::vector<dicom::DicomObject> out;
    for (int i = 1; i <= n; ++i) {
        ImageSpec s;
        s.sop_uid = "1.2.3.4.1." + std::to_string(i);
        s.instance_number = i;
        s.z = i;
        s.rows = size;
        s.columns = size;
        s.window = std::pair{40.0, 400.0};
        out.push_back(fixture::make_image(s));
    }
    return out;
}

auto non_gray(const RgbImage& img) -> std::size_t {
    std::size_t n = 0;
    for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
        if (img.rgb[i] != img.rgb[i + 1] || img.rgb[i + 1] != img.rgb[i + 2]) ++n;
    }
    return n;
}

}  // namespace

TEST(Window, SpecExamples) {
    EXPECT_EQ(window_value(40, 40, 400), 128);
    EXPECT_EQ(window_value(40 - 0.5 - 399.0 / 2, 40, 400), 0);
    EXPECT_EQ(window_value(-5000, 40, 400), 0);
    EXPECT_EQ(window_value(5000, 40, 400), 255);
}

TEST(Window, MatchesPiecewiseReference) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> iv(-3000, 3000);
    std::uniform_real_distribution<double> rv(-3000, 3000);
    std::uniform_real_distribution<double> rw(1.001, 5000);
    for (int i = 0; i < 10000; ++i) {
        const double v = i % 2 ? iv(rng) : rv(rng);
        const double c = i % 3 ? std::round(rv(rng) / 3) : rv(rng) / 3;
        const double w = i % 4 ? std::round(rw(rng)) + 1 : rw(rng);
        ASSERT_EQ(window_value(v, c, w), fixture::oracle_window(v, c, w)) << v << " " << c << " " << w;
    }
}

TEST(Window, MonotoneInValue) {
    for (double c : {-600.0, 0.0, 40.0, 1000.0}) {
        for (double w : {2.0, 80.0, 400.0, 1500.0}) {
            int prev = 0;
            for (int v = -2000; v <= 2000; ++v) {
                const int g = window_value(v, c, w);
                ASSERT_GE(g, prev);
                prev = g;
            }
        }
    }
}

TEST(Window, Monochrome1Inverts) {
    const auto f = frame_of({-1000, 40, 1000}, 1, 3);
    const auto normal = window_to_gray(f, {40, 400}, false);
    const auto inverted = window_to_gray(f, {40, 400}, true);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(inverted.pixels[i], 255 - normal.pixels[i]);
}

TEST(DefaultWindow, HeaderThenMinMax) {
    ImageSpec with;
    with.window = std::pair{40.0, 400.0};
    const auto f = frame_of({0, 1}, 1, 2);
    EXPECT_EQ(default_window(fixture::make_image(with), f), (WindowSpec{40, 400}));
    ImageSpec without;
    const auto obj = fixture::make_image(without);
    EXPECT_EQ(default_window(obj, frame_of({-1000, 0, 1000}, 1, 3)), (WindowSpec{0, 2000}));
    EXPECT_EQ(default_window(obj, frame_of({0, 0, 0}, 1, 3)), (WindowSpec{0, 2}));
    ImageSpec narrow;
    narrow.window = std::pair{10.0, 1.0};
    EXPECT_EQ(default_window(fixture::make_image(narrow), frame_of({0, 10}, 1, 2)), (WindowSpec{5, 10}));
}

TEST(SelectSlice, MedianByInstanceNumber) {
    auto five = ct_series(5);
    std::swap(five[0], five[3]);
    const auto c5 = select_slice(ptrs(five));
    EXPECT_EQ(five[c5.instance].number(dicom::tags::instance_number), 3);
    const auto four = ct_series(4);
    EXPECT_EQ(four[select_slice(ptrs(four)).instance].number(dicom::tags::instance_number), 2);
}

TEST(SelectSlice, MiddleFrameOfMultiFrame) {
    ImageSpec s;
    s.frames = 7;
    const auto obj = fixture::make_image(s);
    EXPECT_EQ(select_slice({&obj}), (SliceChoice{0, 3}));
}

TEST(SelectSlice, MissingInstanceNumberSortsLastThenByUid) {
    std::vector<dicom::DicomObject> objs;
    for (const auto& [uid, num] : std::vector<std::pair<std::string, std::optional<int>>>{
             {"1.9", std::nullopt}, {"1.8", std::nullopt}, {"1.5", 2}, {"1.1", 1}}) {
        ImageSpec s;
        s.sop_uid = uid;
        s.instance_number = num;
        objs.push_back(fixture::make_image(s));
    }
    const auto order = order_instances(ptrs(objs));
    EXPECT_EQ(order, (std::vector<std::size_t>{3, 2, 1, 0}));
}

TEST(SelectSlice, NoPixelsThrows) {
    auto obj = fixture::make_image({});
    obj.pixel_payload.reset();
    try {
        (void)select_slice({&obj});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::no_renderable_instance);
    }
}

TEST(Overlay, BlendFormula) {
    GrayImage base{1, 2, {100, 100}};
    ThumbnailConfig cfg;
    cfg.palette = {{255, 0, 0}};
    const auto out = render_overlay(base, {{1, std::nullopt, {1, 2, {1, 0}}}}, cfg);
    EXPECT_EQ(out.at(0, 0), (Rgb{178, 50, 50}));
    EXPECT_EQ(out.at(0, 1), (Rgb{100, 100, 100}));
}

TEST(Overlay, EmptyMaskIsGrayCopy) {
    GrayImage base{2, 2, {0, 50, 100, 255}};
    EXPECT_EQ(render_overlay(base, {{1, std::nullopt, {2, 2, {0, 0, 0, 0}}}}, {}), gray_to_rgb(base));
}

TEST(Overlay, LaterSegmentWins) {
    GrayImage base{1, 1, {100}};
    ThumbnailConfig cfg;
    cfg.palette = {{255, 0, 0}, {0, 0, 255}};
    const auto out = render_overlay(base, {{2, std::nullopt, {1, 1, {1}}}, {1, std::nullopt, {1, 1, {1}}}}, cfg);
    EXPECT_EQ(out.at(0, 0), (Rgb{50, 50, 178}));
}

TEST(Overlay, AlphaExtremes) {
    GrayImage base{1, 2, {77, 200}};
    ThumbnailConfig cfg;
    cfg.overlay_alpha = 0;
    EXPECT_EQ(render_overlay(base, {{3, std::nullopt, {1, 2, {1, 1}}}}, cfg), gray_to_rgb(base));
    cfg.overlay_alpha = 1;
    const auto out = render_overlay(base, {{3, std::nullopt, {1, 2, {1, 0}}}}, cfg);
    EXPECT_EQ(out.at(0, 0), cfg.palette[2]);
    EXPECT_EQ(out.at(0, 1), (Rgb{200, 200, 200}));
}

TEST(Overlay, PaletteWrapsAndExplicitColorWins) {
    GrayImage base{1, 1, {0}};
    ThumbnailConfig cfg;
    cfg.overlay_alpha = 1;
    EXPECT_EQ(render_overlay(base, {{11, std::nullopt, {1, 1, {1}}}}, cfg).at(0, 0), cfg.palette[0]);
    EXPECT_EQ(render_overlay(base, {{1, Rgb{1, 2, 3}, {1, 1, {1}}}}, cfg).at(0, 0), (Rgb{1, 2, 3}));
}

TEST(Overlay, DimensionMismatch) {
    GrayImage base{2, 2, {0, 0, 0, 0}};
    try {
        (void)render_overlay(base, {{1, std::nullopt, {1, 4, {0, 0, 0, 0}}}}, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
    }
}

TEST(Rasterize, SquareFillsInclusiveBlock) {
    const auto m = rasterize_polygon({{0, 0}, {10, 0}, {10, 10}, {0, 10}}, 16, 16);
    EXPECT_EQ(m.area(), 121U);
    for (std::uint32_t r = 0; r < 16; ++r) {
        for (std::uint32_t c = 0; c < 16; ++c) EXPECT_EQ(m.bits[r * 16 + c], (r <= 10 && c <= 10) ? 1 : 0);
    }
}

TEST(Rasterize, TriangleMatchesPointInPolygon) {
    const std::vector<std::array<double, 2>> tri = {{1.2, 1.7}, {13.4, 4.5}, {5.5, 14.49}};
    const auto m = rasterize_polygon(tri, 16, 16);
    EXPECT_EQ(m.bits, fixture::oracle_polygon(tri, 16, 16));
    EXPECT_GT(m.area(), 0U);
}

TEST(Rasterize, RandomPolygonsMatchPointInPolygon) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 200; ++i) {
        const std::uint32_t rows = 8 + rng() % 40;
        const std::uint32_t cols = 8 + rng() % 40;
        const auto poly = fixture::random_simple_polygon(rng, rows, cols);
        ASSERT_EQ(rasterize_polygon(poly, rows, cols).bits, fixture::oracle_polygon(poly, rows, cols)) << i;
    }
}

TEST(Rasterize, HalfUpVertexRounding) {
    // 2.5 rounds to 3 and -0.5 rounds to 0
    const auto m = rasterize_polygon({{-0.5, -0.5}, {2.5, -0.5}, {2.5, 2.5}, {-0.5, 2.5}}, 5, 5);
    EXPECT_EQ(m.area(), 16U);
}

TEST(RasterizeContours, MapsPatientToPixelAndHonoursColor) {
    dicom::ContourSet set;
    dicom::Roi roi;
    roi.roi_number = 2;
    roi.color = std::array<std::uint8_t, 3>{255, 0, 0};
    roi.contours.push_back({"", "CLOSED_PLANAR", {{-10, -10, 5}, {0, -10, 5}, {0, 0, 5}, {-10, 0, 5}}});
    roi.contours.push_back({"", "CLOSED_PLANAR", {{-10, -10, 9}, {0, -10, 9}, {0, 0, 9}}});
    set.rois.push_back(roi);
    SliceGeometry g;
    g.origin_x = -20;
    g.origin_y = -20;
    g.row_spacing = 2;
    g.column_spacing = 2;
    g.z = 5.4;
    g.slice_spacing = 1;
    g.rows = 16;
    g.columns = 16;
    const auto layers = rasterize_contours(set, g);
    ASSERT_EQ(layers.size(), 1U);
    EXPECT_EQ(layers[0].number, 2U);
    EXPECT_EQ(layers[0].color, (Rgb{255, 0, 0}));
    EXPECT_EQ(layers[0].mask.bits, fixture::oracle_polygon({{5, 5}, {10, 5}, {10, 10}, {5, 10}}, 16, 16));
    g.z = 7;
    EXPECT_EQ(rasterize_contours(set, g)[0].mask.area(), 0U);
}

TEST(RasterizeContours, RejectsOblique) {
    SliceGeometry g;
    g.rows = g.columns = 4;
    g.orientation = {0, 1, 0, 0, 0, -1};
    try {
        (void)rasterize_contours({}, g);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::unsupported_orientation);
    }
}

TEST(Letterbox, FitsAndCentres) {
    RgbImage wide{8, 16, std::vector<std::uint8_t>(8 * 16 * 3, 255)};
    const auto out = fit_letterbox(wide, 128, {0, 0, 0});
    EXPECT_EQ(out.rows, 128U);
    EXPECT_EQ(out.columns, 128U);
    EXPECT_EQ(out.at(31, 64), (Rgb{0, 0, 0}));
    EXPECT_EQ(out.at(32, 0), (Rgb{255, 255, 255}));
    EXPECT_EQ(out.at(95, 127), (Rgb{255, 255, 255}));
    EXPECT_EQ(out.at(96, 64), (Rgb{0, 0, 0}));
}

TEST(Letterbox, NearestNeighbourPicksSourcePixels) {
    RgbImage img{2, 2, {10, 10, 10, 20, 20, 20, 30, 30, 30, 40, 40, 40}};
    const auto out = fit_letterbox(img, 32, {0, 0, 0});
    EXPECT_EQ(out.at(0, 0), (Rgb{10, 10, 10}));
    EXPECT_EQ(out.at(15, 16), (Rgb{20, 20, 20}));
    EXPECT_EQ(out.at(16, 15), (Rgb{30, 30, 30}));
    EXPECT_EQ(out.at(31, 31), (Rgb{40, 40, 40}));
}

TEST(Placeholder, DrawsTextDeterministically) {
    const auto a = placeholder_card("SR", 128, {0, 0, 0});
    EXPECT_EQ(a, placeholder_card("SR", 128, {0, 0, 0}));
    EXPECT_NE(a, placeholder_card("PR", 128, {0, 0, 0}));
    std::size_t lit = 0;
    for (std::size_t i = 0; i < a.rgb.size(); i += 3) lit += a.rgb[i] != 0;
    EXPECT_GT(lit, 0U);
    EXPECT_EQ(glyph('z'), glyph('Z'));
    EXPECT_EQ(glyph('%'), glyph('?'));
}

TEST(Png, RoundTripAndSignature) {
    RgbImage img{3, 5, {}};
    for (int i = 0; i < 45; ++i) img.rgb.push_back(static_cast<std::uint8_t>(i * 5));
    const auto png = encode_png(img);
    ASSERT_GT(png.size(), 8U);
    EXPECT_EQ(png[1], 'P');
    EXPECT_EQ(decode_png(png), img);
    EXPECT_EQ(encode_png(img), png);
}

TEST(Thumbnail, CtSeriesIsEdgeSquareAndDeterministic) {
    const auto series = ct_series(5);
    SeriesInput in{"CT", ptrs(series), {}, {}};
    const auto a = make_thumbnail(in, {});
    EXPECT_EQ(a, make_thumbnail(in, {}));
    const auto img = decode_png(a);
    EXPECT_EQ(img.rows, 128U);
    EXPECT_EQ(img.columns, 128U);
    EXPECT_EQ(non_gray(img), 0U);
}

TEST(Thumbnail, SegOverlayIsColouredOnMaskSlice) {
    const auto series = ct_series(5);
    fixture::SegSpec spec;
    std::vector<std::uint8_t> mask(256, 0);
    for (int r = 4; r < 10; ++r) {
        for (int c = 4; c < 10; ++c) mask[r * 16 + c] = 1;
    }
    spec.frames.push_back({1, "1.2.3.4.1.5", mask});
    const auto seg = fixture::make_seg(spec);
    SeriesInput in{"CT", ptrs(series), {&seg}, {}};
    const auto a = make_thumbnail(in, {});
    EXPECT_EQ(a, make_thumbnail(in, {}));
    const auto img = decode_png(a);
    EXPECT_EQ(non_gray(img), 36U * 64U);
    // the mask lives on instance 5, not the median; the shown slice must carry it
    const auto plain = decode_png(make_thumbnail({"CT", ptrs(series), {}, {}}, {}));
    EXPECT_NE(img, plain);
}

TEST(Thumbnail, RtStructOverlayUsesRoiColour) {
    const auto series = ct_series(3);
    fixture::RtStructSpec spec;
    fixture::RoiSpec roi;
    roi.color = std::array<int, 3>{0, 255, 0};
    roi.contours.push_back({"1.2.3.4.1.1", {2, 2, 1, 12, 2, 1, 12, 12, 1, 2, 12, 1}});
    spec.rois.push_back(roi);
    const auto rt = fixture::make_rtstruct(spec);
    ThumbnailConfig cfg;
    cfg.overlay_alpha = 1;
    const auto img = render_thumbnail({"CT", ptrs(series), {}, {&rt}}, cfg);
    std::size_t green = 0;
    for (std::size_t i = 0; i < img.rgb.size(); i += 3) green += img.rgb[i] == 0 && img.rgb[i + 1] == 255 && img.rgb[i + 2] == 0;
    EXPECT_EQ(green, 121U * 64U);
}

TEST(Thumbnail, NonImageAndBrokenSeriesBecomeCards) {
    const auto series = ct_series(1);
    ThumbnailConfig cfg;
    EXPECT_EQ(render_thumbnail({"SR", ptrs(series), {}, {}}, cfg), placeholder_card("SR", 128, cfg.background));
    EXPECT_EQ(render_thumbnail({"CT", {}, {}, {}}, cfg), placeholder_card("CT", 128, cfg.background));
    auto broken = series;
    broken[0].pixel_payload->bytes.resize(3);
    EXPECT_EQ(render_thumbnail({"CT", ptrs(broken), {}, {}}, cfg), placeholder_card("ERR CT", 128, cfg.background));
}

TEST(Thumbnail, EdgeFollowsConfig) {
    const auto series = ct_series(2);
    ThumbnailConfig cfg;
    cfg.edge = 64;
    EXPECT_EQ(decode_png(make_thumbnail({"CT", ptrs(series), {}, {}}, cfg)).rows, 64U);
    cfg.edge = 31;
    EXPECT_THROW((void)make_thumbnail({"CT", ptrs(series), {}, {}}, cfg), Error);
}

TEST(Slices, CountAndRenderInDisplayOrder) {
    auto series = ct_series(3);
    ImageSpec mf;
    mf.sop_uid = "1.2.3.4.1.9";
    mf.instance_number = 9;
    mf.frames = 4;
    series.push_back(fixture::make_image(mf));
    EXPECT_EQ(slice_count(ptrs(series)), 7U);
    const auto png = render_slice_png(ptrs(series), 6);
    EXPECT_EQ(decode_png(png).rows, 16U);
    EXPECT_THROW((void)render_slice_png(ptrs(series), 7), Error);
}

TEST(Cache, LayoutStoreLoadInvalidate) {
    fixture::TempDir dir;
    ThumbnailCache cache(dir.path() / "thumbs");
    ThumbnailConfig cfg;
    const auto p = cache.path_for("1.2.840.5", cfg);
    EXPECT_EQ(p, dir.path() / "thumbs" / "1." / ("1.2.840.5_" + cfg.hash() + ".png"));
    EXPECT_EQ(cfg.hash().size(), 16U);
    EXPECT_FALSE(cache.load("1.2.840.5", cfg).has_value());
    cache.store("1.2.840.5", cfg, {1, 2, 3});
    EXPECT_EQ(cache.load("1.2.840.5", cfg), (std::vector<std::uint8_t>{1, 2, 3}));
    ThumbnailConfig other;
    other.edge = 256;
    EXPECT_NE(other.hash(), cfg.hash());
    cache.store("1.2.840.5", other, {4});
    cache.store("1.2.840.55", cfg, {5});
    cache.invalidate("1.2.840.5");
    EXPECT_FALSE(cache.load("1.2.840.5", cfg).has_value());
    EXPECT_FALSE(cache.load("1.2.840.5", other).has_value());
    EXPECT_TRUE(cache.load("1.2.840.55", cfg).has_value());
}
