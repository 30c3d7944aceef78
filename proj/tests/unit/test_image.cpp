#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "memclf/image.hpp"
#include "memclf/rng.hpp"

using namespace memclf;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("pixel addressing is row-major interleaved") {
    Image img(2, 3);
    img.set_rgb(1, 2, 10, 20, 30);
    CHECK(img.pixels.size() == 18);
    CHECK(img.pixels[(1 * 3 + 2) * 3 + 0] == 10);
    CHECK(img.pixels[(1 * 3 + 2) * 3 + 1] == 20);
    CHECK(img.pixels[(1 * 3 + 2) * 3 + 2] == 30);
    CHECK(img.at(1, 2, 1) == 20);
    img.set(0, 0, 2, 99);
    CHECK(img.at(0, 0, 2) == 99);
}

TEST_CASE("rgb/hsv round trip on primaries and greys") {
    struct Case {
        std::uint8_t r, g, b;
        double h, s, v;
    };
    // Hand-computed via the standard hexcone formulas.
    const Case cases[] = {
        {255, 0, 0, 0.0, 1.0, 1.0},
        {0, 255, 0, 120.0, 1.0, 1.0},
        {0, 0, 255, 240.0, 1.0, 1.0},
        {255, 255, 0, 60.0, 1.0, 1.0},
        {0, 0, 0, 0.0, 0.0, 0.0},
        {255, 255, 255, 0.0, 0.0, 1.0},
        {128, 128, 128, 0.0, 0.0, 128.0 / 255.0},
        {40, 200, 40, 120.0, 0.8, 200.0 / 255.0},
    };
    for (const Case& c : cases) {
        CAPTURE((int)c.r);
        CAPTURE((int)c.g);
        CAPTURE((int)c.b);
        Hsv hsv = rgb_to_hsv(c.r, c.g, c.b);
        CHECK(hsv.h == doctest::Approx(c.h).epsilon(1e-9));
        CHECK(hsv.s == doctest::Approx(c.s).epsilon(1e-9));
        CHECK(hsv.v == doctest::Approx(c.v).epsilon(1e-9));
        auto rgb = hsv_to_rgb(hsv.h, hsv.s, hsv.v);
        CHECK(rgb[0] == c.r);
        CHECK(rgb[1] == c.g);
        CHECK(rgb[2] == c.b);
    }
}

TEST_CASE("rgb -> hsv -> rgb recovers every byte exactly on random colors") {
    Rng rng(31);
    for (int i = 0; i < 2000; ++i) {
        auto r = static_cast<std::uint8_t>(rng.next_below(256));
        auto g = static_cast<std::uint8_t>(rng.next_below(256));
        auto b = static_cast<std::uint8_t>(rng.next_below(256));
        Hsv hsv = rgb_to_hsv(r, g, b);
        CHECK(hsv.h >= 0.0);
        CHECK(hsv.h < 360.0);
        auto back = hsv_to_rgb(hsv.h, hsv.s, hsv.v);
        CHECK(back[0] == r);
        CHECK(back[1] == g);
        CHECK(back[2] == b);
    }
}

TEST_CASE("ppm round trip preserves every pixel") {
    Rng rng(77);
    Image img(13, 9);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.next_below(256));
    auto path = temp_file("memclf_roundtrip.ppm");
    write_ppm(img, path.string());
    Image back = read_ppm(path.string());
    CHECK(back == img);
    std::filesystem::remove(path);
}

TEST_CASE("ppm reader accepts comments and flexible whitespace") {
    auto path = temp_file("memclf_comments.ppm");
    {
        std::ofstream out(path, std::ios::binary);
        out << "P6\n# a comment\n2 # trailing\n1\n# another\n255\n";
        const unsigned char payload[] = {1, 2, 3, 4, 5, 6};
        out.write(reinterpret_cast<const char*>(payload), 6);
    }
    Image img = read_ppm(path.string());
    CHECK(img.width == 2);
    CHECK(img.height == 1);
    CHECK(img.at(0, 0, 0) == 1);
    CHECK(img.at(0, 1, 2) == 6);
    std::filesystem::remove(path);
}

TEST_CASE("ppm reader rejects malformed input") {
    auto path = temp_file("memclf_bad.ppm");

    auto write_file = [&](const std::string& header, int payload_bytes) {
        std::ofstream out(path, std::ios::binary);
        out << header;
        for (int i = 0; i < payload_bytes; ++i) out.put('\0');
    };

    write_file("P5\n2 1\n255\n", 6);  // wrong magic
    CHECK_THROWS_AS(read_ppm(path.string()), std::runtime_error);

    write_file("P6\n2 1\n65535\n", 12);  // unsupported maxval
    CHECK_THROWS_AS(read_ppm(path.string()), std::runtime_error);

    write_file("P6\n2 1\n255\n", 5);  // truncated payload
    CHECK_THROWS_AS(read_ppm(path.string()), std::runtime_error);

    CHECK_THROWS_AS(read_ppm("/nonexistent/definitely_missing.ppm"), std::runtime_error);
    std::filesystem::remove(path);
}
