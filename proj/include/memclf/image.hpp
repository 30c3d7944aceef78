#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace memclf {

// Interleaved 8-bit RGB raster, row-major.
struct Image {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> pixels;  // height * width * 3

    Image() = default;
    Image(int h, int w) : height(h), width(w), pixels(static_cast<std::size_t>(h) * w * 3, 0) {}

    std::size_t index(int row, int col) const {
        return (static_cast<std::size_t>(row) * width + col) * 3;
    }
    std::uint8_t at(int row, int col, int channel) const { return pixels[index(row, col) + channel]; }
    void set(int row, int col, int channel, std::uint8_t v) { pixels[index(row, col) + channel] = v; }
    void set_rgb(int row, int col, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        std::size_t i = index(row, col);
        pixels[i] = r;
        pixels[i + 1] = g;
        pixels[i + 2] = b;
    }
    bool operator==(const Image&) const = default;
};

struct Hsv {
    double h;  // degrees, [0, 360)
    double s;  // [0, 1]
    double v;  // [0, 1]
};

Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);
std::array<std::uint8_t, 3> hsv_to_rgb(double h, double s, double v);

// Binary PPM (P6, maxval 255). read throws std::runtime_error on malformed
// headers, unsupported maxval, or truncated payload.
Image read_ppm(const std::string& path);
void write_ppm(const Image& img, const std::string& path);

}  // namespace memclf
