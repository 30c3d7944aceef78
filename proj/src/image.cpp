#include "memclf/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace memclf {

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
    double cmax = std::max({r, g, b});
    double cmin = std::min({r, g, b});
    double d = cmax - cmin;
    double h = 0.0;
    if (d > 0.0) {
        if (cmax == r)
            h = 60.0 * std::fmod((g - b) / d, 6.0);
        else if (cmax == g)
            h = 60.0 * ((b - r) / d + 2.0);
        else
            h = 60.0 * ((r - g) / d + 4.0);
        if (h < 0.0) h += 360.0;
    }
    double s = cmax > 0.0 ? d / cmax : 0.0;
    return {h, s, cmax};
}

std::array<std::uint8_t, 3> hsv_to_rgb(double h, double s, double v) {
    h = std::fmod(h, 360.0);
    if (h < 0.0) h += 360.0;
    double c = v * s;
    double x = c * (1.0 - std::abs(std::fmod(h / 60.0, 2.0) - 1.0));
    double m = v - c;
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(h / 60.0)) {
        case 0: r = c; g = x; break;
        case 1: r = x; g = c; break;
        case 2: g = c; b = x; break;
        case 3: g = x; b = c; break;
        case 4: r = x; b = c; break;
        default: r = c; b = x; break;
    }
    auto to8 = [m](double u) {
        return static_cast<std::uint8_t>(std::lround(std::clamp(u + m, 0.0, 1.0) * 255.0));
    };
    return {to8(r), to8(g), to8(b)};
}

namespace {

// Reads one whitespace-delimited unsigned int, skipping '#' comments.
int read_header_int(std::FILE* f, const std::string& path) {
    int c = std::getc(f);
    for (;;) {
        while (c == ' ' || c == '\t' || c == '\r' || c == '\n') c = std::getc(f);
        if (c == '#') {
            while (c != '\n' && c != EOF) c = std::getc(f);
            continue;
        }
        break;
    }
    if (c < '0' || c > '9') throw std::runtime_error(path + ": malformed PPM header");
    long value = 0;
    while (c >= '0' && c <= '9') {
        value = value * 10 + (c - '0');
        if (value > 1000000000) throw std::runtime_error(path + ": PPM header value out of range");
        c = std::getc(f);
    }
    if (c != EOF) std::ungetc(c, f);
    return static_cast<int>(value);
}

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};

}  // namespace

Image read_ppm(const std::string& path) {
    std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "rb"));
    if (!f) throw std::runtime_error(path + ": cannot open");
    if (std::getc(f.get()) != 'P' || std::getc(f.get()) != '6')
        throw std::runtime_error(path + ": not a P6 PPM");
    int width = read_header_int(f.get(), path);
    int height = read_header_int(f.get(), path);
    int maxval = read_header_int(f.get(), path);
    if (width <= 0 || height <= 0) throw std::runtime_error(path + ": bad dimensions");
    if (maxval != 255) throw std::runtime_error(path + ": unsupported maxval (expected 255)");
    int c = std::getc(f.get());  // single whitespace byte before payload
    if (c != ' ' && c != '\t' && c != '\r' && c != '\n')
        throw std::runtime_error(path + ": malformed PPM header");
    Image img(height, width);
    if (std::fread(img.pixels.data(), 1, img.pixels.size(), f.get()) != img.pixels.size())
        throw std::runtime_error(path + ": truncated pixel data");
    return img;
}

void write_ppm(const Image& img, const std::string& path) {
    std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "wb"));
    if (!f) throw std::runtime_error(path + ": cannot open for writing");
    std::fprintf(f.get(), "P6\n%d %d\n255\n", img.width, img.height);
    if (std::fwrite(img.pixels.data(), 1, img.pixels.size(), f.get()) != img.pixels.size())
        throw std::runtime_error(path + ": short write");
}

}  // namespace memclf
