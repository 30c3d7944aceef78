#include "memclf/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "memclf/geometry.hpp"
#include "memclf/segmentation.hpp"

namespace memclf {

using nlohmann::json;

ColorClass color_feature(const Image& img, int T, int quantization_step,
                         double darkness_floor) {
    if (T < 1) throw std::invalid_argument("color_feature: T must be >= 1");
    std::vector<SegmentStats> segments = segment_stats(img, quantization_step);
    double best_intensity = -1.0;
    int best_channel = -1;
    const int limit = std::min<int>(T, static_cast<int>(segments.size()));
    for (int s = 0; s < limit; ++s) {
        const auto& rgb = segments[s].mean_rgb;
        int channel = 0;
        for (int ch = 1; ch < 3; ++ch)
            if (rgb[ch] > rgb[channel]) channel = ch;
        if (rgb[channel] < darkness_floor) continue;
        if (rgb[channel] > best_intensity) {  // strict: earlier (larger) segment wins ties
            best_intensity = rgb[channel];
            best_channel = channel;
        }
    }
    return static_cast<ColorClass>(best_channel);
}

bool HsvRange::contains(const Hsv& p) const {
    if (p.s < s_lo || p.s > s_hi || p.v < v_lo || p.v > v_hi) return false;
    if (h_lo <= h_hi) return p.h >= h_lo && p.h <= h_hi;
    return p.h >= h_lo || p.h <= h_hi;  // wrapped hue band
}

LeafFeatures leaf_features(const Image& img, const HsvThresholds& th) {
    if (img.height <= 0 || img.width <= 0)
        throw std::invalid_argument("leaf_features: empty image");
    std::vector<Hsv> hsv(static_cast<std::size_t>(img.height) * img.width);
    std::vector<PixelCoord> green_coords;
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c) {
            const Hsv p = rgb_to_hsv(img.at(r, c, 0), img.at(r, c, 1), img.at(r, c, 2));
            hsv[static_cast<std::size_t>(r) * img.width + c] = p;
            if (th.green.contains(p)) green_coords.push_back({r, c});
        }
    if (green_coords.empty()) return {1.0, 1.0, 0, 0, 0};

    LeafFeatures out;
    std::vector<PixelCoord> hull = convex_hull(std::move(green_coords));
    for (int r = 0; r < img.height; ++r) {
        auto extent = hull_row_extent(hull, r);
        if (!extent) continue;
        int c_lo = std::max(0, static_cast<int>(std::ceil(extent->first - 1e-9)));
        int c_hi = std::min(img.width - 1, static_cast<int>(std::floor(extent->second + 1e-9)));
        for (int c = c_lo; c <= c_hi; ++c) {
            const Hsv& p = hsv[static_cast<std::size_t>(r) * img.width + c];
            if (th.green.contains(p))
                ++out.green_count;
            else if (th.brown.contains(p))
                ++out.brown_count;
            else if (th.discolored.contains(p))
                ++out.discolored_count;
        }
    }
    if (out.green_count == 0) return {1.0, 1.0, 0, out.brown_count, out.discolored_count};
    out.f_d = std::min(1.0, static_cast<double>(out.discolored_count) / out.green_count);
    out.f_b = std::min(1.0, static_cast<double>(out.brown_count) / out.green_count);
    return out;
}

namespace {

std::array<double, 32> red_histogram(const Image& img) {
    std::array<double, 32> h{};
    const int n = img.height * img.width;
    for (int i = 0; i < n; ++i) ++h[img.pixels[static_cast<std::size_t>(i) * 3] >> 3];
    for (double& b : h) b /= n;
    return h;
}

}  // namespace

LesionFeatures lesion_features(const Image& crop, const Image& neighbor_patch,
                               int median_lesion_size, int overexposure_threshold) {
    if (median_lesion_size <= 0)
        throw std::invalid_argument("lesion_features: median_lesion_size must be > 0");
    if (crop.height <= 0 || crop.width <= 0 || neighbor_patch.height <= 0 ||
        neighbor_patch.width <= 0)
        throw std::invalid_argument("lesion_features: empty image");

    LesionFeatures out;
    const int n = crop.height * crop.width;
    int nonzero = 0, overexposed = 0;
    for (int i = 0; i < n; ++i) {
        const std::uint8_t r = crop.pixels[static_cast<std::size_t>(i) * 3];
        const std::uint8_t g = crop.pixels[static_cast<std::size_t>(i) * 3 + 1];
        const std::uint8_t b = crop.pixels[static_cast<std::size_t>(i) * 3 + 2];
        if (r || g || b) ++nonzero;
        if (std::min({r, g, b}) >= overexposure_threshold) ++overexposed;
    }
    out.sz = static_cast<double>(nonzero) / median_lesion_size;
    out.sat = overexposed * 2 > n ? 1.0 : 0.0;

    const std::array<double, 32> h1 = red_histogram(crop);
    const std::array<double, 32> h2 = red_histogram(neighbor_patch);
    double m1 = 0, m2 = 0;
    for (int i = 0; i < 32; ++i) {
        m1 += h1[i];
        m2 += h2[i];
    }
    m1 /= 32;
    m2 /= 32;
    double cov = 0, v1 = 0, v2 = 0;
    for (int i = 0; i < 32; ++i) {
        cov += (h1[i] - m1) * (h2[i] - m2);
        v1 += (h1[i] - m1) * (h1[i] - m1);
        v2 += (h2[i] - m2) * (h2[i] - m2);
    }
    if (v1 <= 0.0 || v2 <= 0.0) {
        out.rd = 0.0;  // flat histogram: no-difference convention
    } else {
        double rho = cov / std::sqrt(v1 * v2);
        out.rd = std::clamp(1.0 - rho, 0.0, 1.0);
    }
    return out;
}

double tree_similarity(const FeatureVector& x1, const FeatureVector& x2,
                       const DecisionTree& tree) {
    return tree.predict(x1) == tree.predict(x2) ? 1.0 : 0.0;
}

// -------------------------------------------------------- extractors ---

RawPixelExtractor::RawPixelExtractor(int grid) : grid_(grid) {
    if (grid < 1) throw std::invalid_argument("RawPixelExtractor: grid must be >= 1");
    static const char* channels[3] = {"r", "g", "b"};
    for (int r = 0; r < grid; ++r)
        for (int c = 0; c < grid; ++c)
            for (int ch = 0; ch < 3; ++ch)
                schema_.push_back("px_" + std::to_string(r) + "_" + std::to_string(c) + "_" +
                                  channels[ch]);
}

json RawPixelExtractor::params() const { return {{"grid", grid_}}; }

FeatureVector RawPixelExtractor::extract(const Image& img) const {
    if (img.height <= 0 || img.width <= 0)
        throw std::invalid_argument("RawPixelExtractor: empty image");
    FeatureVector fv;
    fv.schema = schema_;
    fv.values.reserve(schema_.size());
    for (int gr = 0; gr < grid_; ++gr) {
        // Box [r0, r1) covers the gr-th of grid_ equal slices (last box takes
        // the remainder); same for columns.
        int r0 = gr * img.height / grid_;
        int r1 = std::max(r0 + 1, (gr + 1) * img.height / grid_);
        r1 = std::min(r1, img.height);
        if (r0 >= img.height) r0 = img.height - 1, r1 = img.height;
        for (int gc = 0; gc < grid_; ++gc) {
            int c0 = gc * img.width / grid_;
            int c1 = std::max(c0 + 1, (gc + 1) * img.width / grid_);
            c1 = std::min(c1, img.width);
            if (c0 >= img.width) c0 = img.width - 1, c1 = img.width;
            double sum[3] = {0, 0, 0};
            for (int r = r0; r < r1; ++r)
                for (int c = c0; c < c1; ++c)
                    for (int ch = 0; ch < 3; ++ch) sum[ch] += img.at(r, c, ch);
            double count = static_cast<double>(r1 - r0) * (c1 - c0) * 255.0;
            for (int ch = 0; ch < 3; ++ch) fv.values.push_back(sum[ch] / count);
        }
    }
    return fv;
}

json LeafFeatureExtractor::params() const { return {{"thresholds", thresholds_to_json(th_)}}; }

FeatureVector LeafFeatureExtractor::extract(const Image& img) const {
    LeafFeatures lf = leaf_features(img, th_);
    return {{lf.f_d, lf.f_b}, {"F_d", "F_b"}};
}

std::shared_ptr<FeatureExtractor> make_extractor(const json& j) {
    const std::string id = j.at("id").get<std::string>();
    const json params = j.value("params", json::object());
    if (id == "raw_pixels") return std::make_shared<RawPixelExtractor>(params.value("grid", 8));
    if (id == "leaf") {
        HsvThresholds th;
        if (params.contains("thresholds")) th = thresholds_from_json(params.at("thresholds"));
        return std::make_shared<LeafFeatureExtractor>(th);
    }
    throw std::invalid_argument("make_extractor: unknown id " + id);
}

namespace {

json range_to_json(const HsvRange& r) {
    return {{"h", {r.h_lo, r.h_hi}}, {"s", {r.s_lo, r.s_hi}}, {"v", {r.v_lo, r.v_hi}}};
}

HsvRange range_from_json(const json& j) {
    HsvRange r;
    r.h_lo = j.at("h").at(0).get<double>();
    r.h_hi = j.at("h").at(1).get<double>();
    r.s_lo = j.at("s").at(0).get<double>();
    r.s_hi = j.at("s").at(1).get<double>();
    r.v_lo = j.at("v").at(0).get<double>();
    r.v_hi = j.at("v").at(1).get<double>();
    if (r.s_lo > r.s_hi || r.v_lo > r.v_hi)
        throw std::invalid_argument("HsvRange: min exceeds max");
    return r;
}

}  // namespace

json thresholds_to_json(const HsvThresholds& th) {
    return {{"green", range_to_json(th.green)},
            {"brown", range_to_json(th.brown)},
            {"discolored", range_to_json(th.discolored)}};
}

HsvThresholds thresholds_from_json(const json& j) {
    HsvThresholds th;
    th.green = range_from_json(j.at("green"));
    th.brown = range_from_json(j.at("brown"));
    th.discolored = range_from_json(j.at("discolored"));
    return th;
}

}  // namespace memclf
