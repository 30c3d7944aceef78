#include "memclf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace memclf {

// ------------------------------------------------------ color dataset ---

void ColorDatasetSpec::validate() const {
    if (!(w > 0 && w < L)) throw std::invalid_argument("ColorDatasetSpec: need 0 < w < L");
    if (alphas.empty()) throw std::invalid_argument("ColorDatasetSpec: no classes");
    std::set<std::array<std::uint8_t, 3>> distinct(alphas.begin(), alphas.end());
    if (distinct.size() != alphas.size())
        throw std::invalid_argument("ColorDatasetSpec: duplicate class colors");
    if (n_train < 0 || n_test < 0 || n_train + n_test == 0)
        throw std::invalid_argument("ColorDatasetSpec: bad split sizes");
}

std::pair<double, double> sample_patch_center(int L, int w, Rng& rng) {
    if (!(w > 0 && w < L)) throw std::invalid_argument("sample_patch_center: need 0 < w < L");
    const double lo = w / 2.0, span = L - w;
    const double x = lo + rng.next_double() * span;
    const double y = lo + rng.next_double() * span;
    return {x, y};
}

Image render_color_image(const std::array<std::uint8_t, 3>& alpha, double x, double y,
                         int L, int w) {
    Image img(L, L);
    const int r0 = static_cast<int>(std::lround(x - w / 2.0));
    const int c0 = static_cast<int>(std::lround(y - w / 2.0));
    if (r0 < 0 || c0 < 0 || r0 + w > L || c0 + w > L)
        throw std::invalid_argument("render_color_image: patch leaves the image");
    for (int r = r0; r < r0 + w; ++r)
        for (int c = c0; c < c0 + w; ++c) img.set_rgb(r, c, alpha[0], alpha[1], alpha[2]);
    return img;
}

Image render_color_item(const ColorDatasetSpec& spec, int class_idx, int item_idx) {
    spec.validate();
    if (class_idx < 0 || class_idx >= static_cast<int>(spec.alphas.size()))
        throw std::invalid_argument("render_color_item: class index out of range");
    if (item_idx < 0 || item_idx >= spec.n_train + spec.n_test)
        throw std::invalid_argument("render_color_item: item index out of range");
    Rng rng(derive(derive(spec.seed, static_cast<std::uint64_t>(class_idx)),
                   static_cast<std::uint64_t>(item_idx)));
    auto [x, y] = sample_patch_center(spec.L, spec.w, rng);
    return render_color_image(spec.alphas[class_idx], x, y, spec.L, spec.w);
}

std::pair<LabeledDataset, LabeledDataset> generate_color_dataset(
    const ColorDatasetSpec& spec) {
    spec.validate();
    LabeledDataset train, test;
    for (std::size_t c = 0; c < spec.alphas.size(); ++c) {
        train.class_names.push_back("class_" + std::to_string(c));
        test.class_names.push_back("class_" + std::to_string(c));
    }
    for (int c = 0; c < static_cast<int>(spec.alphas.size()); ++c)
        for (int i = 0; i < spec.n_train + spec.n_test; ++i) {
            LabeledDataset& split = i < spec.n_train ? train : test;
            split.images.push_back(render_color_item(spec, c, i));
            split.labels.push_back(c);
        }
    return {std::move(train), std::move(test)};
}

// --------------------------------------------------- synthetic leaves ---

namespace {
// Palette picked for margin under channel noise: green sits deep inside its
// hue band, brown maximizes r-b spread (a zero blue channel can only gain
// from noise), discolored sits below the brown band so it cannot drift into
// green, and the background is pure black so clipping keeps it dark.
constexpr std::array<std::uint8_t, 3> kLeafGreen{20, 235, 20};
constexpr std::array<std::uint8_t, 3> kLeafBrown{140, 64, 0};
constexpr std::array<std::uint8_t, 3> kLeafDiscolored{230, 55, 45};
constexpr std::array<std::uint8_t, 3> kLeafBackground{0, 0, 0};
}  // namespace

SyntheticLeaf generate_synthetic_leaf(int L, std::pair<double, double> leaf_axes,
                                      double brown_fraction, double discolored_fraction,
                                      std::uint64_t seed) {
    if (L < 3) throw std::invalid_argument("generate_synthetic_leaf: image too small");
    if (brown_fraction < 0.0 || discolored_fraction < 0.0 ||
        brown_fraction + discolored_fraction > 1.0)
        throw std::invalid_argument(
            "generate_synthetic_leaf: fractions must be >= 0 and sum to <= 1");
    const double a = leaf_axes.first, b = leaf_axes.second;
    if (!(a > 0.0 && b > 0.0))
        throw std::invalid_argument("generate_synthetic_leaf: axes must be positive");
    // The ellipse needs a background margin so its green boundary ring (and
    // therefore the convex hull of green) survives intact.
    if (a > (L - 3) / 2.0 || b > (L - 3) / 2.0)
        throw std::invalid_argument("generate_synthetic_leaf: axes exceed the canvas");

    const double cr = (L - 1) / 2.0, cc = (L - 1) / 2.0;
    auto in_leaf = [&](int r, int c) {
        const double dr = (r - cr) / a, dc = (c - cc) / b;
        return dr * dr + dc * dc <= 1.0;
    };

    SyntheticLeaf leaf;
    leaf.image = Image(L, L);
    std::vector<char> mask(static_cast<std::size_t>(L) * L, 0);
    int leaf_count = 0;
    for (int r = 0; r < L; ++r)
        for (int c = 0; c < L; ++c) {
            if (in_leaf(r, c)) {
                mask[static_cast<std::size_t>(r) * L + c] = 1;
                ++leaf_count;
                leaf.image.set_rgb(r, c, kLeafGreen[0], kLeafGreen[1], kLeafGreen[2]);
            } else {
                leaf.image.set_rgb(r, c, kLeafBackground[0], kLeafBackground[1],
                                   kLeafBackground[2]);
            }
        }
    if (leaf_count == 0)
        throw std::invalid_argument("generate_synthetic_leaf: ellipse contains no pixels");

    // Recolor only strictly interior pixels (all 8 neighbors in the leaf):
    // the green boundary ring keeps the hull over every recolored pixel.
    std::vector<int> interior;
    for (int r = 1; r < L - 1; ++r)
        for (int c = 1; c < L - 1; ++c) {
            if (!mask[static_cast<std::size_t>(r) * L + c]) continue;
            bool inner = true;
            for (int dr = -1; dr <= 1 && inner; ++dr)
                for (int dc = -1; dc <= 1; ++dc)
                    if (!mask[static_cast<std::size_t>(r + dr) * L + (c + dc)]) {
                        inner = false;
                        break;
                    }
            if (inner) interior.push_back(r * L + c);
        }

    const double target_green = leaf_count / (1.0 + brown_fraction + discolored_fraction);
    const int n_brown = static_cast<int>(std::lround(brown_fraction * target_green));
    const int n_disc = static_cast<int>(std::lround(discolored_fraction * target_green));
    if (n_brown + n_disc > static_cast<int>(interior.size()))
        throw std::invalid_argument(
            "generate_synthetic_leaf: fractions infeasible for the ellipse size");

    Rng rng(seed);
    for (int i = 0; i < n_brown + n_disc; ++i) {  // partial Fisher-Yates
        const std::size_t j = i + rng.next_below(interior.size() - i);
        std::swap(interior[i], interior[j]);
        const int r = interior[i] / L, c = interior[i] % L;
        const auto& color = i < n_brown ? kLeafBrown : kLeafDiscolored;
        leaf.image.set_rgb(r, c, color[0], color[1], color[2]);
    }

    leaf.brown_count = n_brown;
    leaf.discolored_count = n_disc;
    leaf.green_count = leaf_count - n_brown - n_disc;
    if (leaf.green_count == 0) {
        leaf.f_b = leaf.f_d = 1.0;
    } else {
        leaf.f_b = std::min(1.0, static_cast<double>(n_brown) / leaf.green_count);
        leaf.f_d = std::min(1.0, static_cast<double>(n_disc) / leaf.green_count);
    }
    return leaf;
}

// --------------------------------------------------------- corruption ---

void CorruptionSpec::validate() const {
    if (std::find(corruption_kinds.begin(), corruption_kinds.end(), kind) ==
        corruption_kinds.end())
        throw std::invalid_argument("CorruptionSpec: unknown kind " + kind);
    if (severity < 1 || severity > 5)
        throw std::invalid_argument("CorruptionSpec: severity must be in [1,5]");
}

namespace {

std::vector<double> normalized(const Image& img) {
    std::vector<double> x(img.pixels.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = img.pixels[i] / 255.0;
    return x;
}

Image quantized(const std::vector<double>& x, int height, int width) {
    Image img(height, width);
    for (std::size_t i = 0; i < x.size(); ++i)
        img.pixels[i] =
            static_cast<std::uint8_t>(std::lround(std::clamp(x[i], 0.0, 1.0) * 255.0));
    return img;
}

}  // namespace

namespace detail {

Image apply_gaussian_noise(const Image& img, double sigma, std::uint64_t seed) {
    std::vector<double> x = normalized(img);
    Rng rng(seed);
    for (double& v : x) v += rng.next_normal(0.0, sigma);
    return quantized(x, img.height, img.width);
}

Image apply_shot_noise(const Image& img, double lambda, std::uint64_t seed) {
    if (!(lambda > 0.0)) throw std::invalid_argument("shot noise: lambda must be positive");
    std::vector<double> x = normalized(img);
    Rng rng(seed);
    for (double& v : x) v = static_cast<double>(rng.next_poisson(v * lambda)) / lambda;
    return quantized(x, img.height, img.width);
}

Image apply_impulse_noise(const Image& img, double fraction, std::uint64_t seed) {
    std::vector<double> x = normalized(img);
    Rng rng(seed);
    const int n = img.height * img.width;
    for (int i = 0; i < n; ++i) {
        if (rng.next_double() >= fraction) continue;
        const double v = rng.next_double() < 0.5 ? 1.0 : 0.0;  // salt or pepper
        x[static_cast<std::size_t>(i) * 3] = v;
        x[static_cast<std::size_t>(i) * 3 + 1] = v;
        x[static_cast<std::size_t>(i) * 3 + 2] = v;
    }
    return quantized(x, img.height, img.width);
}

Image apply_brightness(const Image& img, double delta) {
    Image out(img.height, img.width);
    const int n = img.height * img.width;
    for (int i = 0; i < n; ++i) {
        const std::size_t p = static_cast<std::size_t>(i) * 3;
        Hsv hsv = rgb_to_hsv(img.pixels[p], img.pixels[p + 1], img.pixels[p + 2]);
        auto rgb = hsv_to_rgb(hsv.h, hsv.s, std::clamp(hsv.v + delta, 0.0, 1.0));
        out.pixels[p] = rgb[0];
        out.pixels[p + 1] = rgb[1];
        out.pixels[p + 2] = rgb[2];
    }
    return out;
}

Image apply_contrast(const Image& img, double factor) {
    std::vector<double> x = normalized(img);
    double mean[3] = {0.0, 0.0, 0.0};
    const int n = img.height * img.width;
    for (int i = 0; i < n; ++i)
        for (int ch = 0; ch < 3; ++ch) mean[ch] += x[static_cast<std::size_t>(i) * 3 + ch];
    for (double& m : mean) m /= n;
    for (int i = 0; i < n; ++i)
        for (int ch = 0; ch < 3; ++ch) {
            double& v = x[static_cast<std::size_t>(i) * 3 + ch];
            v = (v - mean[ch]) * factor + mean[ch];
        }
    return quantized(x, img.height, img.width);
}

Image apply_saturate(const Image& img, double factor) {
    Image out(img.height, img.width);
    const int n = img.height * img.width;
    for (int i = 0; i < n; ++i) {
        const std::size_t p = static_cast<std::size_t>(i) * 3;
        Hsv hsv = rgb_to_hsv(img.pixels[p], img.pixels[p + 1], img.pixels[p + 2]);
        auto rgb = hsv_to_rgb(hsv.h, std::clamp(hsv.s * factor, 0.0, 1.0), hsv.v);
        out.pixels[p] = rgb[0];
        out.pixels[p + 1] = rgb[1];
        out.pixels[p + 2] = rgb[2];
    }
    return out;
}

Image apply_pixelate(const Image& img, double scale) {
    if (!(scale > 0.0 && scale <= 1.0))
        throw std::invalid_argument("pixelate: scale must be in (0,1]");
    const int h = img.height, w = img.width;
    const int h2 = std::max(1, static_cast<int>(std::lround(h * scale)));
    const int w2 = std::max(1, static_cast<int>(std::lround(w * scale)));
    std::vector<double> down(static_cast<std::size_t>(h2) * w2 * 3, 0.0);
    for (int i = 0; i < h2; ++i) {
        const int r0 = i * h / h2;
        const int r1 = std::max(r0 + 1, (i + 1) * h / h2);
        for (int j = 0; j < w2; ++j) {
            const int c0 = j * w / w2;
            const int c1 = std::max(c0 + 1, (j + 1) * w / w2);
            double sum[3] = {0.0, 0.0, 0.0};
            for (int r = r0; r < r1; ++r)
                for (int c = c0; c < c1; ++c)
                    for (int ch = 0; ch < 3; ++ch) sum[ch] += img.at(r, c, ch) / 255.0;
            const double count = static_cast<double>(r1 - r0) * (c1 - c0);
            for (int ch = 0; ch < 3; ++ch)
                down[(static_cast<std::size_t>(i) * w2 + j) * 3 + ch] = sum[ch] / count;
        }
    }
    std::vector<double> up(static_cast<std::size_t>(h) * w * 3);
    for (int r = 0; r < h; ++r) {
        const int sr = std::min(h2 - 1, r * h2 / h);
        for (int c = 0; c < w; ++c) {
            const int sc = std::min(w2 - 1, c * w2 / w);
            for (int ch = 0; ch < 3; ++ch)
                up[(static_cast<std::size_t>(r) * w + c) * 3 + ch] =
                    down[(static_cast<std::size_t>(sr) * w2 + sc) * 3 + ch];
        }
    }
    return quantized(up, h, w);
}

Image apply_gaussian_blur(const Image& img, double sigma) {
    if (sigma <= 0.0) return img;
    const int radius = std::max(1, static_cast<int>(std::lround(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double norm = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        kernel[k + radius] = std::exp(-(k * k) / (2.0 * sigma * sigma));
        norm += kernel[k + radius];
    }
    for (double& k : kernel) k /= norm;

    const int h = img.height, w = img.width;
    std::vector<double> x = normalized(img);
    std::vector<double> tmp(x.size());
    // Horizontal pass, clamped at the edges.
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            for (int ch = 0; ch < 3; ++ch) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    const int cc = std::clamp(c + k, 0, w - 1);
                    acc += kernel[k + radius] * x[(static_cast<std::size_t>(r) * w + cc) * 3 + ch];
                }
                tmp[(static_cast<std::size_t>(r) * w + c) * 3 + ch] = acc;
            }
    // Vertical pass.
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            for (int ch = 0; ch < 3; ++ch) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    const int rr = std::clamp(r + k, 0, h - 1);
                    acc += kernel[k + radius] * tmp[(static_cast<std::size_t>(rr) * w + c) * 3 + ch];
                }
                x[(static_cast<std::size_t>(r) * w + c) * 3 + ch] = acc;
            }
    return quantized(x, h, w);
}

}  // namespace detail

Image corrupt(const Image& img, const CorruptionSpec& spec) {
    spec.validate();
    const int s = spec.severity - 1;
    if (spec.kind == "gaussian_noise")
        return detail::apply_gaussian_noise(img, severity::gaussian_sigma[s], spec.seed);
    if (spec.kind == "shot_noise")
        return detail::apply_shot_noise(img, severity::shot_lambda[s], spec.seed);
    if (spec.kind == "impulse_noise")
        return detail::apply_impulse_noise(img, severity::impulse_fraction[s], spec.seed);
    if (spec.kind == "brightness")
        return detail::apply_brightness(img, severity::brightness_delta[s]);
    if (spec.kind == "contrast")
        return detail::apply_contrast(img, severity::contrast_factor[s]);
    if (spec.kind == "saturate")
        return detail::apply_saturate(img, severity::saturate_factor[s]);
    if (spec.kind == "pixelate")
        return detail::apply_pixelate(img, severity::pixelate_scale[s]);
    return detail::apply_gaussian_blur(img, severity::blur_sigma[s]);
}

}  // namespace memclf
