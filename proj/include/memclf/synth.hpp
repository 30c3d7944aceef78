#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "memclf/dataset.hpp"
#include "memclf/image.hpp"
#include "memclf/rng.hpp"

namespace memclf {

// ------------------------------------------------------ color dataset ---

struct ColorDatasetSpec {
    int L = 500;  // image side
    int w = 50;   // patch side, 0 < w < L
    std::vector<std::array<std::uint8_t, 3>> alphas = {
        {255, 0, 0}, {0, 255, 0}, {0, 0, 255}};
    int n_train = 1000;  // per class
    int n_test = 100;    // per class
    std::uint64_t seed = 0;

    void validate() const;
};

// Patch center, iid uniform on [w/2, L-w/2]^2; x indexes rows, y columns.
std::pair<double, double> sample_patch_center(int L, int w, Rng& rng);

// Single w x w patch of color alpha on black; the patch occupies rows
// [lround(x - w/2), +w) and the matching columns — exactly w^2 colored
// pixels, always fully inside the image.
Image render_color_image(const std::array<std::uint8_t, 3>& alpha, double x, double y,
                         int L, int w);

// The item_idx-th image of a class under spec.seed; items [0, n_train) are
// the training split, [n_train, n_train + n_test) the test split. Streams
// are derived per (class, item), so any image regenerates independently.
Image render_color_item(const ColorDatasetSpec& spec, int class_idx, int item_idx);

// Materializes (train, test), class-major item order.
std::pair<LabeledDataset, LabeledDataset> generate_color_dataset(const ColorDatasetSpec& spec);

// --------------------------------------------------- synthetic leaves ---

struct SyntheticLeaf {
    Image image;
    double f_d = 0.0;  // ground truth: discolored / remaining green, clamped
    double f_b = 0.0;  // ground truth: brown / remaining green, clamped
    int green_count = 0;
    int brown_count = 0;
    int discolored_count = 0;
};

// Green ellipse (semi-axes (row, col)) on a dark background; randomly
// chosen interior pixels are recolored brown / discolored to approximate
// the requested fractions, and the exact resulting ratios are returned.
// The one-pixel boundary ring stays green, so the convex hull of green
// covers every recolored pixel. Throws std::invalid_argument when the
// fractions are infeasible for the ellipse size.
SyntheticLeaf generate_synthetic_leaf(int L, std::pair<double, double> leaf_axes,
                                      double brown_fraction, double discolored_fraction,
                                      std::uint64_t seed);

// --------------------------------------------------------- corruption ---

inline constexpr std::array<const char*, 8> corruption_kinds{
    "gaussian_noise", "shot_noise", "impulse_noise", "brightness",
    "contrast",       "saturate",   "pixelate",      "gaussian_blur"};

// Severity tables, index = severity - 1.
namespace severity {
inline constexpr std::array<double, 5> gaussian_sigma{0.08, 0.12, 0.18, 0.26, 0.38};
inline constexpr std::array<double, 5> shot_lambda{60.0, 25.0, 12.0, 5.0, 3.0};
inline constexpr std::array<double, 5> impulse_fraction{0.03, 0.06, 0.09, 0.17, 0.27};
inline constexpr std::array<double, 5> brightness_delta{0.1, 0.2, 0.3, 0.4, 0.5};
inline constexpr std::array<double, 5> contrast_factor{0.4, 0.3, 0.2, 0.1, 0.05};
inline constexpr std::array<double, 5> saturate_factor{0.3, 0.1, 2.0, 5.0, 20.0};
inline constexpr std::array<double, 5> pixelate_scale{0.6, 0.5, 0.4, 0.3, 0.25};
inline constexpr std::array<double, 5> blur_sigma{1.0, 2.0, 3.0, 4.0, 6.0};
}  // namespace severity

struct CorruptionSpec {
    std::string kind;
    int severity = 1;  // 1..5
    std::uint64_t seed = 0;

    void validate() const;
};

// Applies the corruption on a [0,1]-normalized copy, clamps, re-quantizes.
// Deterministic under spec.seed.
Image corrupt(const Image& img, const CorruptionSpec& spec);

// Raw-parameter forms, exposed so identity parameters (sigma 0, fraction 0,
// factor 1, ...) are testable outside the 1..5 severity range.
namespace detail {
Image apply_gaussian_noise(const Image& img, double sigma, std::uint64_t seed);
Image apply_shot_noise(const Image& img, double lambda, std::uint64_t seed);
Image apply_impulse_noise(const Image& img, double fraction, std::uint64_t seed);
Image apply_brightness(const Image& img, double delta);
Image apply_contrast(const Image& img, double factor);
Image apply_saturate(const Image& img, double factor);
Image apply_pixelate(const Image& img, double scale);
Image apply_gaussian_blur(const Image& img, double sigma);
}  // namespace detail

}  // namespace memclf
