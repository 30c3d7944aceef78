#pragma once

#include <array>
#include <vector>

#include "memclf/geometry.hpp"
#include "memclf/image.hpp"

namespace memclf {

struct SegmentStats {
    int size = 0;
    std::array<double, 3> mean_rgb{};  // means of the original (unquantized) pixels
};

struct Segment : SegmentStats {
    std::vector<PixelCoord> coords;  // row-major order
};

// Connected components (4-connectivity) of the color-quantized image: two
// adjacent pixels join iff all three channels land in the same
// quantization_step-wide bucket. Results are sorted by size descending,
// ties by first pixel in row-major order. quantization_step must be in
// [1, 128]; step 1 means exact-color components.
std::vector<SegmentStats> segment_stats(const Image& img, int quantization_step);
std::vector<Segment> segment_image(const Image& img, int quantization_step);

}  // namespace memclf
