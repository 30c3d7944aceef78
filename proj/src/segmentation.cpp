#include "memclf/segmentation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace memclf {

namespace {

struct Labeling {
    std::vector<int> root;   // pixel index -> component root pixel index
    std::vector<int> order;  // component roots, size desc / first pixel asc
};

int find(std::vector<int>& parent, int i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

Labeling label_components(const Image& img, int step) {
    if (step < 1 || step > 128)
        throw std::invalid_argument("segmentation: quantization step out of [1, 128]");
    const int h = img.height, w = img.width;
    const int n = h * w;
    std::vector<std::uint8_t> bucket(static_cast<std::size_t>(n) * 3);
    for (std::size_t i = 0; i < bucket.size(); ++i)
        bucket[i] = static_cast<std::uint8_t>(img.pixels[i] / step);

    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto same = [&](int a, int b) {
        return bucket[a * 3] == bucket[b * 3] && bucket[a * 3 + 1] == bucket[b * 3 + 1] &&
               bucket[a * 3 + 2] == bucket[b * 3 + 2];
    };
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            int i = r * w + c;
            if (c > 0 && same(i, i - 1)) {
                int a = find(parent, i), b = find(parent, i - 1);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
            if (r > 0 && same(i, i - w)) {
                int a = find(parent, i), b = find(parent, i - w);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }

    Labeling out;
    out.root.resize(n);
    std::vector<int> size(n, 0);
    for (int i = 0; i < n; ++i) {
        out.root[i] = find(parent, i);
        ++size[out.root[i]];
    }
    for (int i = 0; i < n; ++i)
        if (out.root[i] == i) out.order.push_back(i);
    // Roots are the first pixel of their component (paths always point to the
    // smaller index), so root index doubles as the row-major tie-breaker.
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](int a, int b) { return size[a] != size[b] ? size[a] > size[b] : a < b; });
    return out;
}

template <typename Seg, bool WithCoords>
std::vector<Seg> collect(const Image& img, int step) {
    Labeling lab = label_components(img, step);
    const int n = img.height * img.width;
    std::vector<int> seg_of_root(n, -1);
    for (std::size_t s = 0; s < lab.order.size(); ++s) seg_of_root[lab.order[s]] = static_cast<int>(s);

    std::vector<Seg> segments(lab.order.size());
    for (int i = 0; i < n; ++i) {
        Seg& seg = segments[seg_of_root[lab.root[i]]];
        ++seg.size;
        for (int ch = 0; ch < 3; ++ch) seg.mean_rgb[ch] += img.pixels[i * 3 + ch];
        if constexpr (WithCoords) seg.coords.push_back({i / img.width, i % img.width});
    }
    for (Seg& seg : segments)
        for (double& m : seg.mean_rgb) m /= seg.size;
    return segments;
}

}  // namespace

std::vector<SegmentStats> segment_stats(const Image& img, int quantization_step) {
    return collect<SegmentStats, false>(img, quantization_step);
}

std::vector<Segment> segment_image(const Image& img, int quantization_step) {
    return collect<Segment, true>(img, quantization_step);
}

}  // namespace memclf
