#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "memclf/feature_vector.hpp"
#include "memclf/image.hpp"
#include "memclf/learners.hpp"

namespace memclf {

// ------------------------------------------------------------- color ---

enum class ColorClass : int { none = -1, red = 0, green = 1, blue = 2 };

// Among the T largest segments (connected components of the quantized
// image), picks the one with the highest maximum mean channel — ignoring
// segments darker than darkness_floor — and returns that channel. All
// segments too dark -> ColorClass::none.
ColorClass color_feature(const Image& img, int T = 20, int quantization_step = 64,
                         double darkness_floor = 32.0);

// -------------------------------------------------------------- leaf ---

struct HsvRange {
    double h_lo = 0.0, h_hi = 360.0;  // degrees; h_lo > h_hi wraps through 0
    double s_lo = 0.0, s_hi = 1.0;
    double v_lo = 0.0, v_hi = 1.0;
    bool contains(const Hsv& p) const;
};

struct HsvThresholds {
    HsvRange green{70.0, 160.0, 0.25, 1.0, 0.15, 1.0};
    HsvRange brown{10.0, 45.0, 0.25, 1.0, 0.15, 0.7};
    // Applied only inside the hull, to pixels that are neither green nor brown.
    HsvRange discolored{0.0, 360.0, 0.0, 1.0, 0.15, 1.0};
};

struct LeafFeatures {
    double f_d = 0.0;  // discolored / green, clamped to [0,1]
    double f_b = 0.0;  // brown / green, clamped to [0,1]
    int green_count = 0;
    int brown_count = 0;
    int discolored_count = 0;
};

// Counts green/brown/discolored pixels inside the convex hull of the green
// pixels. No green pixels at all -> (1, 1) by the saturating convention.
LeafFeatures leaf_features(const Image& img, const HsvThresholds& th = {});

// ------------------------------------------------------------ lesion ---

struct LesionFeatures {
    double sz = 0.0;   // nonzero pixel count / median lesion size
    double rd = 0.0;   // 1 - correlation of red-channel histograms, in [0,1]
    double sat = 0.0;  // 1 iff over half the pixels are overexposed
};

LesionFeatures lesion_features(const Image& crop, const Image& neighbor_patch,
                               int median_lesion_size, int overexposure_threshold = 250);

// ------------------------------------------------ similarity helpers ---

// 1 iff the tree assigns both vectors the same class.
double tree_similarity(const FeatureVector& x1, const FeatureVector& x2,
                       const DecisionTree& tree);

// -------------------------------------------------------- extractors ---

class FeatureExtractor {
public:
    virtual ~FeatureExtractor() = default;
    virtual std::string id() const = 0;
    virtual nlohmann::json params() const = 0;
    virtual std::vector<std::string> schema() const = 0;
    virtual FeatureVector extract(const Image& img) const = 0;
};

// grid x grid box means per channel, scaled to [0,1]. Schema px_0_0_r ...
class RawPixelExtractor : public FeatureExtractor {
public:
    explicit RawPixelExtractor(int grid = 8);
    std::string id() const override { return "raw_pixels"; }
    nlohmann::json params() const override;
    std::vector<std::string> schema() const override { return schema_; }
    FeatureVector extract(const Image& img) const override;

private:
    int grid_;
    std::vector<std::string> schema_;
};

// {F_d, F_b} from leaf_features.
class LeafFeatureExtractor : public FeatureExtractor {
public:
    explicit LeafFeatureExtractor(HsvThresholds th = {}) : th_(th) {}
    std::string id() const override { return "leaf"; }
    nlohmann::json params() const override;
    std::vector<std::string> schema() const override { return {"F_d", "F_b"}; }
    FeatureVector extract(const Image& img) const override;
    const HsvThresholds& thresholds() const { return th_; }

private:
    HsvThresholds th_;
};

// From {"id": "raw_pixels"|"leaf", "params": {...}}.
std::shared_ptr<FeatureExtractor> make_extractor(const nlohmann::json& j);

nlohmann::json thresholds_to_json(const HsvThresholds& th);
HsvThresholds thresholds_from_json(const nlohmann::json& j);

}  // namespace memclf
