#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "memclf/features.hpp"
#include "memclf/image.hpp"

namespace memclf {

// Expert similarity s(x1, x2) in [0,1]. Scoring is split into a per-image
// prepare() step (the expensive feature extraction) and a cheap comparison
// of prepared keys, so datasets are prepared once and searched many times.
class SimilarityFunction {
public:
    virtual ~SimilarityFunction() = default;
    virtual std::string id() const = 0;
    virtual nlohmann::json params() const = 0;
    virtual std::vector<double> prepare(const Image& img) const = 0;
    virtual double score_prepared(const std::vector<double>& a,
                                  const std::vector<double>& b) const = 0;
    double score(const Image& a, const Image& b) const {
        return score_prepared(prepare(a), prepare(b));
    }
};

// 1 iff both images carry the same color class. A failed extraction
// (ColorClass::none, key -1) scores 0 against everything, which routes the
// input out of boundary.
class ColorFeatureSimilarity : public SimilarityFunction {
public:
    explicit ColorFeatureSimilarity(int T = 20, int quantization_step = 64,
                                    double darkness_floor = 32.0)
        : T_(T), step_(quantization_step), floor_(darkness_floor) {}
    std::string id() const override { return "color_feature"; }
    nlohmann::json params() const override;
    std::vector<double> prepare(const Image& img) const override;
    double score_prepared(const std::vector<double>& a,
                          const std::vector<double>& b) const override;

private:
    int T_;
    int step_;
    double floor_;
};

// 1 iff a decision tree predicts the same class for both images' feature
// vectors. The prepared key is the predicted class itself.
class TreeSimilarity : public SimilarityFunction {
public:
    TreeSimilarity(std::shared_ptr<const FeatureExtractor> extractor, DecisionTree tree);
    std::string id() const override { return "feature_tree"; }
    nlohmann::json params() const override;
    std::vector<double> prepare(const Image& img) const override;
    double score_prepared(const std::vector<double>& a,
                          const std::vector<double>& b) const override;
    const DecisionTree& tree() const { return tree_; }
    const FeatureExtractor& extractor() const { return *extractor_; }

private:
    std::shared_ptr<const FeatureExtractor> extractor_;
    DecisionTree tree_;
};

// From {"id": "color_feature"|"feature_tree", "params": {...}}; feature_tree
// params embed the extractor spec and the trained tree.
std::shared_ptr<SimilarityFunction> make_similarity(const nlohmann::json& j);
nlohmann::json similarity_to_json(const SimilarityFunction& sim);

}  // namespace memclf
