#include "memclf/similarity.hpp"

#include <stdexcept>

namespace memclf {

using nlohmann::json;

json ColorFeatureSimilarity::params() const {
    return {{"T", T_}, {"quantization_step", step_}, {"darkness_floor", floor_}};
}

std::vector<double> ColorFeatureSimilarity::prepare(const Image& img) const {
    return {static_cast<double>(static_cast<int>(color_feature(img, T_, step_, floor_)))};
}

double ColorFeatureSimilarity::score_prepared(const std::vector<double>& a,
                                              const std::vector<double>& b) const {
    if (a[0] < 0.0 || b[0] < 0.0) return 0.0;  // no-color never matches
    return a[0] == b[0] ? 1.0 : 0.0;
}

TreeSimilarity::TreeSimilarity(std::shared_ptr<const FeatureExtractor> extractor,
                               DecisionTree tree)
    : extractor_(std::move(extractor)), tree_(std::move(tree)) {
    if (!extractor_) throw std::invalid_argument("TreeSimilarity: null extractor");
    if (tree_.schema != extractor_->schema())
        throw std::invalid_argument("TreeSimilarity: tree schema does not match extractor");
}

json TreeSimilarity::params() const {
    json tree_json = classifier_to_json(Classifier{tree_});
    return {{"extractor", {{"id", extractor_->id()}, {"params", extractor_->params()}}},
            {"tree", tree_json}};
}

std::vector<double> TreeSimilarity::prepare(const Image& img) const {
    return {static_cast<double>(tree_.predict_values(extractor_->extract(img).values))};
}

double TreeSimilarity::score_prepared(const std::vector<double>& a,
                                      const std::vector<double>& b) const {
    return a[0] == b[0] ? 1.0 : 0.0;
}

std::shared_ptr<SimilarityFunction> make_similarity(const json& j) {
    const std::string id = j.at("id").get<std::string>();
    const json params = j.value("params", json::object());
    if (id == "color_feature")
        return std::make_shared<ColorFeatureSimilarity>(
            params.value("T", 20), params.value("quantization_step", 64),
            params.value("darkness_floor", 32.0));
    if (id == "feature_tree") {
        auto extractor = make_extractor(params.at("extractor"));
        Classifier clf = classifier_from_json(params.at("tree"));
        auto* tree = std::get_if<DecisionTree>(&clf);
        if (!tree) throw std::invalid_argument("make_similarity: feature_tree needs a tree");
        return std::make_shared<TreeSimilarity>(std::move(extractor), std::move(*tree));
    }
    throw std::invalid_argument("make_similarity: unknown id " + id);
}

json similarity_to_json(const SimilarityFunction& sim) {
    return {{"id", sim.id()}, {"params", sim.params()}};
}

}  // namespace memclf
