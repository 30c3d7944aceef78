#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "memclf/feature_vector.hpp"

namespace memclf {

// --- CART decision tree (Gini impurity, axis-aligned midpoint splits) ----

struct TreeNode {
    int feature = -1;        // -1 marks a leaf
    double threshold = 0.0;  // value <= threshold goes left
    int left = -1;
    int right = -1;
    int leaf_class = -1;
    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    std::vector<std::string> schema;

    int predict(const FeatureVector& fv) const;
    int predict_values(const std::vector<double>& values) const;  // skips schema check
};

// Splits need strictly positive Gini gain and at least two samples; equal
// gains resolve to the smaller feature index, then the smaller threshold.
// Leaves take the majority label, ties to the smaller class index.
DecisionTree train_tree(const std::vector<FeatureVector>& features,
                        const std::vector<int>& labels, int max_depth);

// --- Multinomial logistic regression (full-batch gradient descent) -------

struct LogisticOptions {
    int epochs = 300;
    double learning_rate = 0.5;
    // Reweights sample losses by n / (num_classes * class_count) so rare
    // classes are not drowned out.
    bool class_weighting = false;
};

struct LogisticModel {
    // weights[c] holds d coefficients followed by the bias term.
    std::vector<std::vector<double>> weights;
    std::vector<std::string> schema;

    int num_classes() const { return static_cast<int>(weights.size()); }
    std::vector<double> probabilities(const std::vector<double>& values) const;
    int predict(const FeatureVector& fv) const;
    int predict_values(const std::vector<double>& values) const;
};

// Deterministic: zero initialization, full-batch updates, no RNG anywhere.
// warm_start (when non-null) seeds the weights instead of zeros.
LogisticModel train_logistic(const std::vector<FeatureVector>& features,
                             const std::vector<int>& labels, int num_classes,
                             const LogisticOptions& opt = {},
                             const LogisticModel* warm_start = nullptr);

// Mean cross-entropy of the model on the sample (with the same optional
// class weighting as training).
double logistic_loss(const LogisticModel& model,
                     const std::vector<FeatureVector>& features,
                     const std::vector<int>& labels, bool class_weighting = false);

// Flattened gradient of logistic_loss w.r.t. weights, row-major over
// classes then coefficients. Exposed for finite-difference checks.
std::vector<double> logistic_gradient(const LogisticModel& model,
                                      const std::vector<FeatureVector>& features,
                                      const std::vector<int>& labels,
                                      bool class_weighting = false);

// --- Trivial learners ----------------------------------------------------

struct MajorityModel {
    int majority_class = 0;
    std::vector<std::string> schema;
};

MajorityModel train_majority(const std::vector<int>& labels,
                             const std::vector<std::string>& schema);

// Constant "unknown" answer used for out-of-boundary inputs; by convention
// its label sits one past the last real class.
struct ConstantModel {
    int constant_class = 0;
};

using Classifier = std::variant<DecisionTree, LogisticModel, MajorityModel, ConstantModel>;

int predict(const Classifier& clf, const FeatureVector& fv);
int predict_values(const Classifier& clf, const std::vector<double>& values);

nlohmann::json classifier_to_json(const Classifier& clf);
Classifier classifier_from_json(const nlohmann::json& j);

}  // namespace memclf
