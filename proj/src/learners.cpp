#include "memclf/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace memclf {

using nlohmann::json;

// ---------------------------------------------------------------- tree ---

int DecisionTree::predict_values(const std::vector<double>& values) const {
    int i = 0;
    while (!nodes[i].is_leaf())
        i = values[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
    return nodes[i].leaf_class;
}

int DecisionTree::predict(const FeatureVector& fv) const {
    require_schema(schema, fv, "DecisionTree::predict");
    return predict_values(fv.values);
}

namespace {

int majority_label(const std::vector<int>& labels, const std::vector<int>& idx) {
    int max_label = 0;
    for (int i : idx) max_label = std::max(max_label, labels[i]);
    std::vector<int> counts(max_label + 1, 0);
    for (int i : idx) ++counts[labels[i]];
    int best = 0;
    for (int c = 1; c <= max_label; ++c)
        if (counts[c] > counts[best]) best = c;  // ties keep the smaller class
    return best;
}

double gini(const std::vector<int>& counts, int total) {
    if (total == 0) return 0.0;
    double sum_sq = 0.0;
    for (int c : counts) sum_sq += static_cast<double>(c) * c;
    return 1.0 - sum_sq / (static_cast<double>(total) * total);
}

struct TreeBuilder {
    const std::vector<FeatureVector>& features;
    const std::vector<int>& labels;
    int max_depth;
    int num_features;
    int num_labels;
    std::vector<TreeNode> nodes;

    int build(std::vector<int> idx, int depth) {
        const int node_id = static_cast<int>(nodes.size());
        nodes.emplace_back();

        bool pure = true;
        for (std::size_t i = 1; i < idx.size(); ++i)
            if (labels[idx[i]] != labels[idx[0]]) { pure = false; break; }
        if (pure || depth >= max_depth || idx.size() < 2) {
            nodes[node_id].leaf_class = majority_label(labels, idx);
            return node_id;
        }

        const int n = static_cast<int>(idx.size());
        std::vector<int> parent_counts(num_labels, 0);
        for (int i : idx) ++parent_counts[labels[i]];
        const double parent_gini = gini(parent_counts, n);

        double best_gini = parent_gini;  // split must strictly improve
        int best_feature = -1;
        double best_threshold = 0.0;
        std::vector<std::pair<double, int>> order(idx.size());
        for (int f = 0; f < num_features; ++f) {
            for (std::size_t i = 0; i < idx.size(); ++i)
                order[i] = {features[idx[i]].values[f], labels[idx[i]]};
            std::sort(order.begin(), order.end());
            std::vector<int> left_counts(num_labels, 0);
            int n_left = 0;
            for (int i = 0; i + 1 < n; ++i) {
                ++left_counts[order[i].second];
                ++n_left;
                if (order[i].first == order[i + 1].first) continue;
                double threshold = order[i].first + (order[i + 1].first - order[i].first) / 2.0;
                std::vector<int> right_counts(num_labels, 0);
                for (int c = 0; c < num_labels; ++c)
                    right_counts[c] = parent_counts[c] - left_counts[c];
                double weighted = (n_left * gini(left_counts, n_left) +
                                   (n - n_left) * gini(right_counts, n - n_left)) / n;
                if (weighted < best_gini - 1e-12) {  // strict; first (f, thr) wins ties
                    best_gini = weighted;
                    best_feature = f;
                    best_threshold = threshold;
                }
            }
        }

        if (best_feature < 0) {
            nodes[node_id].leaf_class = majority_label(labels, idx);
            return node_id;
        }

        std::vector<int> left_idx, right_idx;
        for (int i : idx)
            (features[i].values[best_feature] <= best_threshold ? left_idx : right_idx)
                .push_back(i);
        idx.clear();
        idx.shrink_to_fit();
        nodes[node_id].feature = best_feature;
        nodes[node_id].threshold = best_threshold;
        int left = build(std::move(left_idx), depth + 1);
        int right = build(std::move(right_idx), depth + 1);
        nodes[node_id].left = left;
        nodes[node_id].right = right;
        return node_id;
    }
};

}  // namespace

DecisionTree train_tree(const std::vector<FeatureVector>& features,
                        const std::vector<int>& labels, int max_depth) {
    if (features.empty() || features.size() != labels.size())
        throw std::invalid_argument("train_tree: empty or mismatched sample");
    if (max_depth < 0) throw std::invalid_argument("train_tree: negative max_depth");
    for (const auto& fv : features)
        require_schema(features[0].schema, fv, "train_tree");
    int num_labels = 1 + *std::max_element(labels.begin(), labels.end());
    if (*std::min_element(labels.begin(), labels.end()) < 0)
        throw std::invalid_argument("train_tree: negative label");

    TreeBuilder builder{features, labels, max_depth,
                        static_cast<int>(features[0].values.size()), num_labels, {}};
    std::vector<int> all(features.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    builder.build(std::move(all), 0);

    DecisionTree tree;
    tree.nodes = std::move(builder.nodes);
    tree.schema = features[0].schema;
    return tree;
}

// ------------------------------------------------------------ logistic ---

std::vector<double> LogisticModel::probabilities(const std::vector<double>& values) const {
    std::vector<double> logits(weights.size());
    for (std::size_t c = 0; c < weights.size(); ++c) {
        double z = weights[c].back();  // bias
        for (std::size_t f = 0; f < values.size(); ++f) z += weights[c][f] * values[f];
        logits[c] = z;
    }
    double max_logit = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (double& z : logits) {
        z = std::exp(z - max_logit);
        denom += z;
    }
    for (double& z : logits) z /= denom;
    return logits;
}

int LogisticModel::predict_values(const std::vector<double>& values) const {
    std::vector<double> p = probabilities(values);
    return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

int LogisticModel::predict(const FeatureVector& fv) const {
    require_schema(schema, fv, "LogisticModel::predict");
    return predict_values(fv.values);
}

namespace {

std::vector<double> sample_weights(const std::vector<int>& labels, int num_classes,
                                   bool class_weighting) {
    std::vector<double> w(labels.size(), 1.0);
    if (!class_weighting) return w;
    std::vector<int> counts(num_classes, 0);
    for (int y : labels) ++counts[y];
    for (std::size_t i = 0; i < labels.size(); ++i)
        w[i] = static_cast<double>(labels.size()) / (num_classes * counts[labels[i]]);
    return w;
}

void check_logistic_sample(const std::vector<FeatureVector>& features,
                           const std::vector<int>& labels, int num_classes,
                           const char* where) {
    if (features.empty() || features.size() != labels.size())
        throw std::invalid_argument(std::string(where) + ": empty or mismatched sample");
    for (const auto& fv : features) require_schema(features[0].schema, fv, where);
    for (int y : labels)
        if (y < 0 || y >= num_classes)
            throw std::invalid_argument(std::string(where) + ": label out of range");
}

}  // namespace

LogisticModel train_logistic(const std::vector<FeatureVector>& features,
                             const std::vector<int>& labels, int num_classes,
                             const LogisticOptions& opt, const LogisticModel* warm_start) {
    check_logistic_sample(features, labels, num_classes, "train_logistic");
    const int d = static_cast<int>(features[0].values.size());

    LogisticModel model;
    model.schema = features[0].schema;
    if (warm_start) {
        if (warm_start->num_classes() != num_classes ||
            (num_classes > 0 && static_cast<int>(warm_start->weights[0].size()) != d + 1))
            throw std::invalid_argument("train_logistic: warm start shape mismatch");
        model.weights = warm_start->weights;
    } else {
        model.weights.assign(num_classes, std::vector<double>(d + 1, 0.0));
    }

    const std::vector<double> sw = sample_weights(labels, num_classes, opt.class_weighting);
    const double n = static_cast<double>(features.size());
    std::vector<std::vector<double>> grad(num_classes, std::vector<double>(d + 1));
    for (int epoch = 0; epoch < opt.epochs; ++epoch) {
        for (auto& row : grad) std::fill(row.begin(), row.end(), 0.0);
        for (std::size_t i = 0; i < features.size(); ++i) {
            std::vector<double> p = model.probabilities(features[i].values);
            for (int c = 0; c < num_classes; ++c) {
                double err = sw[i] * (p[c] - (labels[i] == c ? 1.0 : 0.0));
                for (int f = 0; f < d; ++f) grad[c][f] += err * features[i].values[f];
                grad[c][d] += err;
            }
        }
        for (int c = 0; c < num_classes; ++c)
            for (int f = 0; f <= d; ++f)
                model.weights[c][f] -= opt.learning_rate * grad[c][f] / n;
    }
    return model;
}

double logistic_loss(const LogisticModel& model, const std::vector<FeatureVector>& features,
                     const std::vector<int>& labels, bool class_weighting) {
    check_logistic_sample(features, labels, model.num_classes(), "logistic_loss");
    const std::vector<double> sw =
        sample_weights(labels, model.num_classes(), class_weighting);
    double loss = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        std::vector<double> p = model.probabilities(features[i].values);
        loss -= sw[i] * std::log(std::max(p[labels[i]], 1e-300));
    }
    return loss / static_cast<double>(features.size());
}

std::vector<double> logistic_gradient(const LogisticModel& model,
                                      const std::vector<FeatureVector>& features,
                                      const std::vector<int>& labels,
                                      bool class_weighting) {
    check_logistic_sample(features, labels, model.num_classes(), "logistic_gradient");
    const int num_classes = model.num_classes();
    const int d = static_cast<int>(features[0].values.size());
    const std::vector<double> sw = sample_weights(labels, num_classes, class_weighting);
    std::vector<double> grad(static_cast<std::size_t>(num_classes) * (d + 1), 0.0);
    for (std::size_t i = 0; i < features.size(); ++i) {
        std::vector<double> p = model.probabilities(features[i].values);
        for (int c = 0; c < num_classes; ++c) {
            double err = sw[i] * (p[c] - (labels[i] == c ? 1.0 : 0.0));
            for (int f = 0; f < d; ++f) grad[c * (d + 1) + f] += err * features[i].values[f];
            grad[c * (d + 1) + d] += err;
        }
    }
    for (double& g : grad) g /= static_cast<double>(features.size());
    return grad;
}

// ------------------------------------------------------------- trivial ---

MajorityModel train_majority(const std::vector<int>& labels,
                             const std::vector<std::string>& schema) {
    if (labels.empty()) throw std::invalid_argument("train_majority: empty sample");
    std::vector<int> idx(labels.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    return {majority_label(labels, idx), schema};
}

int predict(const Classifier& clf, const FeatureVector& fv) {
    return std::visit(
        [&](const auto& m) -> int {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ConstantModel>)
                return m.constant_class;
            else if constexpr (std::is_same_v<T, MajorityModel>)
                return m.majority_class;
            else
                return m.predict(fv);
        },
        clf);
}

int predict_values(const Classifier& clf, const std::vector<double>& values) {
    return std::visit(
        [&](const auto& m) -> int {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ConstantModel>)
                return m.constant_class;
            else if constexpr (std::is_same_v<T, MajorityModel>)
                return m.majority_class;
            else
                return m.predict_values(values);
        },
        clf);
}

// ---------------------------------------------------------------- json ---

json classifier_to_json(const Classifier& clf) {
    return std::visit(
        [](const auto& m) -> json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DecisionTree>) {
                json nodes = json::array();
                for (const TreeNode& nd : m.nodes)
                    nodes.push_back({{"feature", nd.feature},
                                     {"threshold", nd.threshold},
                                     {"left", nd.left},
                                     {"right", nd.right},
                                     {"leaf_class", nd.leaf_class}});
                return {{"kind", "tree"}, {"nodes", nodes}, {"schema", m.schema}};
            } else if constexpr (std::is_same_v<T, LogisticModel>) {
                return {{"kind", "logistic"}, {"weights", m.weights}, {"schema", m.schema}};
            } else if constexpr (std::is_same_v<T, MajorityModel>) {
                return {{"kind", "majority"},
                        {"class", m.majority_class},
                        {"schema", m.schema}};
            } else {
                return {{"kind", "constant"}, {"class", m.constant_class}};
            }
        },
        clf);
}

Classifier classifier_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "tree") {
        DecisionTree tree;
        tree.schema = j.at("schema").get<std::vector<std::string>>();
        for (const auto& nd : j.at("nodes")) {
            TreeNode node;
            node.feature = nd.at("feature").get<int>();
            node.threshold = nd.at("threshold").get<double>();
            node.left = nd.at("left").get<int>();
            node.right = nd.at("right").get<int>();
            node.leaf_class = nd.at("leaf_class").get<int>();
            tree.nodes.push_back(node);
        }
        return tree;
    }
    if (kind == "logistic") {
        LogisticModel model;
        model.weights = j.at("weights").get<std::vector<std::vector<double>>>();
        model.schema = j.at("schema").get<std::vector<std::string>>();
        return model;
    }
    if (kind == "majority")
        return MajorityModel{j.at("class").get<int>(),
                             j.at("schema").get<std::vector<std::string>>()};
    if (kind == "constant") return ConstantModel{j.at("class").get<int>()};
    throw std::invalid_argument("classifier_from_json: unknown kind " + kind);
}

}  // namespace memclf
