#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "memclf/dataset.hpp"
#include "memclf/features.hpp"
#include "memclf/learners.hpp"
#include "memclf/similarity.hpp"

namespace memclf {

// q chosen training-point indices with per-memory acceptance thresholds.
struct MemorySet {
    std::vector<int> memory_indices;
    std::vector<double> thresholds;  // b_k in [0,1], same length

    int q() const { return static_cast<int>(memory_indices.size()); }
    void validate(int n) const;  // distinct, in range, thresholds well-formed
};

// selected is 1-based: 1..q name a memory, q+1 is out-of-boundary. score is
// the winning similarity (the failed maximum when selected = q+1).
struct SelectionResult {
    int selected = 0;
    double score = 0.0;
};

// Nearest-memory selection on prepared keys: argmax of score_prepared, ties
// to the smallest memory index; winner below its threshold -> q+1.
SelectionResult select_prepared(const std::vector<double>& x_key,
                                const std::vector<std::vector<double>>& memory_keys,
                                const std::vector<double>& thresholds,
                                const SimilarityFunction& sim);

SelectionResult select_memory(const Image& x, const MemorySet& mem,
                              const LabeledDataset& data, const SimilarityFunction& sim);

// The deployable model: memories + per-cluster classifiers + the constant
// out-of-boundary classifier (label = classes.size()).
struct MemoryClassifier {
    MemorySet memory_set;
    std::vector<Classifier> cluster_classifiers;  // h_1..h_q
    ConstantModel oob_classifier;                 // h_{q+1}
    std::shared_ptr<const SimilarityFunction> similarity;
    std::shared_ptr<const FeatureExtractor> extractor;  // features fed to h_k
    std::vector<std::string> classes;

    int unknown_label() const { return static_cast<int>(classes.size()); }
};

// data is the training set the memory indices point into.
int classify(const Image& x, const MemoryClassifier& mc, const LabeledDataset& data);

struct TrainedCluster {
    int memory_index = -1;
    std::vector<int> member_indices;
    double training_accuracy = 0.0;
};

struct TrainOptions {
    std::string model_kind = "majority";  // majority | tree | logistic
    int tree_max_depth = 3;
    LogisticOptions logistic{};
    bool logistic_warm_start = false;  // seed cluster models from the global fit
};

struct TrainResult {
    MemoryClassifier classifier;
    std::vector<TrainedCluster> clusters;  // one per memory, in memory order
    std::vector<int> oob_members;          // training points that selected q+1
};

// Assigns every training point to its selected memory and fits one
// classifier per nonempty cluster; empty clusters fall back to the global
// majority class. Precomputed per-point features/keys may be supplied to
// avoid re-extraction (pass empty vectors to compute internally).
TrainResult train_memory_classifier(const LabeledDataset& data,
                                    std::shared_ptr<const SimilarityFunction> sim,
                                    const MemorySet& mem,
                                    std::shared_ptr<const FeatureExtractor> extractor,
                                    const TrainOptions& opt = {},
                                    std::vector<FeatureVector> features = {},
                                    std::vector<std::vector<double>> keys = {});

// Versioned model document with fixed top-level fields {"version",
// "similarity", "memories", "thresholds", "classifiers", "classes"}.
nlohmann::json model_to_json(const MemoryClassifier& mc);
MemoryClassifier model_from_json(const nlohmann::json& j);
void save_model(const MemoryClassifier& mc, const std::string& path);
MemoryClassifier load_model(const std::string& path);

}  // namespace memclf
