#include "memclf/memory.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace memclf {

using nlohmann::json;

void MemorySet::validate(int n) const {
    if (memory_indices.empty())
        throw std::invalid_argument("MemorySet: empty memory list");
    if (thresholds.size() != memory_indices.size())
        throw std::invalid_argument("MemorySet: thresholds length != q");
    std::set<int> seen;
    for (int idx : memory_indices) {
        if (idx < 0 || idx >= n) throw std::invalid_argument("MemorySet: index out of range");
        if (!seen.insert(idx).second)
            throw std::invalid_argument("MemorySet: duplicate memory index");
    }
    for (double b : thresholds)
        if (!(b >= 0.0 && b <= 1.0))
            throw std::invalid_argument("MemorySet: threshold outside [0,1]");
}

SelectionResult select_prepared(const std::vector<double>& x_key,
                                const std::vector<std::vector<double>>& memory_keys,
                                const std::vector<double>& thresholds,
                                const SimilarityFunction& sim) {
    if (memory_keys.empty())
        throw std::invalid_argument("select_prepared: empty memory set");
    int best = 0;
    double best_score = sim.score_prepared(memory_keys[0], x_key);
    for (std::size_t k = 1; k < memory_keys.size(); ++k) {
        double s = sim.score_prepared(memory_keys[k], x_key);
        if (s > best_score) {  // strict: ties keep the smaller index
            best_score = s;
            best = static_cast<int>(k);
        }
    }
    if (best_score < thresholds[best])
        return {static_cast<int>(memory_keys.size()) + 1, best_score};
    return {best + 1, best_score};
}

SelectionResult select_memory(const Image& x, const MemorySet& mem,
                              const LabeledDataset& data, const SimilarityFunction& sim) {
    mem.validate(static_cast<int>(data.size()));
    std::vector<std::vector<double>> memory_keys;
    memory_keys.reserve(mem.memory_indices.size());
    for (int idx : mem.memory_indices) memory_keys.push_back(sim.prepare(data.images[idx]));
    return select_prepared(sim.prepare(x), memory_keys, mem.thresholds, sim);
}

int classify(const Image& x, const MemoryClassifier& mc, const LabeledDataset& data) {
    SelectionResult sel = select_memory(x, mc.memory_set, data, *mc.similarity);
    if (sel.selected > mc.memory_set.q()) return mc.oob_classifier.constant_class;
    return predict(mc.cluster_classifiers[sel.selected - 1], mc.extractor->extract(x));
}

TrainResult train_memory_classifier(const LabeledDataset& data,
                                    std::shared_ptr<const SimilarityFunction> sim,
                                    const MemorySet& mem,
                                    std::shared_ptr<const FeatureExtractor> extractor,
                                    const TrainOptions& opt,
                                    std::vector<FeatureVector> features,
                                    std::vector<std::vector<double>> keys) {
    if (!sim || !extractor)
        throw std::invalid_argument("train_memory_classifier: null similarity or extractor");
    // Streamed pipelines pass precomputed features/keys with an image-free
    // dataset, so n comes from the labels.
    const int n = static_cast<int>(data.labels.size());
    if (n == 0) throw std::invalid_argument("train_memory_classifier: empty dataset");
    mem.validate(n);
    if (features.empty() || keys.empty()) {
        if (static_cast<int>(data.images.size()) != n)
            throw std::invalid_argument(
                "train_memory_classifier: images required when features/keys not supplied");
        if (features.empty()) {
            features.reserve(n);
            for (const Image& img : data.images) features.push_back(extractor->extract(img));
        }
        if (keys.empty()) {
            keys.reserve(n);
            for (const Image& img : data.images) keys.push_back(sim->prepare(img));
        }
    }
    if (static_cast<int>(features.size()) != n || static_cast<int>(keys.size()) != n)
        throw std::invalid_argument("train_memory_classifier: precomputed size mismatch");

    const int q = mem.q();
    std::vector<std::vector<double>> memory_keys;
    memory_keys.reserve(q);
    for (int idx : mem.memory_indices) memory_keys.push_back(keys[idx]);

    TrainResult result;
    result.clusters.resize(q);
    for (int k = 0; k < q; ++k) result.clusters[k].memory_index = mem.memory_indices[k];
    for (int i = 0; i < n; ++i) {
        SelectionResult sel = select_prepared(keys[i], memory_keys, mem.thresholds, *sim);
        if (sel.selected > q)
            result.oob_members.push_back(i);
        else
            result.clusters[sel.selected - 1].member_indices.push_back(i);
    }

    const int num_classes = static_cast<int>(data.class_names.size());
    MajorityModel global_majority = train_majority(data.labels, extractor->schema());
    LogisticModel global_logistic;  // built lazily for warm starts
    bool have_global_logistic = false;

    MemoryClassifier mc;
    mc.memory_set = mem;
    mc.similarity = std::move(sim);
    mc.extractor = extractor;
    mc.classes = data.class_names;
    mc.oob_classifier = ConstantModel{num_classes};
    for (int k = 0; k < q; ++k) {
        TrainedCluster& cluster = result.clusters[k];
        if (cluster.member_indices.empty()) {
            mc.cluster_classifiers.push_back(global_majority);  // fallback keeps classify total
            cluster.training_accuracy = 0.0;
            continue;
        }
        std::vector<FeatureVector> cluster_features;
        std::vector<int> cluster_labels;
        cluster_features.reserve(cluster.member_indices.size());
        for (int i : cluster.member_indices) {
            cluster_features.push_back(features[i]);
            cluster_labels.push_back(data.labels[i]);
        }
        Classifier clf;
        if (opt.model_kind == "majority") {
            clf = train_majority(cluster_labels, extractor->schema());
        } else if (opt.model_kind == "tree") {
            clf = train_tree(cluster_features, cluster_labels, opt.tree_max_depth);
        } else if (opt.model_kind == "logistic") {
            const LogisticModel* warm = nullptr;
            if (opt.logistic_warm_start) {
                if (!have_global_logistic) {
                    global_logistic =
                        train_logistic(features, data.labels, num_classes, opt.logistic);
                    have_global_logistic = true;
                }
                warm = &global_logistic;
            }
            clf = train_logistic(cluster_features, cluster_labels, num_classes,
                                 opt.logistic, warm);
        } else {
            throw std::invalid_argument("train_memory_classifier: unknown model kind " +
                                        opt.model_kind);
        }
        int correct = 0;
        for (std::size_t i = 0; i < cluster_features.size(); ++i)
            if (predict(clf, cluster_features[i]) == cluster_labels[i]) ++correct;
        cluster.training_accuracy =
            static_cast<double>(correct) / static_cast<double>(cluster_features.size());
        mc.cluster_classifiers.push_back(std::move(clf));
    }
    result.classifier = std::move(mc);
    return result;
}

json model_to_json(const MemoryClassifier& mc) {
    json clusters = json::array();
    for (const Classifier& clf : mc.cluster_classifiers)
        clusters.push_back(classifier_to_json(clf));
    return {{"version", 1},
            {"similarity", similarity_to_json(*mc.similarity)},
            {"memories", mc.memory_set.memory_indices},
            {"thresholds", mc.memory_set.thresholds},
            {"classifiers",
             {{"extractor", {{"id", mc.extractor->id()}, {"params", mc.extractor->params()}}},
              {"cluster", clusters},
              {"oob", classifier_to_json(Classifier{mc.oob_classifier})}}},
            {"classes", mc.classes}};
}

MemoryClassifier model_from_json(const json& j) {
    if (j.at("version").get<int>() != 1)
        throw std::invalid_argument("model_from_json: unsupported version");
    MemoryClassifier mc;
    mc.memory_set.memory_indices = j.at("memories").get<std::vector<int>>();
    mc.memory_set.thresholds = j.at("thresholds").get<std::vector<double>>();
    mc.similarity = make_similarity(j.at("similarity"));
    const json& classifiers = j.at("classifiers");
    mc.extractor = make_extractor(classifiers.at("extractor"));
    for (const json& c : classifiers.at("cluster"))
        mc.cluster_classifiers.push_back(classifier_from_json(c));
    Classifier oob = classifier_from_json(classifiers.at("oob"));
    mc.oob_classifier = std::get<ConstantModel>(oob);
    mc.classes = j.at("classes").get<std::vector<std::string>>();
    if (mc.cluster_classifiers.size() != mc.memory_set.memory_indices.size())
        throw std::runtime_error("model_from_json: classifier count != memory count");
    return mc;
}

void save_model(const MemoryClassifier& mc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << model_to_json(mc).dump(2) << '\n';
}

MemoryClassifier load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    return model_from_json(json::parse(in));
}

}  // namespace memclf
