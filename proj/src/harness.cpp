#include "memclf/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "memclf/parallel.hpp"
#include "memclf/synth.hpp"

namespace memclf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// Cell streams hash the corruption name so seeds do not depend on the
// config's list order.
std::uint64_t cell_stream(std::uint64_t seed, const std::string& kind, int severity) {
    return derive(derive(seed, fnv1a(kind)), static_cast<std::uint64_t>(severity));
}

Classifier train_kind(const TrainOptions& opt, const std::vector<FeatureVector>& features,
                      const std::vector<int>& labels, int num_classes,
                      const std::vector<std::string>& schema) {
    if (opt.model_kind == "majority") return train_majority(labels, schema);
    if (opt.model_kind == "tree") return train_tree(features, labels, opt.tree_max_depth);
    if (opt.model_kind == "logistic")
        return train_logistic(features, labels, num_classes, opt.logistic);
    throw std::invalid_argument("unknown model kind " + opt.model_kind);
}

ColorDatasetSpec color_spec_from_json(const json& j) {
    ColorDatasetSpec spec;
    spec.L = j.value("L", spec.L);
    spec.w = j.value("w", spec.w);
    spec.n_train = j.value("n_train", spec.n_train);
    spec.n_test = j.value("n_test", spec.n_test);
    spec.seed = j.value("seed", spec.seed);
    if (j.contains("alphas")) {
        spec.alphas.clear();
        for (const auto& a : j.at("alphas"))
            spec.alphas.push_back({a.at(0).get<std::uint8_t>(), a.at(1).get<std::uint8_t>(),
                                   a.at(2).get<std::uint8_t>()});
    }
    spec.validate();
    return spec;
}

}  // namespace

void ExperimentConfig::validate() const {
    const std::string kind = dataset.value("kind", "");
    if (kind != "color" && kind != "manifest")
        throw std::invalid_argument("config: dataset.kind must be color or manifest");
    if (kind == "manifest" && (!dataset.contains("train") || !dataset.contains("test")))
        throw std::invalid_argument("config: manifest dataset needs train and test paths");
    for (const std::string& c : corruptions)
        if (std::find(corruption_kinds.begin(), corruption_kinds.end(), c) ==
            corruption_kinds.end())
            throw std::invalid_argument("config: unknown corruption " + c);
    for (int s : severities)
        if (s < 1 || s > 5)
            throw std::invalid_argument("config: severity outside [1,5]");
    if (model.model_kind != "majority" && model.model_kind != "tree" &&
        model.model_kind != "logistic")
        throw std::invalid_argument("config: unknown model kind " + model.model_kind);
    search.validate();
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig cfg;
    cfg.dataset = j.at("dataset");
    cfg.similarity = j.at("similarity");
    cfg.extractor = j.value("extractor", json{{"id", "raw_pixels"}});
    cfg.search = search_params_from_json(j.value("search", json::object()));
    if (j.contains("model")) {
        const json& m = j.at("model");
        cfg.model.model_kind = m.value("kind", cfg.model.model_kind);
        cfg.model.tree_max_depth = m.value("tree_max_depth", cfg.model.tree_max_depth);
        if (m.contains("logistic")) {
            const json& l = m.at("logistic");
            cfg.model.logistic.epochs = l.value("epochs", cfg.model.logistic.epochs);
            cfg.model.logistic.learning_rate =
                l.value("learning_rate", cfg.model.logistic.learning_rate);
            cfg.model.logistic.class_weighting =
                l.value("class_weighting", cfg.model.logistic.class_weighting);
        }
        cfg.model.logistic_warm_start = m.value("warm_start", false);
    }
    cfg.corruptions = j.value("corruptions", std::vector<std::string>{});
    cfg.severities = j.value("severities", std::vector<int>{});
    cfg.output_dir = j.value("output_dir", "");
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.threads = j.value("threads", 0);
    cfg.validate();
    return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
    return {{"dataset", cfg.dataset},
            {"similarity", cfg.similarity},
            {"extractor", cfg.extractor},
            {"search", search_params_to_json(cfg.search)},
            {"model",
             {{"kind", cfg.model.model_kind},
              {"tree_max_depth", cfg.model.tree_max_depth},
              {"logistic",
               {{"epochs", cfg.model.logistic.epochs},
                {"learning_rate", cfg.model.logistic.learning_rate},
                {"class_weighting", cfg.model.logistic.class_weighting}}},
              {"warm_start", cfg.model.logistic_warm_start}}},
            {"corruptions", cfg.corruptions},
            {"severities", cfg.severities},
            {"output_dir", cfg.output_dir},
            {"seed", cfg.seed},
            {"threads", cfg.threads}};
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open config");
    return config_from_json(json::parse(in));
}

std::string report_to_csv(const EvalReport& report) {
    std::string out = "corruption,severity,model,accuracy,oob_rate,n\n";
    for (const EvalRow& row : report.rows) {
        out += row.corruption + ',' + std::to_string(row.severity) + ',' + row.model + ',' +
               fmt4(row.accuracy) + ',' + fmt4(row.oob_rate) + ',' + std::to_string(row.n) +
               '\n';
    }
    return out;
}

void emit_report(const EvalReport& report, const std::string& csv_path) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error(csv_path + ": cannot open for writing");
    out << report_to_csv(report);
}

json report_sidecar(const EvalReport& report, const json& config_echo) {
    json rows = json::array();
    for (const EvalRow& r : report.rows)
        rows.push_back({{"corruption", r.corruption},
                        {"severity", r.severity},
                        {"model", r.model},
                        {"accuracy", r.accuracy},
                        {"oob_rate", r.oob_rate},
                        {"n", r.n}});
    return {{"config", config_echo},
            {"config_hash", report.config_hash},
            {"seed", report.seed},
            {"timestamp", report.timestamp},
            {"clean_accuracy", report.clean_accuracy},
            {"trace", report.trace},
            {"rows", rows}};
}

PreparedModel PreparedModel::prepare(MemoryClassifier mc, const LabeledDataset& train) {
    PreparedModel pm;
    pm.memory_keys.reserve(mc.memory_set.memory_indices.size());
    for (int idx : mc.memory_set.memory_indices) {
        if (idx < 0 || idx >= static_cast<int>(train.images.size()))
            throw std::invalid_argument("PreparedModel: memory index outside training set");
        pm.memory_keys.push_back(mc.similarity->prepare(train.images[idx]));
    }
    pm.mc = std::move(mc);
    return pm;
}

SelectionResult PreparedModel::select(const Image& x) const {
    return select_prepared(mc.similarity->prepare(x), memory_keys,
                           mc.memory_set.thresholds, *mc.similarity);
}

int PreparedModel::predict_label(const Image& x) const {
    const SelectionResult sel = select(x);
    if (sel.selected > mc.memory_set.q()) return mc.oob_classifier.constant_class;
    return predict(mc.cluster_classifiers[sel.selected - 1], mc.extractor->extract(x));
}

std::vector<EvalRow> evaluate(const PreparedModel& model, const Classifier& baseline,
                              const LabeledDataset& test,
                              const std::vector<std::pair<std::string, int>>& cells,
                              std::uint64_t seed, int threads) {
    const int n = static_cast<int>(test.size());
    if (n == 0) throw std::invalid_argument("evaluate: empty test set");
    const int unknown = model.mc.unknown_label();

    std::vector<EvalRow> rows;
    std::vector<int> mem_pred(n), base_pred(n);
    for (const auto& [kind, sev] : cells) {
        const bool clean = kind == "clean" || kind.empty();
        const std::uint64_t stream = cell_stream(seed, kind, sev);
        parallel_for(n, threads, [&](int i) {
            Image corrupted;
            const Image& img = clean ? test.images[i]
                                     : (corrupted = corrupt(test.images[i],
                                                            {kind, sev, derive(stream, i)}));
            mem_pred[i] = model.predict_label(img);
            base_pred[i] = predict(baseline, model.mc.extractor->extract(img));
        });
        int mem_correct = 0, base_correct = 0, mem_oob = 0, base_oob = 0;
        for (int i = 0; i < n; ++i) {
            mem_correct += mem_pred[i] == test.labels[i];
            base_correct += base_pred[i] == test.labels[i];
            mem_oob += mem_pred[i] == unknown;
            base_oob += base_pred[i] == unknown;
        }
        const std::string name = clean ? "clean" : kind;
        const int severity = clean ? 0 : sev;
        rows.push_back({name, severity, "memclass", static_cast<double>(mem_correct) / n,
                        static_cast<double>(mem_oob) / n, n});
        rows.push_back({name, severity, "baseline", static_cast<double>(base_correct) / n,
                        static_cast<double>(base_oob) / n, n});
    }
    return rows;
}

RunArtifacts run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const int threads = resolve_threads(cfg.threads);
    auto extractor = make_extractor(cfg.extractor);

    // Similarity extractor, when the tree-induced similarity must be trained
    // here rather than loaded from an embedded tree.
    const bool train_sim_tree =
        cfg.similarity.at("id").get<std::string>() == "feature_tree" &&
        !cfg.similarity.value("params", json::object()).contains("tree");
    std::shared_ptr<FeatureExtractor> sim_extractor;
    if (train_sim_tree)
        sim_extractor = make_extractor(cfg.similarity.at("params").at("extractor"));

    // ---- training material -------------------------------------------
    const std::string data_kind = cfg.dataset.at("kind").get<std::string>();
    LabeledDataset train_meta;  // labels + class names; images only for manifest data
    LabeledDataset test;
    std::vector<FeatureVector> features;
    std::vector<FeatureVector> sim_features;
    ColorDatasetSpec color_spec;

    if (data_kind == "color") {
        color_spec = color_spec_from_json(cfg.dataset);
        const int classes = static_cast<int>(color_spec.alphas.size());
        const int n = classes * color_spec.n_train;
        features.resize(n);
        if (train_sim_tree) sim_features.resize(n);
        train_meta.labels.resize(n);
        for (int c = 0; c < classes; ++c)
            train_meta.class_names.push_back("class_" + std::to_string(c));
        // Images are rendered, reduced to features, and dropped one at a
        // time: the full training split never resides in memory.
        parallel_for(n, threads, [&](int i) {
            const int c = i / color_spec.n_train, item = i % color_spec.n_train;
            const Image img = render_color_item(color_spec, c, item);
            features[i] = extractor->extract(img);
            if (train_sim_tree) sim_features[i] = sim_extractor->extract(img);
            train_meta.labels[i] = c;
        });
        const int n_test = classes * color_spec.n_test;
        test.class_names = train_meta.class_names;
        test.images.resize(n_test);
        test.labels.resize(n_test);
        parallel_for(n_test, threads, [&](int i) {
            const int c = i / color_spec.n_test, item = i % color_spec.n_test;
            test.images[i] = render_color_item(color_spec, c, color_spec.n_train + item);
            test.labels[i] = c;
        });
    } else {
        train_meta = load_dataset(cfg.dataset.at("train").get<std::string>());
        test = load_dataset(cfg.dataset.at("test").get<std::string>());
        const int n = static_cast<int>(train_meta.size());
        features.resize(n);
        if (train_sim_tree) sim_features.resize(n);
        parallel_for(n, threads, [&](int i) {
            features[i] = extractor->extract(train_meta.images[i]);
            if (train_sim_tree) sim_features[i] = sim_extractor->extract(train_meta.images[i]);
        });
    }
    const int n = static_cast<int>(train_meta.labels.size());
    const int num_classes = static_cast<int>(train_meta.class_names.size());

    // ---- similarity + prepared keys ----------------------------------
    std::shared_ptr<SimilarityFunction> sim;
    if (train_sim_tree) {
        const int depth = cfg.similarity.at("params").value("max_depth", 3);
        DecisionTree tree = train_tree(sim_features, train_meta.labels, depth);
        sim = std::make_shared<TreeSimilarity>(sim_extractor, std::move(tree));
    } else {
        sim = make_similarity(cfg.similarity);
    }

    std::vector<std::vector<double>> keys(n);
    if (auto* ts = dynamic_cast<const TreeSimilarity*>(sim.get()); ts && train_sim_tree) {
        parallel_for(n, threads, [&](int i) {
            keys[i] = {static_cast<double>(ts->tree().predict_values(sim_features[i].values))};
        });
    } else if (data_kind == "color") {
        parallel_for(n, threads, [&](int i) {
            const int c = i / color_spec.n_train, item = i % color_spec.n_train;
            keys[i] = sim->prepare(render_color_item(color_spec, c, item));
        });
    } else {
        parallel_for(n, threads, [&](int i) { keys[i] = sim->prepare(train_meta.images[i]); });
    }

    // ---- memories + classifiers --------------------------------------
    DatasetScorer scorer(std::move(keys), *sim);
    auto [mem, trace] = learn_memories(scorer, cfg.search);
    TrainResult tr = train_memory_classifier(train_meta, sim, mem, extractor, cfg.model,
                                             features, scorer.keys());
    Classifier baseline =
        train_kind(cfg.model, features, train_meta.labels, num_classes, extractor->schema());

    PreparedModel pm;
    pm.mc = std::move(tr.classifier);
    for (int idx : pm.mc.memory_set.memory_indices) pm.memory_keys.push_back(scorer.keys()[idx]);

    // ---- evaluation grid ---------------------------------------------
    std::vector<std::pair<std::string, int>> cells{{"clean", 0}};
    for (const std::string& c : cfg.corruptions)
        for (int s : cfg.severities) cells.emplace_back(c, s);
    std::sort(cells.begin() + 1, cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

    EvalReport report;
    report.rows = evaluate(pm, baseline, test, cells, cfg.seed, threads);
    report.clean_accuracy = report.rows[0].accuracy;
    const json config_echo = config_to_json(cfg);
    report.config_hash = hex64(fnv1a(config_echo.dump()));
    report.seed = cfg.seed;
    report.timestamp = utc_timestamp();
    report.trace = trace_to_json(trace);

    RunArtifacts artifacts;
    artifacts.report = std::move(report);
    artifacts.model = std::move(pm.mc);
    artifacts.baseline = std::move(baseline);
    if (!cfg.output_dir.empty()) {
        fs::create_directories(cfg.output_dir);
        artifacts.csv_path = (fs::path(cfg.output_dir) / "report.csv").string();
        artifacts.sidecar_path = (fs::path(cfg.output_dir) / "report.json").string();
        artifacts.model_path = (fs::path(cfg.output_dir) / "model.json").string();
        emit_report(artifacts.report, artifacts.csv_path);
        std::ofstream sidecar(artifacts.sidecar_path);
        sidecar << report_sidecar(artifacts.report, config_echo).dump(2) << '\n';
        save_model(artifacts.model, artifacts.model_path);
        std::ofstream base_out(fs::path(cfg.output_dir) / "baseline.json");
        base_out << classifier_to_json(artifacts.baseline).dump(2) << '\n';
    }
    return artifacts;
}

}  // namespace memclf
