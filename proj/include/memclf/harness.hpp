#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "memclf/dataset.hpp"
#include "memclf/memory.hpp"
#include "memclf/memsel.hpp"

namespace memclf {

struct ExperimentConfig {
    // {"kind":"color", L, w, n_train, n_test, seed, [alphas]} or
    // {"kind":"manifest", "train": path, "test": path}.
    nlohmann::json dataset;
    nlohmann::json similarity;  // make_similarity spec; feature_tree may omit
                                // the tree and give {"extractor", "max_depth"}
                                // to have it trained on the training split
    nlohmann::json extractor;   // make_extractor spec for the h_k inputs
    SearchParams search;
    TrainOptions model;
    std::vector<std::string> corruptions;
    std::vector<int> severities;
    std::string output_dir;     // empty: return the report without writing
    std::uint64_t seed = 0;     // evaluation stream seed
    int threads = 0;            // <= 0: MEMCLF_THREADS, else 1

    void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

struct EvalRow {
    std::string corruption;  // "clean" for the uncorrupted row
    int severity = 0;        // 0 on the clean row
    std::string model;       // "memclass" | "baseline"
    double accuracy = 0.0;
    double oob_rate = 0.0;
    int n = 0;
};

struct EvalReport {
    std::vector<EvalRow> rows;
    double clean_accuracy = 0.0;  // memory classifier on the clean test set
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string timestamp;  // UTC, sidecar only; the CSV stays byte-stable
    nlohmann::json trace;   // memory-search trace
};

// CSV with header `corruption,severity,model,accuracy,oob_rate,n`, floats
// printed with 4 decimals.
std::string report_to_csv(const EvalReport& report);
void emit_report(const EvalReport& report, const std::string& csv_path);
nlohmann::json report_sidecar(const EvalReport& report, const nlohmann::json& config_echo);

// A memory classifier bound to its prepared memory keys; self-sufficient
// for inference without the training images.
struct PreparedModel {
    MemoryClassifier mc;
    std::vector<std::vector<double>> memory_keys;

    static PreparedModel prepare(MemoryClassifier mc, const LabeledDataset& train);
    SelectionResult select(const Image& x) const;
    int predict_label(const Image& x) const;  // classes.size() = unknown
};

// Corrupts every test image with per-image derived seeds, runs both models
// on identical corrupted inputs, and appends one row per model per cell.
// Cell order: clean first, then (corruption name asc, severity asc);
// memclass before baseline within a cell. An empty corruption name in
// cells means the clean cell.
std::vector<EvalRow> evaluate(const PreparedModel& model, const Classifier& baseline,
                              const LabeledDataset& test,
                              const std::vector<std::pair<std::string, int>>& cells,
                              std::uint64_t seed, int threads = 1);

struct RunArtifacts {
    EvalReport report;
    MemoryClassifier model;
    Classifier baseline;
    std::string csv_path;      // empty when output_dir was empty
    std::string sidecar_path;
    std::string model_path;
};

// Full pipeline: data -> features -> memories -> classifiers -> evaluation
// grid -> artifacts. Deterministic for a fixed config and any thread count.
RunArtifacts run_experiment(const ExperimentConfig& cfg);

}  // namespace memclf
