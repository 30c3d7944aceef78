#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "memclf/bounds.hpp"
#include "memclf/harness.hpp"
#include "memclf/memsel.hpp"
#include "memclf/parallel.hpp"
#include "memclf/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace memclf;

namespace {

// --similarity accepts inline JSON or a path to a JSON file.
json json_arg(const std::string& value) {
    if (!value.empty() && value.front() == '{') return json::parse(value);
    std::ifstream in(value);
    if (!in) throw std::runtime_error(value + ": cannot open");
    return json::parse(in);
}

std::vector<std::array<std::uint8_t, 3>> parse_alphas(const std::string& text) {
    std::vector<std::array<std::uint8_t, 3>> alphas;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(';', pos);
        if (end == std::string::npos) end = text.size();
        const std::string triple = text.substr(pos, end - pos);
        std::array<std::uint8_t, 3> a{};
        if (std::sscanf(triple.c_str(), "%hhu,%hhu,%hhu", &a[0], &a[1], &a[2]) != 3)
            throw std::runtime_error("bad alpha triple: " + triple);
        alphas.push_back(a);
        pos = end + 1;
    }
    return alphas;
}

int cmd_gen_color(const std::string& out_dir, int L, int w, int n_train, int n_test,
                  std::uint64_t seed, const std::string& alphas) {
    ColorDatasetSpec spec;
    spec.L = L;
    spec.w = w;
    spec.n_train = n_train;
    spec.n_test = n_test;
    spec.seed = seed;
    if (!alphas.empty()) spec.alphas = parse_alphas(alphas);
    auto [train, test] = generate_color_dataset(spec);
    save_dataset(train, (fs::path(out_dir) / "train").string());
    save_dataset(test, (fs::path(out_dir) / "test").string());
    std::cout << "wrote " << train.size() << " train / " << test.size() << " test images to "
              << out_dir << "\n";
    return 0;
}

int cmd_gen_leaf(const std::string& out_dir, int count, int L, double axis_row,
                 double axis_col, std::uint64_t seed) {
    fs::create_directories(out_dir);
    json items = json::array();
    for (int i = 0; i < count; ++i) {
        Rng rng(derive(seed, static_cast<std::uint64_t>(i)));
        const double f_b = 0.05 * static_cast<double>(rng.next_below(11));
        const double f_d = 0.05 * static_cast<double>(rng.next_below(11));
        SyntheticLeaf leaf = generate_synthetic_leaf(
            L, {axis_row, axis_col}, f_b, f_d, derive(seed, 1000003ull + i));
        char name[32];
        std::snprintf(name, sizeof name, "leaf_%04d.ppm", i);
        write_ppm(leaf.image, (fs::path(out_dir) / name).string());
        items.push_back({{"path", name},
                         {"f_b", leaf.f_b},
                         {"f_d", leaf.f_d},
                         {"green", leaf.green_count},
                         {"brown", leaf.brown_count},
                         {"discolored", leaf.discolored_count}});
    }
    std::ofstream out(fs::path(out_dir) / "leaves.json");
    out << json{{"items", items}}.dump(2) << '\n';
    std::cout << "wrote " << count << " leaves to " << out_dir << "\n";
    return 0;
}

int cmd_corrupt(const std::string& in_manifest, const std::string& out_dir,
                const std::string& kind, int severity, std::uint64_t seed, int threads) {
    LabeledDataset ds = load_dataset(in_manifest);
    const int n = static_cast<int>(ds.size());
    parallel_for(n, resolve_threads(threads), [&](int i) {
        ds.images[i] = corrupt(ds.images[i], {kind, severity, derive(seed, i)});
    });
    save_dataset(ds, out_dir);
    std::cout << "wrote " << n << " corrupted images to " << out_dir << "\n";
    return 0;
}

int cmd_learn_memories(const std::string& train_manifest, const std::string& similarity,
                       int zg, int zl, double b_t, std::uint64_t seed,
                       const std::string& out_path) {
    LabeledDataset train = load_dataset(train_manifest);
    auto sim = make_similarity(json_arg(similarity));
    SearchParams params{zg, zl, b_t, seed};
    auto [mem, trace] = learn_memories(train, *sim, params);
    json doc = {{"memories", mem.memory_indices},
                {"thresholds", mem.thresholds},
                {"objective", trace.best_objective},
                {"trace", trace_to_json(trace)}};
    if (out_path.empty()) {
        std::cout << doc.dump(2) << '\n';
    } else {
        std::ofstream out(out_path);
        out << doc.dump(2) << '\n';
        std::cout << "q = " << mem.q() << ", objective = " << trace.best_objective
                  << ", wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_bound(int n, int q, double delta, double rho, double kappa,
              const std::vector<double>& rademacher, double risk,
              const std::vector<int>& nk) {
    BoundParams p;
    p.n = n;
    p.q = q;
    p.delta = delta;
    p.rho = rho;
    p.kappa = kappa;
    p.rademacher_h = rademacher.empty() ? std::vector<double>(q, 0.0) : rademacher;
    p.empirical_risk = risk;
    BoundResult rhs = generalization_bound_rhs(p);
    json doc = {{"c_term", c_term(n, q, delta, rho)},
                {"selector_bound", selector_rademacher_bound(n, q)},
                {"rhs", rhs.rhs},
                {"rhs_clamped", rhs.rhs_clamped},
                {"vacuous", bound_is_vacuous(n, q)}};
    if (!nk.empty()) {
        p.n_k_plus = nk;
        doc["intermediate_rhs"] = intermediate_bound_rhs(p).rhs;
    }
    std::cout << doc.dump(2) << '\n';
    return 0;
}

int cmd_eval(const std::string& model_path, const std::string& train_manifest,
             const std::string& test_manifest, const std::string& baseline_path,
             const std::vector<std::string>& corruptions, const std::vector<int>& severities,
             std::uint64_t seed, int threads, const std::string& out_csv) {
    MemoryClassifier mc = load_model(model_path);
    LabeledDataset train = load_dataset(train_manifest);
    LabeledDataset test = load_dataset(test_manifest);
    PreparedModel pm = PreparedModel::prepare(std::move(mc), train);
    Classifier baseline;
    if (!baseline_path.empty()) {
        std::ifstream in(baseline_path);
        if (!in) throw std::runtime_error(baseline_path + ": cannot open");
        baseline = classifier_from_json(json::parse(in));
    } else {
        baseline = train_majority(train.labels, pm.mc.extractor->schema());
    }
    std::vector<std::pair<std::string, int>> cells{{"clean", 0}};
    for (const std::string& c : corruptions)
        for (int s : severities) cells.emplace_back(c, s);
    std::sort(cells.begin() + 1, cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

    EvalReport report;
    report.rows = evaluate(pm, baseline, test, cells, seed, resolve_threads(threads));
    report.clean_accuracy = report.rows[0].accuracy;
    if (out_csv.empty())
        std::cout << report_to_csv(report);
    else {
        emit_report(report, out_csv);
        std::cout << "wrote " << out_csv << "\n";
    }
    return 0;
}

int cmd_run(const std::string& config_path, int threads_override, bool train_only = false) {
    ExperimentConfig cfg = load_config(config_path);
    if (threads_override > 0) cfg.threads = threads_override;
    if (train_only) {  // keep the clean row, skip the corruption grid
        cfg.corruptions.clear();
        cfg.severities.clear();
    }
    RunArtifacts artifacts = run_experiment(cfg);
    std::cout << "clean accuracy (memclass): " << artifacts.report.rows[0].accuracy << "\n";
    if (!artifacts.csv_path.empty())
        std::cout << "artifacts: " << artifacts.csv_path << ", " << artifacts.model_path
                  << "\n";
    else
        std::cout << report_to_csv(artifacts.report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"memory classifiers: clustering, training, bounds, and robustness sweeps"};
    app.require_subcommand(1);

    // gen-color
    std::string out_dir, alphas;
    int L = 500, w = 50, n_train = 1000, n_test = 100;
    std::uint64_t seed = 0;
    auto* gen_color = app.add_subcommand("gen-color", "generate the colored-patch dataset");
    gen_color->add_option("--out", out_dir, "output directory")->required();
    gen_color->add_option("--L", L, "image side");
    gen_color->add_option("--w", w, "patch side");
    gen_color->add_option("--train", n_train, "training images per class");
    gen_color->add_option("--test", n_test, "test images per class");
    gen_color->add_option("--seed", seed, "RNG seed");
    gen_color->add_option("--alphas", alphas, "class colors, e.g. 255,0,0;0,255,0");

    // gen-leaf
    int leaf_count = 20, leaf_L = 128;
    double axis_row = 42.0, axis_col = 56.0;
    auto* gen_leaf = app.add_subcommand("gen-leaf", "generate synthetic leaves with ground truth");
    gen_leaf->add_option("--out", out_dir, "output directory")->required();
    gen_leaf->add_option("--count", leaf_count, "number of leaves");
    gen_leaf->add_option("--L", leaf_L, "image side");
    gen_leaf->add_option("--axis-row", axis_row, "ellipse semi-axis (rows)");
    gen_leaf->add_option("--axis-col", axis_col, "ellipse semi-axis (columns)");
    gen_leaf->add_option("--seed", seed, "RNG seed");

    // corrupt
    std::string in_manifest, kind;
    int severity = 3, threads = 0;
    auto* corrupt_cmd = app.add_subcommand("corrupt", "corrupt a dataset");
    corrupt_cmd->add_option("--in", in_manifest, "input manifest.json")->required();
    corrupt_cmd->add_option("--out", out_dir, "output directory")->required();
    corrupt_cmd->add_option("--kind", kind, "corruption kind")->required();
    corrupt_cmd->add_option("--severity", severity, "severity 1-5");
    corrupt_cmd->add_option("--seed", seed, "RNG seed");
    corrupt_cmd->add_option("--threads", threads, "worker threads");

    // learn-memories
    std::string similarity, out_path;
    int zg = 10, zl = 100;
    double b_t = 0.5;
    auto* learn = app.add_subcommand("learn-memories", "run the medoid search");
    learn->add_option("--train", in_manifest, "training manifest.json")->required();
    learn->add_option("--similarity", similarity, "similarity JSON (inline or path)")->required();
    learn->add_option("--zg", zg, "global restarts");
    learn->add_option("--zl", zl, "local steps per restart");
    learn->add_option("--bt", b_t, "similarity threshold");
    learn->add_option("--seed", seed, "RNG seed");
    learn->add_option("--out", out_path, "output JSON path (default: stdout)");

    // train
    std::string config_path;
    auto* train_cmd = app.add_subcommand("train", "train a memory classifier from a config");
    train_cmd->add_option("--config", config_path, "experiment config JSON")->required();
    train_cmd->add_option("--threads", threads, "worker threads");

    // eval
    std::string model_path, test_manifest, baseline_path, out_csv;
    std::vector<std::string> corruptions;
    std::vector<int> severities;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a saved model over corruptions");
    eval_cmd->add_option("--model", model_path, "model.json")->required();
    eval_cmd->add_option("--train", in_manifest, "training manifest (memory images)")->required();
    eval_cmd->add_option("--test", test_manifest, "test manifest")->required();
    eval_cmd->add_option("--baseline", baseline_path, "baseline classifier JSON");
    eval_cmd->add_option("--corruptions", corruptions, "corruption kinds")->delimiter(',');
    eval_cmd->add_option("--severities", severities, "severity levels")->delimiter(',');
    eval_cmd->add_option("--seed", seed, "evaluation seed");
    eval_cmd->add_option("--threads", threads, "worker threads");
    eval_cmd->add_option("--out", out_csv, "CSV path (default: stdout)");

    // bound
    int bn = 1000, bq = 3;
    double delta = 0.05, rho = 1.0, kappa = 1.0, risk = 0.0;
    std::vector<double> rademacher;
    std::vector<int> nk;
    auto* bound_cmd = app.add_subcommand("bound", "evaluate the generalization bound");
    bound_cmd->add_option("--n", bn, "sample count");
    bound_cmd->add_option("--q", bq, "memory count");
    bound_cmd->add_option("--delta", delta, "confidence");
    bound_cmd->add_option("--rho", rho, "Eq. 3 rho");
    bound_cmd->add_option("--kappa", kappa, "kappa constant");
    bound_cmd->add_option("--rademacher", rademacher, "per-memory Rademacher estimates")
        ->delimiter(',');
    bound_cmd->add_option("--risk", risk, "empirical risk");
    bound_cmd->add_option("--nk", nk, "per-memory correct counts (intermediate bound)")
        ->delimiter(',');

    // run
    auto* run_cmd = app.add_subcommand("run", "full train + evaluation pipeline");
    run_cmd->add_option("--config", config_path, "experiment config JSON")->required();
    run_cmd->add_option("--threads", threads, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_color->parsed())
            return cmd_gen_color(out_dir, L, w, n_train, n_test, seed, alphas);
        if (gen_leaf->parsed())
            return cmd_gen_leaf(out_dir, leaf_count, leaf_L, axis_row, axis_col, seed);
        if (corrupt_cmd->parsed())
            return cmd_corrupt(in_manifest, out_dir, kind, severity, seed, threads);
        if (learn->parsed())
            return cmd_learn_memories(in_manifest, similarity, zg, zl, b_t, seed, out_path);
        if (train_cmd->parsed()) return cmd_run(config_path, threads, true);
        if (run_cmd->parsed()) return cmd_run(config_path, threads);
        if (eval_cmd->parsed())
            return cmd_eval(model_path, in_manifest, test_manifest, baseline_path, corruptions,
                            severities, seed, threads, out_csv);
        if (bound_cmd->parsed())
            return cmd_bound(bn, bq, delta, rho, kappa, rademacher, risk, nk);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
