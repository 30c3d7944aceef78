#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>

#include <json.hpp>

#include "memclf/bounds.hpp"
#include "memclf/features.hpp"
#include "memclf/harness.hpp"
#include "memclf/memsel.hpp"
#include "memclf/synth.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace memclf;

namespace {

Image image_from_array(const py::array_t<std::uint8_t>& arr) {
    const auto buf = arr.request();
    if (buf.ndim != 3 || buf.shape[2] != 3)
        throw std::invalid_argument("expected an (H, W, 3) uint8 array");
    Image img(static_cast<int>(buf.shape[0]), static_cast<int>(buf.shape[1]));
    auto view = arr.unchecked<3>();
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c)
            for (int ch = 0; ch < 3; ++ch) img.set(r, c, ch, view(r, c, ch));
    return img;
}

py::array_t<std::uint8_t> image_to_array(const Image& img) {
    py::array_t<std::uint8_t> arr({img.height, img.width, 3});
    auto view = arr.mutable_unchecked<3>();
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c)
            for (int ch = 0; ch < 3; ++ch) view(r, c, ch) = img.at(r, c, ch);
    return arr;
}

py::dict dataset_to_dict(const LabeledDataset& ds) {
    py::list images;
    for (const Image& img : ds.images) images.append(image_to_array(img));
    py::dict out;
    out["images"] = images;
    out["labels"] = ds.labels;
    out["classes"] = ds.class_names;
    return out;
}

json json_from_py(const py::object& obj) {
    return json::parse(
        py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

py::object py_from_json(const json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_memclf, m) {
    m.doc() = "memory classifiers: prototype-based classification with expert similarity";

    m.def("read_ppm", [](const std::string& path) { return image_to_array(read_ppm(path)); });
    m.def("write_ppm", [](const py::array_t<std::uint8_t>& img, const std::string& path) {
        write_ppm(image_from_array(img), path);
    });

    m.def(
        "generate_color_dataset",
        [](int L, int w, int n_train, int n_test, std::uint64_t seed) {
            ColorDatasetSpec spec;
            spec.L = L;
            spec.w = w;
            spec.n_train = n_train;
            spec.n_test = n_test;
            spec.seed = seed;
            auto [train, test] = generate_color_dataset(spec);
            return py::make_tuple(dataset_to_dict(train), dataset_to_dict(test));
        },
        py::arg("L") = 500, py::arg("w") = 50, py::arg("n_train") = 1000,
        py::arg("n_test") = 100, py::arg("seed") = 0);

    m.def(
        "generate_synthetic_leaf",
        [](int L, double axis_row, double axis_col, double brown_fraction,
           double discolored_fraction, std::uint64_t seed) {
            SyntheticLeaf leaf = generate_synthetic_leaf(
                L, {axis_row, axis_col}, brown_fraction, discolored_fraction, seed);
            return py::make_tuple(image_to_array(leaf.image),
                                  py::make_tuple(leaf.f_d, leaf.f_b));
        },
        py::arg("L") = 128, py::arg("axis_row") = 42.0, py::arg("axis_col") = 56.0,
        py::arg("brown_fraction") = 0.0, py::arg("discolored_fraction") = 0.0,
        py::arg("seed") = 0);

    m.def(
        "corrupt",
        [](const py::array_t<std::uint8_t>& img, const std::string& kind, int severity,
           std::uint64_t seed) {
            return image_to_array(corrupt(image_from_array(img), {kind, severity, seed}));
        },
        py::arg("image"), py::arg("kind"), py::arg("severity"), py::arg("seed") = 0);

    m.def(
        "color_feature",
        [](const py::array_t<std::uint8_t>& img, int T, int quantization_step,
           double darkness_floor) {
            return static_cast<int>(
                color_feature(image_from_array(img), T, quantization_step, darkness_floor));
        },
        py::arg("image"), py::arg("T") = 20, py::arg("quantization_step") = 64,
        py::arg("darkness_floor") = 32.0);

    m.def(
        "leaf_features",
        [](const py::array_t<std::uint8_t>& img) {
            LeafFeatures lf = leaf_features(image_from_array(img));
            return py::make_tuple(lf.f_d, lf.f_b);
        },
        py::arg("image"));

    m.def("c_term", &c_term, py::arg("n"), py::arg("q"), py::arg("delta"),
          py::arg("rho") = 1.0);
    m.def("selector_rademacher_bound", &selector_rademacher_bound, py::arg("n"), py::arg("q"));
    m.def(
        "count_selector_hypotheses",
        [](int n, int q) {
            // Arbitrary-precision result crosses the boundary as a string.
            return py::module_::import("builtins").attr("int")(
                count_selector_hypotheses(n, q).str());
        },
        py::arg("n"), py::arg("q"));
    m.def(
        "generalization_bound_rhs",
        [](int n, int q, double delta, double rho, double kappa,
           const std::vector<double>& rademacher_h, double empirical_risk) {
            BoundParams p;
            p.n = n;
            p.q = q;
            p.delta = delta;
            p.rho = rho;
            p.kappa = kappa;
            // Omitted estimates mean "no per-cluster complexity term".
            p.rademacher_h = rademacher_h.empty() && q > 0
                                 ? std::vector<double>(static_cast<std::size_t>(q), 0.0)
                                 : rademacher_h;
            p.empirical_risk = empirical_risk;
            BoundResult r = generalization_bound_rhs(p);
            py::dict out;
            out["rhs"] = r.rhs;
            out["rhs_clamped"] = r.rhs_clamped;
            out["vacuous"] = bound_is_vacuous(n, q);
            return out;
        },
        py::arg("n"), py::arg("q"), py::arg("delta"), py::arg("rho") = 1.0,
        py::arg("kappa") = 1.0, py::arg("rademacher_h") = std::vector<double>{},
        py::arg("empirical_risk") = 0.0);

    m.def(
        "learn_memories",
        [](const std::vector<std::vector<double>>& matrix, int zg, int zl, double b_t,
           std::uint64_t seed) {
            MatrixScorer scorer(matrix);
            auto [mem, trace] = learn_memories(scorer, SearchParams{zg, zl, b_t, seed});
            py::dict out;
            out["memories"] = mem.memory_indices;
            out["thresholds"] = mem.thresholds;
            out["objective"] = trace.best_objective;
            out["trace"] = py_from_json(trace_to_json(trace));
            return out;
        },
        py::arg("matrix"), py::arg("zg") = 10, py::arg("zl") = 100, py::arg("b_t") = 0.5,
        py::arg("seed") = 0);

    m.def(
        "exhaustive_memories",
        [](const std::vector<std::vector<double>>& matrix, int q) {
            MatrixScorer scorer(matrix);
            std::vector<int> best = exhaustive_memories(scorer, q);
            return py::make_tuple(best, clustering_objective(best, scorer));
        },
        py::arg("matrix"), py::arg("q"));

    m.def(
        "clustering_objective",
        [](const std::vector<int>& memories, const std::vector<std::vector<double>>& matrix) {
            return clustering_objective(memories, MatrixScorer(matrix));
        },
        py::arg("memories"), py::arg("matrix"));

    m.def(
        "run_experiment",
        [](const py::object& config) {
            json j;
            if (py::isinstance<py::str>(config)) {
                const auto path = config.cast<std::string>();
                std::ifstream in(path);
                if (!in) throw std::runtime_error("cannot open config: " + path);
                j = json::parse(in);
            } else {
                j = json_from_py(config);
            }
            RunArtifacts artifacts = run_experiment(config_from_json(j));
            py::list rows;
            for (const EvalRow& r : artifacts.report.rows) {
                py::dict row;
                row["corruption"] = r.corruption;
                row["severity"] = r.severity;
                row["model"] = r.model;
                row["accuracy"] = r.accuracy;
                row["oob_rate"] = r.oob_rate;
                row["n"] = r.n;
                rows.append(row);
            }
            py::dict out;
            out["rows"] = rows;
            out["clean_accuracy"] = artifacts.report.clean_accuracy;
            out["csv"] = report_to_csv(artifacts.report);
            out["model"] = py_from_json(model_to_json(artifacts.model));
            return out;
        },
        py::arg("config"), "Run the full pipeline from a config dict or JSON path.");

    py::class_<PreparedModel>(m, "Model")
        .def_static(
            "load",
            [](const std::string& model_path, const std::string& train_manifest) {
                return PreparedModel::prepare(load_model(model_path),
                                              load_dataset(train_manifest));
            },
            py::arg("model_path"), py::arg("train_manifest"))
        .def(
            "predict",
            [](const PreparedModel& pm, const py::array_t<std::uint8_t>& img) {
                return pm.predict_label(image_from_array(img));
            },
            py::arg("image"))
        .def(
            "select",
            [](const PreparedModel& pm, const py::array_t<std::uint8_t>& img) {
                SelectionResult sel = pm.select(image_from_array(img));
                return py::make_tuple(sel.selected, sel.score);
            },
            py::arg("image"))
        .def_property_readonly("classes",
                               [](const PreparedModel& pm) { return pm.mc.classes; })
        .def_property_readonly("q",
                               [](const PreparedModel& pm) { return pm.mc.memory_set.q(); });
}
