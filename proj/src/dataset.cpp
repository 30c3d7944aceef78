#include "memclf/dataset.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "memclf/feature_vector.hpp"

namespace memclf {

namespace fs = std::filesystem;
using nlohmann::json;

void require_schema(const std::vector<std::string>& expected,
                    const FeatureVector& fv, const char* where) {
    if (fv.schema != expected)
        throw std::invalid_argument(std::string(where) + ": feature schema mismatch");
}

void save_dataset(const LabeledDataset& ds, const std::string& dir) {
    if (ds.images.size() != ds.labels.size())
        throw std::invalid_argument("save_dataset: images/labels size mismatch");
    fs::create_directories(dir);
    json items = json::array();
    for (std::size_t i = 0; i < ds.images.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "img_%05zu.ppm", i);
        write_ppm(ds.images[i], (fs::path(dir) / name).string());
        items.push_back({{"path", name}, {"label", ds.labels[i]}});
    }
    json manifest = {{"classes", ds.class_names}, {"items", items}};
    std::ofstream out(fs::path(dir) / "manifest.json");
    out << manifest.dump(2) << '\n';
}

LabeledDataset load_dataset(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error(manifest_path + ": cannot open");
    json manifest = json::parse(in);
    LabeledDataset ds;
    ds.class_names = manifest.at("classes").get<std::vector<std::string>>();
    fs::path base = fs::path(manifest_path).parent_path();
    for (const auto& item : manifest.at("items")) {
        int label = item.at("label").get<int>();
        if (label < 0 || label >= static_cast<int>(ds.class_names.size()))
            throw std::runtime_error(manifest_path + ": label out of range");
        ds.images.push_back(read_ppm((base / item.at("path").get<std::string>()).string()));
        ds.labels.push_back(label);
    }
    return ds;
}

}  // namespace memclf
