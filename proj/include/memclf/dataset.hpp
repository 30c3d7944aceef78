#pragma once

#include <string>
#include <vector>

#include "memclf/image.hpp"

namespace memclf {

// Images plus integer labels indexing into class_names.
struct LabeledDataset {
    std::vector<Image> images;
    std::vector<int> labels;
    std::vector<std::string> class_names;

    std::size_t size() const { return images.size(); }
};

// Writes img_00000.ppm ... plus manifest.json ({"classes": [...], "items":
// [{"path", "label"}, ...]}) into dir, creating it if needed.
void save_dataset(const LabeledDataset& ds, const std::string& dir);

// Loads a manifest written by save_dataset; item paths resolve relative to
// the manifest's directory.
LabeledDataset load_dataset(const std::string& manifest_path);

}  // namespace memclf
