#pragma once

#include <string>
#include <vector>

namespace memclf {

// Dense feature vector with a named schema. Learners trained on one schema
// refuse vectors carrying another; that catches extractor mismatches at the
// boundary instead of producing silently-wrong predictions.
struct FeatureVector {
    std::vector<double> values;
    std::vector<std::string> schema;  // one name per value, same order

    bool operator==(const FeatureVector&) const = default;
};

// Throws std::invalid_argument when the schemas differ.
void require_schema(const std::vector<std::string>& expected,
                    const FeatureVector& fv, const char* where);

}  // namespace memclf
