#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <json.hpp>

#include "memclf/dataset.hpp"
#include "memclf/memory.hpp"
#include "memclf/rng.hpp"
#include "memclf/similarity.hpp"

namespace memclf {

// Similarity restricted to the points of one dataset; lets the search run on
// plain matrices in tests and on prepared-key datasets in the pipeline.
class PairScorer {
public:
    virtual ~PairScorer() = default;
    virtual int size() const = 0;
    virtual double score(int a, int b) const = 0;
};

// Arbitrary score matrix (tests, oracles).
class MatrixScorer : public PairScorer {
public:
    explicit MatrixScorer(std::vector<std::vector<double>> matrix);
    int size() const override { return static_cast<int>(matrix_.size()); }
    double score(int a, int b) const override { return matrix_[a][b]; }

private:
    std::vector<std::vector<double>> matrix_;
};

// Prepares every dataset point once; caches the full n x n score matrix for
// n <= 2000, otherwise scores prepared keys on demand.
class DatasetScorer : public PairScorer {
public:
    DatasetScorer(const LabeledDataset& data, const SimilarityFunction& sim);
    // Takes ownership of already-prepared keys (streamed pipelines).
    DatasetScorer(std::vector<std::vector<double>> keys, const SimilarityFunction& sim);
    int size() const override { return static_cast<int>(keys_.size()); }
    double score(int a, int b) const override;
    const std::vector<std::vector<double>>& keys() const { return keys_; }

private:
    void build_cache();
    std::vector<std::vector<double>> keys_;
    const SimilarityFunction& sim_;
    std::vector<double> cache_;  // n*n when cached, empty otherwise
};

struct SearchParams {
    int zg = 10;       // global restarts, >= 1
    int zl = 100;      // local steps per restart, >= 0
    double b_t = 0.5;  // similarity threshold, strictly inside (0,1)
    std::uint64_t seed = 0;

    void validate() const;
};

SearchParams search_params_from_json(const nlohmann::json& j);  // keys zg/zl/b_t/seed
nlohmann::json search_params_to_json(const SearchParams& p);

struct RestartTrace {
    double initial_objective = 0.0;
    double final_objective = 0.0;
    int accepted_steps = 0;
    int q = 0;
    std::vector<double> objectives;  // initial value, then one per accepted swap
};

struct SearchTrace {
    std::vector<RestartTrace> restarts;
    double best_objective = 0.0;
    std::vector<int> best_memories;
};

nlohmann::json trace_to_json(const SearchTrace& t);

// Sum over datapoints of the best similarity to any memory.
double clustering_objective(const std::vector<int>& memories, const PairScorer& scorer);

// Threshold-coverage initialization: repeatedly pick a random rejected point
// as a memory and drop everything it covers (score > b_t). The pick itself
// is always dropped, so the loop terminates for any similarity.
std::vector<int> generate_initial_memories(const PairScorer& scorer, double b_t, Rng& rng);

// Randomized medoid search: zg restarts of (initialize, then zl uniform
// single-swap proposals accepted on strict improvement). Returns the best
// memory set across restarts with all thresholds set to b_t.
std::pair<MemorySet, SearchTrace> learn_memories(const PairScorer& scorer,
                                                 const SearchParams& p);

// Convenience wrappers over a DatasetScorer.
std::vector<int> generate_initial_memories(const LabeledDataset& data,
                                           const SimilarityFunction& sim, double b_t,
                                           Rng& rng);
std::pair<MemorySet, SearchTrace> learn_memories(const LabeledDataset& data,
                                                 const SimilarityFunction& sim,
                                                 const SearchParams& p);

// Brute force over all C(n,q) subsets; ties go to the lexicographically
// smallest index tuple. Guarded to C(n,q) <= 10^6.
std::vector<int> exhaustive_memories(const PairScorer& scorer, int q);

}  // namespace memclf
