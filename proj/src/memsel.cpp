#include "memclf/memsel.hpp"

#include <algorithm>
#include <stdexcept>

namespace memclf {

using nlohmann::json;

MatrixScorer::MatrixScorer(std::vector<std::vector<double>> matrix)
    : matrix_(std::move(matrix)) {
    for (const auto& row : matrix_)
        if (row.size() != matrix_.size())
            throw std::invalid_argument("MatrixScorer: matrix not square");
}

DatasetScorer::DatasetScorer(const LabeledDataset& data, const SimilarityFunction& sim)
    : sim_(sim) {
    keys_.reserve(data.size());
    for (const Image& img : data.images) keys_.push_back(sim.prepare(img));
    build_cache();
}

DatasetScorer::DatasetScorer(std::vector<std::vector<double>> keys,
                             const SimilarityFunction& sim)
    : keys_(std::move(keys)), sim_(sim) {
    build_cache();
}

void DatasetScorer::build_cache() {
    const std::size_t n = keys_.size();
    if (n == 0 || n > 2000) return;  // beyond the cache budget: score on demand
    cache_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            cache_[a * n + b] = sim_.score_prepared(keys_[a], keys_[b]);
}

double DatasetScorer::score(int a, int b) const {
    if (!cache_.empty()) return cache_[static_cast<std::size_t>(a) * keys_.size() + b];
    return sim_.score_prepared(keys_[a], keys_[b]);
}

void SearchParams::validate() const {
    if (zg < 1) throw std::invalid_argument("SearchParams: zg must be >= 1");
    if (zl < 0) throw std::invalid_argument("SearchParams: zl must be >= 0");
    if (!(b_t > 0.0 && b_t < 1.0))
        throw std::invalid_argument("SearchParams: b_t must lie strictly inside (0,1)");
}

SearchParams search_params_from_json(const json& j) {
    SearchParams p;
    p.zg = j.value("zg", p.zg);
    p.zl = j.value("zl", p.zl);
    p.b_t = j.value("b_t", p.b_t);
    p.seed = j.value("seed", p.seed);
    p.validate();
    return p;
}

json search_params_to_json(const SearchParams& p) {
    return {{"zg", p.zg}, {"zl", p.zl}, {"b_t", p.b_t}, {"seed", p.seed}};
}

json trace_to_json(const SearchTrace& t) {
    json restarts = json::array();
    for (const RestartTrace& r : t.restarts)
        restarts.push_back({{"initial_objective", r.initial_objective},
                            {"final_objective", r.final_objective},
                            {"accepted_steps", r.accepted_steps},
                            {"q", r.q},
                            {"objectives", r.objectives}});
    return {{"restarts", restarts},
            {"best_objective", t.best_objective},
            {"best_memories", t.best_memories}};
}

double clustering_objective(const std::vector<int>& memories, const PairScorer& scorer) {
    if (memories.empty())
        throw std::invalid_argument("clustering_objective: empty memory list");
    const int n = scorer.size();
    for (int m : memories)
        if (m < 0 || m >= n)
            throw std::invalid_argument("clustering_objective: memory index out of range");
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double best = scorer.score(memories[0], i);
        for (std::size_t j = 1; j < memories.size(); ++j)
            best = std::max(best, scorer.score(memories[j], i));
        total += best;
    }
    return total;
}

std::vector<int> generate_initial_memories(const PairScorer& scorer, double b_t, Rng& rng) {
    const int n = scorer.size();
    if (n == 0) throw std::invalid_argument("generate_initial_memories: empty dataset");
    std::vector<int> rejected(n);
    for (int i = 0; i < n; ++i) rejected[i] = i;
    std::vector<int> memories;
    while (!rejected.empty()) {
        const int pick = rejected[rng.next_below(rejected.size())];
        memories.push_back(pick);
        std::erase_if(rejected, [&](int r) { return r == pick || scorer.score(pick, r) > b_t; });
    }
    return memories;
}

std::pair<MemorySet, SearchTrace> learn_memories(const PairScorer& scorer,
                                                 const SearchParams& p) {
    p.validate();
    const int n = scorer.size();
    if (n == 0) throw std::invalid_argument("learn_memories: empty dataset");

    SearchTrace trace;
    std::vector<int> best_memories;
    double best_objective = 0.0;
    for (int g = 0; g < p.zg; ++g) {
        Rng rng(derive(p.seed, static_cast<std::uint64_t>(g)));
        std::vector<int> current = generate_initial_memories(scorer, p.b_t, rng);
        const int q = static_cast<int>(current.size());
        double objective = clustering_objective(current, scorer);

        RestartTrace rt;
        rt.initial_objective = objective;
        rt.q = q;
        rt.objectives.push_back(objective);
        if (q < n) {  // with q == n there are no swap neighbors
            std::vector<char> is_member(n, 0);
            for (int m : current) is_member[m] = 1;
            for (int step = 0; step < p.zl; ++step) {
                const int pos = static_cast<int>(rng.next_below(q));
                // Map a uniform draw over the n-q non-members to its index.
                int target = static_cast<int>(rng.next_below(n - q));
                int candidate = 0;
                for (int i = 0;; ++i) {
                    if (is_member[i]) continue;
                    if (target-- == 0) {
                        candidate = i;
                        break;
                    }
                }
                const int old = current[pos];
                current[pos] = candidate;
                const double proposed = clustering_objective(current, scorer);
                if (proposed > objective) {
                    objective = proposed;
                    is_member[old] = 0;
                    is_member[candidate] = 1;
                    ++rt.accepted_steps;
                    rt.objectives.push_back(objective);
                } else {
                    current[pos] = old;
                }
            }
        }
        rt.final_objective = objective;
        trace.restarts.push_back(rt);
        if (g == 0 || objective > best_objective) {
            best_objective = objective;
            best_memories = current;
        }
    }

    trace.best_objective = best_objective;
    trace.best_memories = best_memories;
    MemorySet mem;
    mem.memory_indices = std::move(best_memories);
    mem.thresholds.assign(mem.memory_indices.size(), p.b_t);
    return {std::move(mem), std::move(trace)};
}

std::vector<int> generate_initial_memories(const LabeledDataset& data,
                                           const SimilarityFunction& sim, double b_t,
                                           Rng& rng) {
    DatasetScorer scorer(data, sim);
    return generate_initial_memories(scorer, b_t, rng);
}

std::pair<MemorySet, SearchTrace> learn_memories(const LabeledDataset& data,
                                                 const SimilarityFunction& sim,
                                                 const SearchParams& p) {
    DatasetScorer scorer(data, sim);
    return learn_memories(scorer, p);
}

std::vector<int> exhaustive_memories(const PairScorer& scorer, int q) {
    const int n = scorer.size();
    if (q < 1 || q > n) throw std::invalid_argument("exhaustive_memories: need 1 <= q <= n");
    double subsets = 1.0;  // C(n,q), checked against the guard as we go
    for (int i = 1; i <= q; ++i) {
        subsets = subsets * (n - q + i) / i;
        if (subsets > 1e6)
            throw std::length_error("exhaustive_memories: C(n,q) exceeds 10^6 guard");
    }

    std::vector<int> current(q), best;
    for (int i = 0; i < q; ++i) current[i] = i;
    double best_objective = 0.0;
    for (;;) {
        const double objective = clustering_objective(current, scorer);
        if (best.empty() || objective > best_objective) {  // strict: first = lex smallest
            best_objective = objective;
            best = current;
        }
        // Advance to the next combination in lexicographic order.
        int i = q - 1;
        while (i >= 0 && current[i] == n - q + i) --i;
        if (i < 0) break;
        ++current[i];
        for (int k = i + 1; k < q; ++k) current[k] = current[k - 1] + 1;
    }
    return best;
}

}  // namespace memclf
