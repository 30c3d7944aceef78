"""Memory classifiers: prototype-based classification with expert similarity.

Thin wrapper over the compiled extension. Everything heavy (rendering,
corruption, medoid search, training, evaluation) happens in C++; this layer
only re-exports and documents.
"""

from ._memclf import (  # noqa: F401
    Model,
    c_term,
    clustering_objective,
    color_feature,
    corrupt,
    count_selector_hypotheses,
    exhaustive_memories,
    generalization_bound_rhs,
    generate_color_dataset,
    generate_synthetic_leaf,
    leaf_features,
    learn_memories,
    read_ppm,
    run_experiment,
    selector_rademacher_bound,
    write_ppm,
)

__all__ = [
    "Model",
    "c_term",
    "clustering_objective",
    "color_feature",
    "corrupt",
    "count_selector_hypotheses",
    "exhaustive_memories",
    "generalization_bound_rhs",
    "generate_color_dataset",
    "generate_synthetic_leaf",
    "leaf_features",
    "learn_memories",
    "read_ppm",
    "run_experiment",
    "selector_rademacher_bound",
    "write_ppm",
]
