import json
import math

import numpy as np
import pytest

import memclf


def test_color_dataset_and_feature():
    train, test = memclf.generate_color_dataset(L=64, w=10, n_train=6, n_test=3, seed=7)
    assert train["classes"] == ["class_0", "class_1", "class_2"]
    assert len(train["images"]) == 18 and len(test["images"]) == 9
    img = train["images"][0]
    assert img.shape == (64, 64, 3) and img.dtype == np.uint8
    # every train item carries its generating class as the dominant patch
    for img, label in zip(train["images"], train["labels"]):
        assert memclf.color_feature(img, T=20, quantization_step=64) == label


def test_corruption_is_seeded():
    img = memclf.generate_color_dataset(L=32, w=6, n_train=1, n_test=1, seed=1)[0]["images"][0]
    a = memclf.corrupt(img, "gaussian_noise", 3, seed=42)
    b = memclf.corrupt(img, "gaussian_noise", 3, seed=42)
    c = memclf.corrupt(img, "gaussian_noise", 3, seed=43)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert a.shape == img.shape


def test_synthetic_leaf_roundtrip():
    img, (gt_fd, gt_fb) = memclf.generate_synthetic_leaf(
        L=128, brown_fraction=0.25, discolored_fraction=0.1, seed=3
    )
    fd, fb = memclf.leaf_features(img)
    assert fd == pytest.approx(gt_fd, abs=1e-9)
    assert fb == pytest.approx(gt_fb, abs=1e-9)


def test_bound_values():
    assert memclf.count_selector_hypotheses(5, 3) == 30
    assert memclf.c_term(1000, 1, 0.05) == pytest.approx(math.sqrt(math.log(80) / 1000))
    out = memclf.generalization_bound_rhs(n=10**6, q=2, delta=0.25, kappa=1.0)
    assert out["rhs"] > 0 and out["rhs_clamped"] <= 1.0
    assert not out["vacuous"]
    assert memclf.generalization_bound_rhs(n=100, q=5, delta=0.05)["vacuous"]


def test_matrix_memory_search_matches_exhaustive():
    rng = np.random.default_rng(0)
    n = 12
    m = rng.uniform(0.05, 0.95, size=(n, n))
    m = ((m + m.T) / 2).tolist()
    for i in range(n):
        m[i][i] = 1.0
    best, best_obj = memclf.exhaustive_memories(m, 2)
    found = memclf.learn_memories(m, zg=8, zl=200, b_t=0.5, seed=5)
    q = len(found["memories"])
    ex, ex_obj = memclf.exhaustive_memories(m, q)
    assert found["objective"] == pytest.approx(ex_obj)
    assert sorted(found["memories"]) == ex
    assert best_obj >= memclf.clustering_objective(best, m) - 1e-12


def test_run_experiment(tmp_path):
    cfg = {
        "dataset": {"kind": "color", "L": 48, "w": 8, "n_train": 20, "n_test": 10, "seed": 11},
        "similarity": {"id": "color_feature"},
        "extractor": {"id": "raw_pixels", "grid": 4},
        "search": {"zg": 2, "zl": 20, "b_t": 0.5, "seed": 11},
        "model": {"kind": "majority"},
        "corruptions": ["gaussian_noise"],
        "severities": [1],
        "output_dir": str(tmp_path / "run"),
        "seed": 11,
        "threads": 1,
    }
    out = memclf.run_experiment(cfg)
    assert out["clean_accuracy"] == pytest.approx(1.0)
    rows = out["rows"]
    assert rows[0]["corruption"] == "clean" and rows[0]["model"] == "memclass"
    assert {r["model"] for r in rows} == {"memclass", "baseline"}
    assert (tmp_path / "run" / "report.csv").read_text() == out["csv"]
    model_json = json.loads((tmp_path / "run" / "model.json").read_text())
    assert sorted(model_json) == [
        "classes", "classifiers", "memories", "similarity", "thresholds", "version",
    ]

    # Round-trip the artifact: persist the (deterministic) training split,
    # reload the model against it, and predict.
    train, test = memclf.generate_color_dataset(L=48, w=8, n_train=20, n_test=10, seed=11)
    train_dir = tmp_path / "train"
    train_dir.mkdir()
    items = []
    for i, (img, label) in enumerate(zip(train["images"], train["labels"])):
        name = f"img_{i:05d}.ppm"
        memclf.write_ppm(img, str(train_dir / name))
        items.append({"path": name, "label": label})
    manifest = {"classes": train["classes"], "items": items}
    (train_dir / "manifest.json").write_text(json.dumps(manifest))

    model = memclf.Model.load(
        str(tmp_path / "run" / "model.json"), str(train_dir / "manifest.json")
    )
    assert model.classes == train["classes"]
    preds = [model.predict(img) for img in test["images"]]
    hits = sum(p == y for p, y in zip(preds, test["labels"]))
    assert hits == len(test["labels"])
    sel, score = model.select(test["images"][0])
    assert 1 <= sel <= model.q + 1
