"""Command-line pipeline: outputs, exit codes, determinism."""

import numpy as np
import pytest

from modembed import planted_partition
from modembed.cli import main

BARBELL = "a b\na c\nb c\nd e\nd f\ne f\nc d\n"
PATH3 = "a b\nb c\n"
TRIANGLE = "a b\nb c\na c\n"


@pytest.fixture
def barbell_file(tmp_path):
    path = tmp_path / "barbell.txt"
    path.write_text(BARBELL)
    return str(path)


@pytest.fixture
def path3_file(tmp_path):
    path = tmp_path / "path3.txt"
    path.write_text(PATH3)
    return str(path)


def read_table(path):
    lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    head = lines[0].split("\t")
    body = [line.split("\t") for line in lines[1:]]
    return head, body


def test_spectrum_path3(tmp_path, path3_file):
    out = tmp_path / "spec.tsv"
    assert main(["spectrum", path3_file, "--output", str(out)]) == 0
    text = out.read_text()
    values = [float(line.split("\t")[1]) for line in text.splitlines()[1:-1]]
    np.testing.assert_allclose(sorted(values), sorted([0.0, 0.0, -3 / 8]), atol=1e-12)
    assert sum(values) == pytest.approx(-3 / 8, abs=1e-10)
    assert text.splitlines()[-1] == "# selected_k\t1"


def test_spectrum_triangle(tmp_path):
    graph = tmp_path / "k3.txt"
    graph.write_text(TRIANGLE)
    out = tmp_path / "spec.tsv"
    assert main(["spectrum", str(graph), "--output", str(out)]) == 0
    values = [float(line.split("\t")[1]) for line in out.read_text().splitlines()[1:-1]]
    np.testing.assert_allclose(values, [0.0, -1 / 6, -1 / 6], atol=1e-12)


def test_spectrum_walk_two_on_path_is_flat(tmp_path, path3_file):
    out = tmp_path / "spec.tsv"
    assert main(["spectrum", path3_file, "--sampler", "walk:2", "--output", str(out)]) == 0
    values = [float(line.split("\t")[1]) for line in out.read_text().splitlines()[1:-1]]
    assert np.abs(values).max() <= 1e-12


def test_embed_barbell(tmp_path, barbell_file):
    out = tmp_path / "emb.tsv"
    assert main(["embed", barbell_file, "--dim", "2", "--output", str(out)]) == 0
    head, body = read_table(out)
    assert head == ["node", "dim_1", "dim_2"]
    assert [row[0] for row in body] == list("abcdef")
    h = np.array([[float(v) for v in row[1:]] for row in body])
    np.testing.assert_allclose(np.linalg.norm(h, axis=0), [1.0, 1.0], atol=1e-10)
    # leading column separates the triangles
    assert len({np.sign(v) for v in h[:3, 0]}) == 1
    assert np.sign(h[0, 0]) != np.sign(h[3, 0])


def test_embed_auto_dim_and_spectrum_sidecar(tmp_path, barbell_file):
    out = tmp_path / "emb.tsv"
    spec = tmp_path / "spec.tsv"
    ids = tmp_path / "ids.tsv"
    code = main(
        [
            "embed",
            barbell_file,
            "--emit-spectrum",
            str(spec),
            "--id-map",
            str(ids),
            "--output",
            str(out),
        ]
    )
    assert code == 0
    head, body = read_table(out)
    assert head == ["node", "dim_1"]  # only one positive eigenvalue on the barbell
    assert spec.read_text().splitlines()[-1] == "# selected_k\t1"
    assert ids.read_text().startswith("a\t0\nb\t1\n")


def test_embed_dim_too_large_is_usage_error(tmp_path, path3_file):
    out = tmp_path / "emb.tsv"
    assert main(["embed", path3_file, "--dim", "99", "--output", str(out)]) == 1


def test_eigenmap_path3(tmp_path, path3_file):
    out = tmp_path / "map.tsv"
    assert main(["eigenmap", path3_file, "--dim", "1", "--output", str(out)]) == 0
    _, body = read_table(out)
    column = [float(row[1]) for row in body]
    np.testing.assert_allclose(column, [1 / np.sqrt(2), 0.0, -1 / np.sqrt(2)], atol=1e-12)


def test_eigenmap_requires_fixed_dim(tmp_path, path3_file):
    assert main(["eigenmap", path3_file, "--output", str(tmp_path / "x.tsv")]) == 1


def test_pca_scaled_scores(tmp_path):
    data = tmp_path / "points.csv"
    data.write_text("p,-1,0\nq,1,0\n")
    out = tmp_path / "pca.tsv"
    code = main(
        ["pca", str(data), "--id-column", "--scaled", "--dim", "1", "--output", str(out)]
    )
    assert code == 0
    head, body = read_table(out)
    assert head == ["node", "dim_1"]
    assert [row[0] for row in body] == ["p", "q"]
    scores = [float(row[1]) for row in body]
    np.testing.assert_allclose(scores, [1.0, -1.0], atol=1e-12)


def test_cluster_barbell(tmp_path, barbell_file):
    out = tmp_path / "clusters.tsv"
    hist = tmp_path / "history.tsv"
    code = main(
        [
            "cluster",
            barbell_file,
            "--dim",
            "2",
            "--seed",
            "5",
            "--emit-history",
            str(hist),
            "--output",
            str(out),
        ]
    )
    assert code == 0
    _, body = read_table(out)
    groups = {row[0]: row[1] for row in body}
    assert groups["a"] == groups["b"] == groups["c"]
    assert groups["d"] == groups["e"] == groups["f"]
    assert groups["a"] != groups["d"]
    _, trace = read_table(hist)
    objective = [float(row[1]) for row in trace]
    assert min(np.diff(objective)) >= -1e-12


def _write_planted(tmp_path, seed=0):
    g, dataset = planted_partition(3, 20, 0.6, 0.05, seed=seed)
    graph_path = tmp_path / "planted.txt"
    graph_path.write_text(
        "".join(f"{g.ids[u]} {g.ids[w]}\n" for u, w, _ in g.edges)
    )
    label_path = tmp_path / "planted_labels.txt"
    label_path.write_text(
        "".join(f"{g.ids[i]} c{dataset.labels[i]}\n" for i in range(g.n))
    )
    return str(graph_path), str(label_path)


def test_classify_planted(tmp_path):
    graph_path, label_path = _write_planted(tmp_path)
    out = tmp_path / "report.tsv"
    code = main(
        [
            "classify",
            graph_path,
            label_path,
            "--train-fraction",
            "0.2",
            "--seed",
            "11",
            "--output",
            str(out),
        ]
    )
    assert code == 0
    rows = dict(
        line.split("\t") for line in out.read_text().splitlines()[1:]
    )
    assert set(rows) == {
        "micro_f1",
        "macro_f1",
        "selected_k",
        "n_train",
        "n_holdout",
        "sweeps",
        "converged",
    }
    assert rows["n_train"] == "12"
    assert rows["n_holdout"] == "48"
    assert float(rows["micro_f1"]) >= 0.9
    assert rows["converged"] in {"true", "false"}


def test_classify_rejects_full_training_fraction(tmp_path):
    graph_path, label_path = _write_planted(tmp_path)
    code = main(
        ["classify", graph_path, label_path, "--train-fraction", "0.999",
         "--output", str(tmp_path / "r.tsv")]
    )
    assert code == 2


def test_eval_hand_example(tmp_path):
    truth = tmp_path / "truth.txt"
    truth.write_text("n1 A\nn2 A\nn3 B\nn4 B\n")
    pred = tmp_path / "pred.txt"
    pred.write_text("n1 A\nn2 B\nn3 B\nn4 B\n")
    out = tmp_path / "scores.tsv"
    assert main(["eval", str(truth), str(pred), "--output", str(out)]) == 0
    rows = dict(line.split("\t") for line in out.read_text().splitlines()[1:])
    assert float(rows["micro_f1"]) == pytest.approx(0.75, abs=1e-15)
    assert float(rows["macro_f1"]) == pytest.approx(15 / 19, abs=1e-15)
    assert rows["n_evaluated"] == "4"


def test_eval_rejects_unknown_node(tmp_path):
    truth = tmp_path / "truth.txt"
    truth.write_text("n1 A\nn2 B\n")
    pred = tmp_path / "pred.txt"
    pred.write_text("n1 A\nnX B\n")
    assert main(["eval", str(truth), str(pred), "--output", "-"]) == 2


def test_usage_errors_exit_one(tmp_path, path3_file):
    assert main([]) == 1
    assert main(["frobnicate"]) == 1
    out = str(tmp_path / "x.tsv")
    assert main(["spectrum", path3_file, "--sampler", "vortex", "--output", out]) == 1
    assert main(["spectrum", path3_file, "--sampler", "walk:0", "--output", out]) == 1
    assert main(["spectrum", path3_file, "--sampler", "walk:17", "--output", out]) == 1


def test_input_errors_exit_two(tmp_path):
    out = str(tmp_path / "x.tsv")
    assert main(["spectrum", str(tmp_path / "missing.txt"), "--output", out]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("a\n")
    assert main(["spectrum", str(bad), "--output", out]) == 2
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    assert main(["spectrum", str(empty), "--output", out]) == 2
    disconnected = tmp_path / "two.txt"
    disconnected.write_text("a b\nc d\n")
    assert main(["spectrum", str(disconnected), "--sampler", "walk:2", "--output", out]) == 2


def test_numerical_errors_exit_three(tmp_path, path3_file):
    out = str(tmp_path / "x.tsv")
    code = main(
        ["spectrum", path3_file, "--sampler", "expdist", "--theta", "-1000", "--output", out]
    )
    assert code == 3


def test_reruns_are_byte_identical(tmp_path, barbell_file):
    first = tmp_path / "a.tsv"
    second = tmp_path / "b.tsv"
    for out in (first, second):
        assert (
            main(["cluster", barbell_file, "--dim", "2", "--seed", "9",
                  "--output", str(out)])
            == 0
        )
    assert first.read_bytes() == second.read_bytes()
