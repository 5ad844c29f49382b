import csv
import json
import shutil

import numpy as np
import pytest

from conftest import DATA
from seedrank.cli import main
from seedrank.madm import DEFAULT_CRITERIA, hierarchy_supermatrix, pairwise_from_ordering

MIN = DATA / "minimal"
CRIT = [c.name for c in DEFAULT_CRITERIA]


def common(d=MIN, evidence=True, config=True):
    args = ["--network", str(d / "network.tsv"), "--seeds", str(d / "seeds.txt")]
    if config:
        args += ["--config", str(d / "config.json")]
    if evidence:
        args += [
            "--similarity", str(d / "similarity.tsv"),
            "--disease-genes", str(d / "disease_genes.tsv"),
            "--disease", "QD",
        ]
    return args


def read_csv(p):
    with open(p, newline="") as fh:
        return list(csv.DictReader(fh))


def test_prioritize_matches_golden(tmp_path):
    rc = main(["prioritize", *common(), "--candidates", str(MIN / "candidates.txt"), "--out", str(tmp_path)])
    assert rc == 0
    got, gold = read_csv(tmp_path / "ranking.csv"), read_csv(MIN / "golden_ranking.csv")
    assert [r["gene_id"] for r in got] == [r["gene_id"] for r in gold]
    for a, b in zip(got, gold):
        for col in ("np", "rwr", "sp", "evidence", "fused"):
            assert float(a[col]) == pytest.approx(float(b[col]), abs=1e-8)
        assert a["rank"] == b["rank"]
    assert (tmp_path / "manifest.json").exists()


def test_missing_network_exits_2(tmp_path, capsys):
    rc = main(["prioritize", "--network", str(tmp_path / "nope.tsv"), "--seeds", str(MIN / "seeds.txt"),
               "--all-nonseeds", "--weights", "1,1,1,1", "--out", str(tmp_path)])
    assert rc == 2
    assert "error" in capsys.readouterr().err
    assert not (tmp_path / "ranking.csv").exists()


def test_bad_flag_exits_2(tmp_path):
    assert main(["prioritize", "--bogus"]) == 2


def test_all_nonseeds_three_nodes(tmp_path):
    (tmp_path / "n.tsv").write_text("a\tb\t0.9\nb\tc\t0.5\n")
    (tmp_path / "s.txt").write_text("a\n")
    rc = main(["prioritize", "--network", str(tmp_path / "n.tsv"), "--seeds", str(tmp_path / "s.txt"),
               "--all-nonseeds", "--weights", "1,1,1,0", "--out", str(tmp_path / "o")])
    assert rc == 0
    rows = read_csv(tmp_path / "o" / "ranking.csv")
    assert [r["gene_id"] for r in rows] == ["b", "c"]
    assert [r["rank"] for r in rows] == ["1", "2"]


def test_unmapped_seeds_exit_2(tmp_path):
    (tmp_path / "s.txt").write_text("XYZ\n")
    rc = main(["prioritize", "--network", str(MIN / "network.tsv"), "--seeds", str(tmp_path / "s.txt"),
               "--all-nonseeds", "--weights", "1,1,1,1", "--out", str(tmp_path)])
    assert rc == 2


def test_prioritize_without_weights_needs_positions(tmp_path):
    base = ["prioritize", *common(config=False), "--n-neighbors", "15", "--all-nonseeds"]
    assert main([*base, "--out", str(tmp_path)]) == 2
    rc = main([*base, "--positions", str(MIN / "positions.tsv"), "--out", str(tmp_path)])
    assert rc == 0
    w = read_csv(tmp_path / "step_weights.csv")
    assert sum(float(r["weight"]) for r in w) == pytest.approx(1.0, abs=1e-9)


def run_evaluate(out, *extra):
    return main(["evaluate", *common(), "--positions", str(MIN / "positions.tsv"), "--out", str(out), *extra])


def test_evaluate_outputs_and_determinism(tmp_path):
    assert run_evaluate(tmp_path / "a") == 0
    assert run_evaluate(tmp_path / "b", "--workers", "3") == 0
    for name in ("folds.csv", "roc.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert run_evaluate(tmp_path / "c") == 0
    assert (tmp_path / "a" / "summary.txt").read_bytes() == (tmp_path / "c" / "summary.txt").read_bytes()
    folds = read_csv(tmp_path / "a" / "folds.csv")
    assert len(folds) == 8
    assert all(1 <= float(f["rank"]) <= int(f["interval_size"]) for f in folds)
    summary = (tmp_path / "a" / "summary.txt").read_text()
    auc = float(summary.split("\n")[0].split("\t")[1])
    assert 0 <= auc <= 1
    assert (tmp_path / "a" / "roc.svg").read_text().startswith("<svg")
    assert json.loads((tmp_path / "a" / "manifest.json").read_text())["inputs"]["network"]["sha256"]


def write_world(d, net_lines, seeds, pos):
    d.mkdir()
    (d / "network.tsv").write_text("".join(net_lines))
    (d / "seeds.txt").write_text("".join(s + "\n" for s in seeds))
    (d / "positions.tsv").write_text("".join(f"{g}\t{c}\t{p}\n" for g, (c, p) in pos.items()))
    (d / "config.json").write_text(json.dumps({"n_neighbors": 9, "tolerance": 1e-10}))


def test_evaluate_perfect_pipeline(tmp_path):
    # every seed hangs off a hub of seeds; its interval is an unconnected chain
    seeds = [f"S{i}" for i in range(4)]
    lines = [f"S{i}\tS{j}\t1.0\n" for i in range(4) for j in range(i + 1, 4)]
    pos = {}
    for i in range(4):
        pos[f"S{i}"] = (f"c{i}", 0)
        chain = [f"S{i}"] + [f"G{i}_{k}" for k in range(9)]
        lines += [f"{a}\t{b}\t0.1\n" for a, b in zip(chain[1:-1], chain[2:])]
        lines.append(f"G{i}_8\tX\t0.1\n")
        for k in range(9):
            pos[f"G{i}_{k}"] = (f"c{i}", 100 * (k + 1))
    d = tmp_path / "w"
    write_world(d, lines, seeds, pos)
    rc = main(["evaluate", *common(d, evidence=False), "--positions", str(d / "positions.tsv"),
               "--weights", "1,1,0,0", "--out", str(tmp_path / "o")])
    assert rc == 0
    folds = read_csv(tmp_path / "o" / "folds.csv")
    assert [float(f["rank"]) for f in folds] == [1.0] * 4
    assert (tmp_path / "o" / "summary.txt").read_text().startswith("AUC\t1.0\n")


def test_evaluate_uninformative_is_middling(tmp_path):
    # a ring with all-equal confidences: targets are indistinguishable from decoys on NP/RWR
    n = 400
    ring = [f"g{i:03d}" for i in range(n)]
    lines = [f"{a}\t{b}\t1.0\n" for a, b in zip(ring, ring[1:] + ring[:1])]
    seeds = ring[::40]
    rng = np.random.default_rng(0)
    pos = {g: (f"c{rng.integers(2)}", int(p)) for g, p in zip(ring, rng.permutation(n) * 10)}
    d = tmp_path / "w"
    write_world(d, lines, seeds, pos)
    rc = main(["evaluate", *common(d, evidence=False), "--positions", str(d / "positions.tsv"),
               "--weights", "1,1,1,0", "--out", str(tmp_path / "o")])
    assert rc == 0
    auc = float((tmp_path / "o" / "summary.txt").read_text().split("\n")[0].split("\t")[1])
    assert 0.2 <= auc <= 0.8


def write_matrix(p, labels, m):
    rows = [",".join(["", *labels])] + [",".join([l, *(repr(float(x)) for x in r)]) for l, r in zip(labels, m)]
    p.write_text("\n".join(rows) + "\n")


def test_weights_ahp_vs_anp_without_feedback(tmp_path):
    pw = pairwise_from_ordering(CRIT)
    write_matrix(tmp_path / "pw.csv", CRIT, pw.matrix)
    sm = hierarchy_supermatrix(pw, 0.0)
    write_matrix(tmp_path / "sm.csv", sm.labels, sm.matrix)
    base = ["weights", *common(), "--positions", str(MIN / "positions.tsv")]
    assert main([*base, "--mode", "topsis-ahp", "--comparisons", str(tmp_path / "pw.csv"), "--out", str(tmp_path / "a")]) == 0
    assert main([*base, "--mode", "topsis-anp", "--comparisons", str(tmp_path / "sm.csv"), "--out", str(tmp_path / "b")]) == 0
    wa = read_csv(tmp_path / "a" / "step_weights.csv")
    wb = read_csv(tmp_path / "b" / "step_weights.csv")
    assert sum(float(r["weight"]) for r in wa) == pytest.approx(1.0, abs=1e-9)
    for x, y in zip(wa, wb):
        assert x["step"] == y["step"]
        assert float(x["weight"]) == pytest.approx(float(y["weight"]), abs=1e-6)
    dm = read_csv(tmp_path / "a" / "decision_matrix.csv")
    assert len(dm) == 4


def test_malformed_supermatrix_exits_2(tmp_path):
    (tmp_path / "bad.csv").write_text(",a,b\na,0.5,0.7\nb,0.6,0.2\n")
    rc = main(["weights", *common(), "--positions", str(MIN / "positions.tsv"), "--mode", "topsis-anp",
               "--comparisons", str(tmp_path / "bad.csv"), "--out", str(tmp_path / "o")])
    assert rc == 2


def test_weights_rejects_baseline_modes(tmp_path):
    rc = main(["weights", *common(), "--positions", str(MIN / "positions.tsv"), "--mode", "ndos",
               "--out", str(tmp_path)])
    assert rc == 2


def test_unknown_config_key(tmp_path):
    d = tmp_path / "m"
    shutil.copytree(MIN, d)
    (d / "config.json").write_text('{"alpah": 0.2}')
    rc = main(["prioritize", *common(d), "--all-nonseeds", "--weights", "1,1,1,1", "--out", str(tmp_path)])
    assert rc == 2


def test_flags_override_config(tmp_path):
    rc = main(["prioritize", *common(), "--candidates", str(MIN / "candidates.txt"), "--weights", "1,0,0,0",
               "--out", str(tmp_path)])
    assert rc == 0
    rows = read_csv(tmp_path / "ranking.csv")
    np_vals = [float(r["np"]) for r in rows]
    assert np_vals == sorted(np_vals, reverse=True)
