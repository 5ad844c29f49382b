"""Command-line interface: ``seedrank {prioritize,evaluate,weights}``."""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import hashlib
import io
import json
import logging
import os
import sys
import tempfile
import warnings
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .aggregation import STEPS, FusionConfig
from .diffusion import ConvergenceError, DiffusionConfig
from .evaluation import CvReport, FoldError, read_positions
from .evidence import read_disease_genes, read_similarity
from .graph import NetworkFormatError, NoSeedsMappedError, map_seeds, prune_isolated, read_id_list, read_network
from .madm import MadmInputError, WeightVector, decision_matrix_rows, read_comparisons
from .pipeline import (
    EvidenceInputs,
    MadmMode,
    PipelineConfig,
    PipelineError,
    StepScorer,
    derive_step_weights,
    evaluate,
    prioritize,
)
from .shortest_path import DistanceTransform, PathWeight

log = logging.getLogger("seedrank")

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT = 0, 1, 2

CONFIG_KEYS = {
    "alpha": float,
    "tolerance": float,
    "max_iterations": int,
    "np_alpha": float,
    "transform": str,
    "path_weight": str,
    "evidence_k": int,
    "mode": str,
    "weights": str,
    "normalization": str,
    "gamma": float,
    "saaty_step": int,
    "feedback": float,
    "topsis_normalization": str,
    "n_neighbors": int,
    "workers": int,
    "split_weights": bool,
    "seed": int,
    "comparisons": str,
}

DEFAULTS: dict[str, Any] = {
    "alpha": 0.15,
    "tolerance": 1e-6,
    "max_iterations": 1000,
    "np_alpha": None,
    "transform": "INVERSE",
    "path_weight": "CONFIDENCE",
    "evidence_k": 10,
    "mode": None,
    "weights": None,
    "normalization": "MINMAX",
    "gamma": 0.95,
    "saaty_step": 2,
    "feedback": 0.5,
    "topsis_normalization": "vector",
    "n_neighbors": 99,
    "workers": 1,
    "split_weights": False,
    "seed": 0,
    "comparisons": None,
}


class InputError(Exception):
    pass


# --- output helpers -------------------------------------------------------


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def _fmt(x: Any) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def roc_svg(points: Sequence[tuple[int, float, float]], auc: float, size: int = 400) -> str:
    """Sensitivity against 1 - specificity as a bare SVG polyline with axes."""
    m, inner = 50, size - 70
    pts = " ".join(f"{m + fpr * inner:.3f},{m + inner - tpr * inner:.3f}" for _, fpr, tpr in points)
    x0, y0, x1, y1 = m, m + inner, m + inner, m
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" font-family="sans-serif" font-size="12">\n'
        f'<rect x="{x0}" y="{y1}" width="{inner}" height="{inner}" fill="none" stroke="black"/>\n'
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="#aaa" stroke-dasharray="4 4"/>\n'
        f'<polyline points="{pts}" fill="none" stroke="#1f77b4" stroke-width="2"/>\n'
        f'<text x="{m + inner / 2}" y="{size - 12}" text-anchor="middle">1 - specificity</text>\n'
        f'<text x="14" y="{m + inner / 2}" text-anchor="middle" transform="rotate(-90 14 {m + inner / 2})">sensitivity</text>\n'
        f'<text x="{x0}" y="{y0 + 16}" text-anchor="middle">0</text>\n'
        f'<text x="{x1}" y="{y0 + 16}" text-anchor="middle">1</text>\n'
        f'<text x="{x0 - 8}" y="{y1 + 4}" text-anchor="end">1</text>\n'
        f'<text x="{m + inner / 2}" y="{m - 12}" text-anchor="middle">ROC (AUC = {auc:.4f})</text>\n'
        "</svg>\n"
    )


def _digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def build_manifest(inputs: dict[str, str | None], settings: dict[str, Any]) -> dict[str, Any]:
    return {
        "tool": "seedrank",
        "version": __version__,
        "inputs": {k: {"path": v, "sha256": _digest(v)} for k, v in sorted(inputs.items()) if v},
        "config": settings,
    }


def _write_manifest(out: Path, manifest: dict[str, Any]) -> None:
    stamped = dict(manifest, timestamp=_dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"))
    _atomic_write(out / "manifest.json", json.dumps(stamped, indent=2, sort_keys=True) + "\n")


# --- argument handling ----------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--network", required=True, help="edge file: id_a<TAB>id_b<TAB>weight")
    p.add_argument("--seeds", required=True, help="seed ids, one per line")
    p.add_argument("--similarity", help="disease similarity file")
    p.add_argument("--disease-genes", help="disease<TAB>gene file")
    p.add_argument("--disease", help="query disease for the evidence scorer")
    p.add_argument("--config", help="JSON file of flat key/value settings")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--alpha", type=float)
    p.add_argument("--np-alpha", type=float, help="restart probability for NP (default: --alpha)")
    p.add_argument("--tolerance", type=float)
    p.add_argument("--max-iterations", type=int)
    p.add_argument("--transform", choices=[t.value for t in DistanceTransform])
    p.add_argument("--path-weight", choices=[t.value for t in PathWeight], help="what SP accumulates along a path")
    p.add_argument("--evidence-k", type=int)
    p.add_argument("--mode", choices=[m.value for m in MadmMode])
    p.add_argument("--weights", help="fixed step weights NP,RWR,SP,EVIDENCE")
    p.add_argument("--normalization", choices=["MINMAX", "NONE"])
    p.add_argument("--gamma", type=float, help="WDRS discount")
    p.add_argument("--saaty-step", type=int)
    p.add_argument("--feedback", type=float, help="inter-criterion feedback of the default ANP supermatrix")
    p.add_argument("--topsis-normalization", choices=["vector", "minmax"])
    p.add_argument("--comparisons", help="CSV pairwise matrix or supermatrix over the criteria")
    p.add_argument("--n-neighbors", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="seedrank", description="Seed-based network prioritization.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prioritize", help="rank candidates against the seeds")
    _add_common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--candidates", help="candidate ids, one per line")
    g.add_argument("--all-nonseeds", action="store_true")
    p.add_argument("--positions", help="gene<TAB>chromosome<TAB>start; used to derive weights")

    for name, text in (("evaluate", "leave-one-out cross-validation"), ("weights", "derive step weights")):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        p.add_argument("--positions", required=True, help="gene<TAB>chromosome<TAB>start")
        p.add_argument("--split-weights", action="store_true", default=None)
        p.add_argument("--seed", type=int, help="RNG seed for --split-weights")
    return ap


def resolve_settings(args: argparse.Namespace) -> dict[str, Any]:
    settings = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise InputError(f"cannot read config {args.config}: {e}") from None
        if not isinstance(cfg, dict):
            raise InputError("config must be a JSON object")
        for k, v in cfg.items():
            if k not in CONFIG_KEYS:
                raise InputError(f"unknown config key {k!r}")
            if k == "weights" and isinstance(v, list):
                v = ",".join(str(x) for x in v)
            settings[k] = v
    for k in CONFIG_KEYS:
        v = getattr(args, k, None)
        if v is not None:
            settings[k] = v
    return settings


def _parse_weights(text: str) -> WeightVector:
    try:
        vals = [float(x) for x in str(text).split(",")]
    except ValueError:
        raise InputError(f"bad --weights {text!r}") from None
    if len(vals) != len(STEPS) or any(v < 0 for v in vals) or sum(vals) <= 0:
        raise InputError(f"--weights needs {len(STEPS)} non-negative values (NP,RWR,SP,EVIDENCE)")
    return WeightVector.normalized(STEPS, vals)


def pipeline_config(s: dict[str, Any]) -> PipelineConfig:
    try:
        diff = DiffusionConfig(float(s["alpha"]), float(s["tolerance"]), int(s["max_iterations"]))
        np_diff = None
        if s["np_alpha"] is not None:
            np_diff = DiffusionConfig(float(s["np_alpha"]), float(s["tolerance"]), int(s["max_iterations"]))
        weights = _parse_weights(s["weights"]) if s["weights"] is not None else None
        if s["mode"] is None:
            mode = MadmMode.FIXED if weights is not None else MadmMode.TOPSIS_ANP
        else:
            mode = MadmMode(s["mode"])
        fusion = FusionConfig(weights, s["normalization"]) if weights is not None else None
        comparisons = read_comparisons(s["comparisons"]) if s["comparisons"] else None
        return PipelineConfig(
            diffusion=diff,
            np_diffusion=np_diff,
            transform=DistanceTransform(s["transform"]),
            path_weight=PathWeight(s["path_weight"]),
            evidence_k=int(s["evidence_k"]),
            fusion=fusion,
            normalization=s["normalization"],
            mode=mode,
            comparisons=comparisons,
            saaty_step=int(s["saaty_step"]),
            feedback=float(s["feedback"]),
            gamma=float(s["gamma"]),
            topsis_normalization=s["topsis_normalization"],
            n_neighbors=int(s["n_neighbors"]),
            workers=int(s["workers"]),
        )
    except (ValueError, TypeError) as e:
        raise InputError(str(e)) from None


def _load_inputs(args: argparse.Namespace):
    network = read_network(args.network)
    network, removed = prune_isolated(network)
    if removed:
        log.info("pruned %d isolated node(s)", removed)
    seeds = map_seeds(network, read_id_list(args.seeds))
    if seeds.unmapped_ids:
        log.warning("%d seed id(s) not in the network: %s", len(seeds.unmapped_ids), ", ".join(seeds.unmapped_ids[:10]))
    ev_args = (args.similarity, args.disease_genes, args.disease)
    if any(ev_args) and not all(ev_args):
        raise InputError("--similarity, --disease-genes and --disease must be given together")
    evidence = EvidenceInputs()
    if all(ev_args):
        evidence = EvidenceInputs(read_similarity(args.similarity), read_disease_genes(args.disease_genes), args.disease)
    return network, seeds, evidence


def _inputs(args: argparse.Namespace, settings: dict[str, Any]) -> dict[str, str | None]:
    return {
        "network": args.network,
        "seeds": args.seeds,
        "similarity": args.similarity,
        "disease_genes": args.disease_genes,
        "positions": getattr(args, "positions", None),
        "candidates": getattr(args, "candidates", None),
        "comparisons": settings.get("comparisons"),
        "config": args.config,
    }


def _weights_rows(w: WeightVector) -> list[list[Any]]:
    return [["step", "weight"]] + [[k, v] for k, v in w.as_dict().items()]


# --- commands -------------------------------------------------------------


def cmd_prioritize(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    cfg = pipeline_config(settings)
    network, seeds, evidence = _load_inputs(args)
    seed_set = set(seeds.indices)
    if args.all_nonseeds:
        cands = [i for i in range(network.node_count) if i not in seed_set]
    else:
        ids = read_id_list(args.candidates)
        missing = [g for g in ids if g not in network.index]
        if missing:
            log.warning("%d candidate id(s) not in the network are skipped", len(missing))
        cands = sorted({network.index[g] for g in ids if g in network.index} - seed_set)
    if not cands:
        raise InputError("no rankable candidates")

    scorer = StepScorer(network, seeds, evidence, cfg)
    weights = cfg.fusion.step_weights if cfg.fusion else None
    if weights is None and cfg.mode in (MadmMode.TOPSIS_ANP, MadmMode.TOPSIS_AHP):
        if not args.positions:
            raise InputError("deriving step weights needs --positions (or give --weights)")
        weights = derive_step_weights(
            network, seeds, read_positions(args.positions), evidence, cfg, scorer=scorer
        ).weights
    ranked = prioritize(network, seeds, cands, evidence, cfg, weights=weights, scorer=scorer)

    out = Path(args.out)
    rows: list[list[Any]] = [["gene_id", "np", "rwr", "sp", "evidence", "fused", "rank"]]
    for rank, r in enumerate(ranked, start=1):
        rows.append([r.gene_id, r.steps["NP"], r.steps["RWR"], r.steps["SP"], r.steps["EVIDENCE"], r.fused, rank])
    _atomic_write(out / "ranking.csv", _csv_text(rows))
    if weights is not None:
        _atomic_write(out / "step_weights.csv", _csv_text(_weights_rows(weights)))
    _write_manifest(out, build_manifest(_inputs(args, settings), settings))
    return EXIT_OK


def _summary_text(report: CvReport, manifest: dict[str, Any], weights: WeightVector | None) -> str:
    lines = [
        f"AUC\t{report.auc!r}",
        f"MRR\t{report.mrr!r}",
        f"AR\t{report.ar!r}",
        f"top1\t{report.top1!r}",
        f"top5\t{report.top5!r}",
        f"folds\t{len(report.fold_ranks)}",
    ]
    if weights is not None:
        lines += [f"weight_{k}\t{v!r}" for k, v in weights.as_dict().items()]
    lines.append("# manifest " + json.dumps(manifest, sort_keys=True))
    return "\n".join(lines) + "\n"


def cmd_evaluate(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    cfg = pipeline_config(settings)
    network, seeds, evidence = _load_inputs(args)
    positions = read_positions(args.positions)
    result = evaluate(
        network, seeds, positions, evidence, cfg,
        split_weights=bool(settings["split_weights"]), rng_seed=int(settings["seed"]),
    )
    rep = result.report
    out = Path(args.out)
    manifest = build_manifest(_inputs(args, settings), settings)
    _atomic_write(out / "folds.csv", _csv_text([["target_id", "rank", "interval_size"], *rep.fold_ranks]))
    _atomic_write(
        out / "roc.csv", _csv_text([["threshold_k", "one_minus_specificity", "sensitivity"], *rep.roc_points])
    )
    _atomic_write(out / "summary.txt", _summary_text(rep, manifest, result.weights))
    _atomic_write(out / "roc.svg", roc_svg(rep.roc_points, rep.auc))
    if result.weighting is not None:
        _atomic_write(out / "decision_matrix.csv", _csv_text(decision_matrix_rows(result.weighting.matrix)))
        _atomic_write(out / "step_weights.csv", _csv_text(_weights_rows(result.weighting.weights)))
    _write_manifest(out, manifest)
    return EXIT_OK


def cmd_weights(args: argparse.Namespace) -> int:
    settings = resolve_settings(args)
    cfg = pipeline_config(settings)
    if cfg.mode not in (MadmMode.TOPSIS_ANP, MadmMode.TOPSIS_AHP):
        raise InputError("weights needs --mode topsis-anp or topsis-ahp")
    network, seeds, evidence = _load_inputs(args)
    positions = read_positions(args.positions)
    targets = None
    if settings["split_weights"]:
        idx = np.random.default_rng(int(settings["seed"])).permutation(seeds.as_array())
        targets = idx[: idx.size // 2]
    res = derive_step_weights(network, seeds, positions, evidence, cfg, targets)
    out = Path(args.out)
    _atomic_write(out / "decision_matrix.csv", _csv_text(decision_matrix_rows(res.matrix)))
    _atomic_write(out / "step_weights.csv", _csv_text(_weights_rows(res.weights)))
    _write_manifest(out, build_manifest(_inputs(args, settings), settings))
    return EXIT_OK


COMMANDS = {"prioritize": cmd_prioritize, "evaluate": cmd_evaluate, "weights": cmd_weights}

INPUT_ERRORS = (
    InputError,
    NetworkFormatError,
    NoSeedsMappedError,
    MadmInputError,
    PipelineError,
    OSError,
    KeyError,
    ValueError,
)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code not in (0, None) else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING, format="seedrank: %(levelname)s: %(message)s"
    )
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[args.command](args)
    except FoldError as e:
        cause = e.__cause__
        print(f"seedrank: error: {e}", file=sys.stderr)
        return EXIT_INPUT if isinstance(cause, INPUT_ERRORS) else EXIT_INTERNAL
    except INPUT_ERRORS as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"seedrank: error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as e:
        print(f"seedrank: error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as e:  # noqa: BLE001
        print(f"seedrank: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
