"""Command-line surface: simulate, equivalence, mandelbrot, modal, check.

Reproducibility contract: every command's output files are a deterministic
function of (config, seed), byte-identical across reruns and across thread
counts.  Each artifact carries a manifest (embedded for JSON outputs, a
sidecar ``<out>.manifest.json`` otherwise) recording the resolved config,
its SHA-256, the seed, and component versions.  Wall time goes to stderr
only, precisely so it cannot break byte-identity.

Exit codes: 0 success/pass, 1 semantic failure (a check or report did not
pass), 2 invalid input, 3 numerical error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .branching import branch_weight_equivalence
from .checks import run_checks
from .config import TOL, Tolerances
from .equivalence import equivalence_report
from .errors import NumericalError, ValidationError
from .jsonio import canonical_bytes
from .laws import (
    Theory,
    mentaculus,
    theory_from_json,
    wentaculus,
)
from .macrostates import EntropyConfig, entropy_trajectory, partition_by_dims, trajectory_csv
from .modal import (
    check_determinism,
    check_futuristic_determinism,
    check_historical_determinism,
    check_strong_determinism,
    load_model_set,
)
from .qcore import Hamiltonian, Subspace, random_hamiltonian, random_observable
from .seeding import split_seed
from .toyworlds import MandelbrotParams, classify_grid, render_pgm, verdict_csv

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ValidationError("config root must be a JSON object")
    return cfg


def _tolerances(cfg: dict) -> Tolerances:
    overrides = cfg.get("toleranceOverrides") or {}
    try:
        return TOL.replaced(**{str(k): float(v) for k, v in overrides.items()})
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad toleranceOverrides: {exc}") from exc


def _manifest(command: str, config: dict, seed: int, outputs: list[str]) -> dict:
    # thread count and absolute paths are deliberately excluded: outputs must
    # be byte-identical across --threads values and working directories
    return {
        "command": command,
        "config": config,
        "configSha256": hashlib.sha256(canonical_bytes(config)).hexdigest(),
        "seed": seed,
        "versions": {
            "detlab": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "outputs": outputs,
    }


def _dump_json(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(path: Path, data: str | bytes) -> None:
    if isinstance(data, str):
        path.write_text(data, encoding="utf-8", newline="")
    else:
        path.write_bytes(data)


def _write_sidecar(out: Path, manifest: dict) -> None:
    _write(Path(str(out) + ".manifest.json"), _dump_json(manifest))


def _require_out(args) -> Path:
    if args.out is None:
        raise ValidationError("an output path is required (--out or config 'out')")
    return Path(args.out)


def _resolve_theory(cfg: dict, seed: int, tol: Tolerances) -> tuple[Theory, dict, int]:
    """Build the theory from config; returns (theory, resolved spec, subspace dim)."""
    if "theoryFile" in cfg:
        path = cfg["theoryFile"]
        try:
            with open(path, "r", encoding="utf-8") as fh:
                obj = json.load(fh)
        except FileNotFoundError:
            raise ValidationError(f"theory file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ValidationError(f"theory file is not valid JSON: {exc}") from exc
        t = theory_from_json(obj, tol=tol)
        sub = getattr(t.boundary, "subspace", None)
        if sub is None:
            raise ValidationError("theory boundary law has no subspace; cannot simulate")
        return t, {"theoryFile": str(path)}, sub.dim

    spec = cfg.get("theory")
    if not isinstance(spec, dict):
        raise ValidationError("config needs 'theory' (generator spec) or 'theoryFile'")
    kind = spec.get("kind")
    dim = int(spec.get("dim", 16))
    k = int(spec.get("subspaceDim", 2))
    ham = spec.get("hamiltonian", "random")
    if isinstance(ham, str):
        ham = {"kind": ham}
    h_kind = ham.get("kind", "random")
    h_seed = int(ham.get("seed", split_seed(seed, 1)))
    if h_kind == "random":
        h = random_hamiltonian(dim, h_seed, tol=tol)
    elif h_kind == "zero":
        h = Hamiltonian(np.zeros((dim, dim)), tol=tol)
    else:
        raise ValidationError(f"unknown hamiltonian generator {h_kind!r}")
    s = Subspace.first_k(dim, k, tol=tol)
    if kind == "wentaculus":
        t = wentaculus(h, s)
    elif kind == "mentaculus":
        t = mentaculus(h, s)
    else:
        raise ValidationError(f"theory kind must be 'mentaculus' or 'wentaculus', got {kind!r}")
    resolved = {
        "kind": kind,
        "dim": dim,
        "subspaceDim": k,
        "hamiltonian": {"kind": h_kind, "seed": h_seed},
    }
    return t, resolved, k


def _resolve_times(cfg: dict) -> list[float]:
    spec = cfg.get("times", {"start": 0.0, "stop": 10.0, "count": 100})
    if isinstance(spec, list):
        return [float(x) for x in spec]
    try:
        start, stop, count = float(spec["start"]), float(spec["stop"]), int(spec["count"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad times spec: {exc}") from exc
    if count < 1:
        raise ValidationError("times count must be >= 1")
    return [float(x) for x in np.linspace(start, stop, count)]


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    tol = _tolerances(cfg)
    seed = int(args.seed if args.seed is not None else cfg.get("seed", 0))
    out = Path(args.out if args.out is not None else cfg.get("out", "trajectory.csv"))

    theory, theory_spec, k = _resolve_theory(cfg, seed, tol)
    times = _resolve_times(cfg)
    dim = theory.dynamics.hamiltonian.dim
    part_spec = cfg.get("partition", {"dims": [k, dim - k] if dim > k else [dim]})
    partition = partition_by_dims(
        dim, [int(d) for d in part_spec["dims"]], part_spec.get("labels"), tol=tol
    )
    ecfg_spec = cfg.get("entropy", {})
    ecfg = EntropyConfig(
        k_B=float(ecfg_spec.get("kB", 1.0)),
        dominance_threshold=float(ecfg_spec.get("dominanceThreshold", 0.99)),
    )
    sample_seed = args.sample_seed if args.sample_seed is not None else cfg.get("sampleSeed")
    if sample_seed is not None:
        sample_seed = int(sample_seed)

    points = entropy_trajectory(theory, partition, times, ecfg, seed=sample_seed, tol=tol)
    csv = trajectory_csv(points, partition.labels)
    resolved = {
        "theory": theory_spec,
        "times": times,
        "partitionDims": [c.dim for c in partition.cells],
        "entropy": {"kB": ecfg.k_B, "dominanceThreshold": ecfg.dominance_threshold},
        "sampleSeed": sample_seed,
        "seed": seed,
    }
    _write(out, csv)
    _write_sidecar(out, _manifest("simulate", resolved, seed, [out.name]))
    return EXIT_OK


def cmd_equivalence(args) -> int:
    cfg = _load_config(args.config)
    tol = _tolerances(cfg)
    seed = int(args.seed if args.seed is not None else cfg.get("seed", 0))
    out = Path(args.out if args.out is not None else cfg.get("out", "equivalence.json"))

    ambient = int(cfg.get("ambientDim", 8))
    k = int(cfg.get("k", 4))
    samples = int(cfg.get("samples", 20000))
    n_obs = int(cfg.get("observables", 10))
    multiplier = float(cfg.get("toleranceMultiplier", 5.0))
    s = Subspace.first_k(ambient, k, tol=tol)
    observables = [
        random_observable(ambient, split_seed(seed, 1000 + i), label=f"obs-{i}", tol=tol)
        for i in range(n_obs)
    ]
    report = equivalence_report(
        s, observables, samples, seed, multiplier, threads=args.threads, tol=tol
    )
    doc = report.to_json()
    if "branchCells" in cfg:
        pointer = partition_by_dims(ambient, [int(d) for d in cfg["branchCells"]], tol=tol)
        doc["branchWeights"] = branch_weight_equivalence(
            s, pointer, min(samples, 5000), split_seed(seed, 2), tol=tol
        ).to_json()
    resolved = {
        "ambientDim": ambient,
        "k": k,
        "samples": samples,
        "observables": n_obs,
        "toleranceMultiplier": multiplier,
        "branchCells": cfg.get("branchCells"),
        "seed": seed,
    }
    doc["manifest"] = _manifest("equivalence", resolved, seed, [out.name])
    _write(out, _dump_json(doc))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_mandelbrot(args) -> int:
    cfg = _load_config(args.config)
    seed = int(args.seed if args.seed is not None else cfg.get("seed", 0))
    out = Path(args.out if args.out is not None else cfg.get("out", "mandelbrot.pgm"))

    region = tuple(float(v) for v in cfg.get("region", (-2.0, 1.0, -1.25, 1.25)))
    if len(region) != 4:
        raise ValidationError("region must be [xmin, xmax, ymin, ymax]")
    width = int(cfg.get("width", 64))
    height = int(cfg.get("height", 64))
    params = MandelbrotParams(
        max_iter=int(cfg.get("maxIter", 256)),
        escape_radius=float(cfg.get("escapeRadius", 2.0)),
        variant=str(cfg.get("variant", "standard")),
    )
    status, iters = classify_grid(region, width, height, params, threads=args.threads)
    _write(out, render_pgm(status, iters, params))
    resolved = {
        "region": list(region),
        "width": width,
        "height": height,
        "maxIter": params.max_iter,
        "escapeRadius": params.escape_radius,
        "variant": params.variant,
        "seed": seed,
    }
    outputs = [out.name]
    csv_path = args.csv if args.csv is not None else cfg.get("csvOut")
    if csv_path:
        _write(Path(csv_path), verdict_csv(region, width, height, status, iters))
        outputs.append(Path(csv_path).name)
    _write_sidecar(out, _manifest("mandelbrot", resolved, seed, outputs))
    return EXIT_OK


def _verdict_json(v) -> dict:
    return {"holds": v.holds, "counterexample": list(v.counterexample) if v.counterexample else None}


def cmd_modal(args) -> int:
    cfg = _load_config(args.config)
    worlds_path = args.worlds if args.worlds is not None else cfg.get("worlds")
    if worlds_path is None:
        raise ValidationError("a worlds JSON file is required (positional or config 'worlds')")
    try:
        with open(worlds_path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"worlds file not found: {worlds_path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"worlds file is not valid JSON: {exc}") from exc
    m = load_model_set(obj)
    doc = {
        "worldCount": len(m),
        "determinism": _verdict_json(check_determinism(m)),
        "futuristicDeterminism": _verdict_json(check_futuristic_determinism(m)),
        "historicalDeterminism": _verdict_json(check_historical_determinism(m)),
        "strongDeterminism": {"holds": check_strong_determinism(m)},
    }
    seed = int(args.seed if args.seed is not None else 0)
    doc["manifest"] = _manifest(
        "modal", {"worlds": Path(worlds_path).name, "seed": seed}, seed,
        [Path(args.out).name] if args.out else [],
    )
    text = _dump_json(doc)
    sys.stdout.write(text)
    if args.out:
        _write(Path(args.out), text)
    return EXIT_OK


def cmd_check(args) -> int:
    seed = int(args.seed if args.seed is not None else 0)
    results = run_checks(seed, threads=args.threads, only=args.only or None)
    failed = [name for name, (ok, _) in results.items() if not ok]
    for name, (ok, detail) in results.items():
        print(f"{'ok  ' if ok else 'FAIL'} {name}: {detail}")
    if args.out:
        doc = {
            "results": {n: {"ok": ok, "detail": d} for n, (ok, d) in results.items()},
            "failed": failed,
            "manifest": _manifest("check", {"only": args.only or [], "seed": seed}, seed,
                                  [Path(args.out).name]),
        }
        _write(Path(args.out), _dump_json(doc))
    if failed:
        print(f"failing invariants: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detlab",
        description="Determinism laboratory: simulate theories, certify equivalence, "
        "render the Mandelbrot world, check model sets, run invariants.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file (flags override its keys)")
        p.add_argument("--seed", type=int, help="global 64-bit seed")
        p.add_argument("--out", help="output path")
        p.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")

    p_sim = sub.add_parser("simulate", help="entropy trajectory of a theory to CSV")
    common(p_sim)
    p_sim.add_argument("--sample-seed", type=int, dest="sample_seed",
                       help="seed selecting the contingent initial wave function "
                            "(required for mentaculus-style theories)")
    p_sim.set_defaults(fn=cmd_simulate)

    p_eq = sub.add_parser("equivalence", help="expectation-level equivalence report to JSON")
    common(p_eq)
    p_eq.set_defaults(fn=cmd_equivalence)

    p_mb = sub.add_parser("mandelbrot", help="render the Mandelbrot world to PGM")
    common(p_mb)
    p_mb.add_argument("--csv", help="also write raw verdicts CSV to this path")
    p_mb.set_defaults(fn=cmd_mandelbrot)

    p_mo = sub.add_parser("modal", help="determinism verdicts for a worlds JSON file")
    p_mo.add_argument("worlds", nargs="?", help="model-set JSON file (or config key 'worlds')")
    common(p_mo)
    p_mo.set_defaults(fn=cmd_modal)

    p_ck = sub.add_parser("check", help="run the reduced-scale invariant suite")
    common(p_ck)
    p_ck.add_argument("--only", action="append", help="run only this check (repeatable)")
    p_ck.set_defaults(fn=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        code = args.fn(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(f"[{args.command}] wall time {time.perf_counter() - started:.3f}s", file=sys.stderr)
    return code


def entry() -> None:  # console_scripts hook
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
