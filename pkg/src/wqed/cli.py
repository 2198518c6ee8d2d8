"""Command-line scenario runner.

    wqed run <scenario.json | built-in name> [--out-dir DIR] [--threads N] [--seed S]
    wqed sweep <scenario.json | name> --axis <gamma|epsilon|delta|d|N> \
               --values v1,v2,... [--out-dir DIR] [--threads N]
    wqed list-scenarios

Each run writes one CSV per requested output kind plus a JSON manifest
(input hash, package and library versions, wall time, per-point failures).
CSV bytes are deterministic for identical inputs: floats are written with
17 significant digits and rows are assembled in a fixed order regardless
of worker parallelism.  The environment variable WQED_OUT overrides the
output directory; --seed is accepted and recorded for forward
compatibility (every current algorithm is deterministic).

Exit codes: 0 success, 1 configuration error, 2 numerical error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .model import ConfigError
from .spectral import NearDefectiveError
from .lindblad import DegenerateSteadyStateError, IntegrationError
from .correlations import CorrelationUnderflowError, SingularResolventError
from .scenarios import (CSV_COLUMNS, built_in_scenarios, evaluate_variant,
                        g2_zero_columns, variant_tag)

NUMERICAL_ERRORS = (NearDefectiveError, DegenerateSteadyStateError,
                    IntegrationError, CorrelationUnderflowError,
                    SingularResolventError, np.linalg.LinAlgError)


def _format_value(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.16e}"


def write_csv(path: Path, columns, rows) -> None:
    lines = [",".join(columns)]
    lines.extend(",".join(_format_value(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def load_scenario(ref: str) -> dict:
    builtins = built_in_scenarios()
    if ref in builtins:
        return builtins[ref]
    path = Path(ref)
    if not path.exists():
        raise ConfigError([f"scenario {ref!r} is neither a built-in name nor a file"])
    try:
        scn = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise ConfigError([f"scenario file {ref} is not valid JSON: {err}"]) from err
    if not isinstance(scn, dict):
        raise ConfigError(["scenario file must contain a JSON object"])
    scn.setdefault("name", path.stem)
    _check_schema(scn)
    return scn


def _check_schema(scn: dict) -> None:
    problems = []
    if "system" not in scn:
        problems.append("scenario must define a 'system'")
    outputs = scn.get("outputs", [])
    if not outputs:
        problems.append("scenario must request at least one output kind")
    from .scenarios import OUTPUT_KINDS
    for k in outputs:
        if k not in OUTPUT_KINDS:
            problems.append(f"unknown output kind {k!r}")
    for key in ("epsilon", "delta"):
        grid = scn.get("drive", {}).get(key)
        if isinstance(grid, list) and len(grid) == 0:
            problems.append(f"drive grid {key!r} must be non-empty")
    if isinstance(scn.get("variants"), list) and len(scn["variants"]) == 0:
        problems.append("variants list must be non-empty when given")
    if problems:
        raise ConfigError(problems)


def scenario_hash(scn: dict) -> str:
    return hashlib.sha256(
        json.dumps(scn, sort_keys=True, default=str).encode()).hexdigest()


def _worker(args: tuple[str, str]) -> tuple[str, dict | None, str]:
    """Evaluate one variant in a worker process.

    Numerical failures become per-point records so a sweep can continue;
    configuration errors propagate and abort the whole run.
    """
    scn_json, overrides_json = args
    scn = json.loads(scn_json)
    overrides = json.loads(overrides_json)
    tag = variant_tag(overrides)
    try:
        return tag, evaluate_variant(scn, overrides), ""
    except ConfigError:
        raise
    except (*NUMERICAL_ERRORS, ValueError) as err:
        return tag, None, f"{type(err).__name__}: {err}"


def run_scenario(scn: dict, out_dir: Path, threads: int = 1,
                 seed: int | None = None) -> dict:
    """Evaluate all variants, write outputs, and return the manifest."""
    t_start = time.monotonic()
    out_dir.mkdir(parents=True, exist_ok=True)
    variants = scn.get("variants") or [{}]
    jobs = [(json.dumps(scn, sort_keys=True), json.dumps(v, sort_keys=True))
            for v in variants]

    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_worker, jobs))
    else:
        results = [_worker(j) for j in jobs]

    merged: dict[str, list] = {}
    failures = []
    for tag, rows, error in results:
        if error:
            failures.append({"variant": tag, "error": error})
            continue
        for kind, block in rows.items():
            merged.setdefault(kind, []).extend(block)

    name = scn.get("name", "scenario")
    outputs = {}
    for kind, rows in merged.items():
        if kind == "oracle":
            path = out_dir / f"{name}_oracle.jsonl"
            path.write_text("\n".join(rows) + "\n")
        else:
            if kind == "g2_zero":
                columns = g2_zero_columns(scn.get("methods", ["regression"]))
            else:
                columns = CSV_COLUMNS[kind]
            path = out_dir / f"{name}_{kind}.csv"
            write_csv(path, columns, rows)
        outputs[kind] = path.name

    manifest = {
        "scenario": name,
        "input_hash": scenario_hash(scn),
        "wqed_version": __version__,
        "numpy_version": np.__version__,
        "scipy_version": scipy.__version__,
        "threads": threads,
        "seed": seed,
        "wall_time_s": time.monotonic() - t_start,
        "outputs": outputs,
        "failures": failures,
    }
    (out_dir / f"{name}_manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def _resolve_out_dir(args) -> Path:
    if args.out_dir is not None:
        return Path(args.out_dir)
    env = os.environ.get("WQED_OUT")
    return Path(env) if env else Path.cwd()


def _parse_values(axis: str, text: str) -> list:
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise ConfigError(["--values must contain at least one value"])
    if axis == "N":
        return [int(t) for t in items]
    return [float(t) for t in items]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="wqed", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario (built-in name or JSON file)")
    p_run.add_argument("scenario")

    p_sweep = sub.add_parser("sweep", help="run a scenario once per axis value")
    p_sweep.add_argument("scenario")
    p_sweep.add_argument("--axis", required=True,
                         choices=["gamma", "epsilon", "delta", "d", "N"])
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated list of axis values")

    sub.add_parser("list-scenarios", help="list built-in scenarios")

    for p in (p_run, p_sweep):
        p.add_argument("--out-dir", default=None,
                       help="output directory (default: $WQED_OUT or the cwd)")
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                       help="worker pool size for variant/sweep points")
        p.add_argument("--seed", type=int, default=None,
                       help="recorded in the manifest; reserved for future use")

    args = parser.parse_args(argv)

    if args.command == "list-scenarios":
        for name, scn in sorted(built_in_scenarios().items()):
            print(f"{name:10s} {scn.get('description', '')}")
        return 0

    try:
        scn = load_scenario(args.scenario)
        if args.command == "sweep":
            values = _parse_values(args.axis, args.values)
            base_variants = scn.get("variants") or [{}]
            scn = dict(scn)
            scn["variants"] = [dict(v, **{args.axis: val})
                               for val in values for v in base_variants]
            scn["name"] = f"{scn.get('name', 'scenario')}_sweep_{args.axis}"
        manifest = run_scenario(scn, _resolve_out_dir(args),
                                threads=max(1, args.threads), seed=args.seed)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 1
    except NUMERICAL_ERRORS as err:
        print(f"numerical error in scenario {args.scenario!r}: "
              f"{type(err).__name__}: {err}", file=sys.stderr)
        return 2

    n_fail = len(manifest["failures"])
    if n_fail:
        print(f"completed with {n_fail} failed point(s); see manifest", file=sys.stderr)
        if n_fail == len(scn.get("variants") or [{}]):
            return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
