"""Command-line entry point: ``platjones {jones,sample,experiment}``.

Single results are printed as JSON; sweeps are written as CSV. Errors go to
stderr as a JSON object ``{"error": <category>, "message": ...}`` with a
category-specific exit code.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .braid import BraidError, design_length, format_braid_word, parse_braid_word, plat_components
from .experiments import (
    ConfigError,
    ExperimentConfig,
    anticoncentration_fraction,
    braid_amplitudes,
    estimate_design_moments,
    output_distribution,
    paley_zygmund_check,
    sample_braids,
)
from .jones import cross_check, is_universal_root, jones_via_path_model, plat_amplitude
from .moments import calibrate_lambda, exact_moment_gap
from .pathmodel import DimensionError, cap_index
from .skein import OracleBudgetError, evaluate_at, jones_oracle

EXIT_CODES = {
    "parse_error": 2,
    "budget_error": 3,
    "config_error": 4,
    "contract_violation": 5,
    "io_error": 6,
    "dimension_error": 7,
}


class ContractViolation(RuntimeError):
    pass


def _complex(z: complex) -> list[float]:
    return [z.real, z.imag]


def _atomic_write(path: Path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv_text(header, rows, manifest: str | None) -> str:
    buf = io.StringIO()
    if manifest:
        buf.write(f"# manifest: {manifest}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


class Manifest:
    """Run record written next to the result files (timestamps live only here)."""

    def __init__(self, command: str, params: dict, seed: int | None):
        self.command = command
        self.params = params
        self.seed = seed
        self.start = datetime.now(timezone.utc).isoformat()
        self.outputs: list[str] = []

    def write(self, path: Path):
        record = {
            "command": self.command,
            "parameters": self.params,
            "seed": self.seed,
            "version": __version__,
            "started": self.start,
            "finished": datetime.now(timezone.utc).isoformat(),
            "outputs": self.outputs,
        }
        _atomic_write(path, _dumps(record))


def _params(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func",)}


# ---------------------------------------------------------------------------
# jones


def cmd_jones(args) -> dict:
    b = parse_braid_word(args.braid, args.strands)
    diagram = plat_components(b)
    report = {
        "braid": format_braid_word(b),
        "strands": b.strands,
        "k": args.k,
        "method": args.method,
        "writhe": diagram.writhe,
        "components": diagram.n_components,
        "universal_root": is_universal_root(args.k),
    }
    if not is_universal_root(args.k):
        print(
            f"note: k={args.k} is not a universal root (need k=5 or k>=7); evaluating anyway",
            file=sys.stderr,
        )
    if args.method in ("oracle", "both"):
        poly = jones_oracle(b, args.budget)
        report["oracle"] = {
            "polynomial_A": {str(e): c for e, c in poly},
            "polynomial_t": poly.format("t", -4),
            "value": _complex(evaluate_at(poly, args.k)),
        }
    if args.method in ("path", "both"):
        report["path_model"] = {
            "amplitude": _complex(plat_amplitude(b, args.k)),
            "value": _complex(jones_via_path_model(b, args.k)),
        }
    if args.method == "both":
        comp = cross_check(b, args.k, budget=args.budget)
        report["comparison"] = comp.to_dict()
        if not comp.ok:
            _emit(report, args)
            raise ContractViolation(
                f"path model and oracle disagree: rel_error {comp.rel_error:.3g} > {comp.tolerance:g}"
            )
    return report


# ---------------------------------------------------------------------------
# sample


def cmd_sample(args) -> dict:
    if args.length == "auto":
        length = design_length(args.strands // 2, args.epsilon, 2, args.lam)
    else:
        try:
            length = int(args.length)
        except ValueError:
            raise BraidError(f"--length must be an integer or 'auto', got {args.length!r}") from None
        if length < 0:
            raise ConfigError("--length must be non-negative")
    if args.count < 0:
        raise ConfigError("--count must be non-negative")
    parse_braid_word("", args.strands)  # validates the strand count
    if args.probs and args.k is None:
        raise ConfigError("--probs needs --k")
    rows = _sample_rows(args.strands, length, args.count, args.seed, args.k if args.probs else None, args.workers)
    out = Path(args.out)
    manifest_path = out.with_name(out.name + ".manifest.json")
    manifest = Manifest("sample", _params(args) | {"resolved_length": length}, args.seed)
    _atomic_write(out, "".join(r[1] + "\n" for r in rows))
    manifest.outputs.append(str(out))
    report = {"words": str(out), "count": args.count, "length": length, "manifest": str(manifest_path)}
    if args.probs:
        text = _csv_text(
            ["index", "braid", "cap_probability", "max_probability"], rows, manifest_path.name
        )
        _atomic_write(Path(args.probs), text)
        manifest.outputs.append(str(args.probs))
        report["probs"] = str(args.probs)
    manifest.write(manifest_path)
    return report


def _sample_chunk(job):
    strands, length, seed, start, count, k = job
    rows = []
    for i, b in enumerate(sample_braids(strands, length, count, seed, start), start):
        if k is None:
            rows.append([i, format_braid_word(b)])
            continue
        dist = output_distribution(b, k)
        p = dist.probabilities
        rows.append([i, format_braid_word(b), float(p[cap_index(dist.basis)]), float(p.max())])
    return rows


def _sample_rows(strands, length, count, seed, k, workers):
    """Words (and cap probabilities when k is given), split over contiguous index chunks."""
    workers = max(1, min(workers, count))
    bounds = np.linspace(0, count, workers + 1).astype(int)
    jobs = [(strands, length, seed, int(lo), int(hi - lo), k) for lo, hi in zip(bounds[:-1], bounds[1:])]
    if workers == 1:
        parts = [_sample_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_sample_chunk, jobs))
    return [row for part in parts for row in part]


# ---------------------------------------------------------------------------
# experiment


def _config(args, gamma=None) -> tuple[ExperimentConfig, dict]:
    extra = {}
    length = args.length
    lam = args.lam
    if args.calibrate:
        cal = calibrate_lambda(args.n, args.k, args.epsilon)
        lam = cal.lam
        extra["calibration"] = cal.to_dict()
    cfg = ExperimentConfig(
        n=args.n, k=args.k, t=args.t, epsilon=args.epsilon, gamma=gamma, lam=lam,
        samples=args.samples, seed=args.seed, length=length, beta=args.beta,
    )
    return cfg, extra


def cmd_experiment(args) -> dict:
    out_dir = Path(args.out) if args.out else None
    manifest = Manifest(f"experiment {args.kind}", _params(args), getattr(args, "seed", None))
    result: dict = {"kind": args.kind}
    table = None

    if args.kind == "gap":
        if not 0 < args.epsilon < 1:
            raise ConfigError(f"epsilon must satisfy 0 < epsilon < 1, got {args.epsilon}")
        L = args.L
        if L < 0:
            raise ConfigError("--L must be non-negative")
        gap = exact_moment_gap(args.n, args.k, 2, L)
        result.update(n=args.n, k=args.k, t=2, L=L, gap=gap, contraction=exact_moment_gap(args.n, args.k, 2, 1))
        if args.calibrate:
            result["calibration"] = calibrate_lambda(args.n, args.k, args.epsilon).to_dict()
        l_max = max(L, args.L_max)
        table = (["L", "gap"], [[j, exact_moment_gap(args.n, args.k, 2, j)] for j in range(l_max + 1)])

    elif args.kind == "moments":
        cfg, extra = _config(args)
        result.update(extra)
        reports = estimate_design_moments(cfg, workers=args.workers)
        result["config"] = cfg.to_dict()
        result["length"] = cfg.resolved_length()
        result["moments"] = [r.to_dict() | {"within_band": r.within_band(cfg.epsilon)} for r in reports]
        table = (
            ["k_moment", "empirical", "haar_value", "ratio", "stderr"],
            [[r.k_moment, r.empirical, r.haar_value, r.ratio, r.stderr] for r in reports],
        )

    elif args.kind == "anticoncentration":
        gammas = args.gamma or [0.5]
        cfg, extra = _config(args, gamma=gammas[0])
        result.update(extra)
        rep = anticoncentration_fraction(cfg, gammas, workers=args.workers)
        result.update(rep.to_dict())
        result["bound"] = rep.rows[0].bound_config_epsilon
        table = (
            ["gamma", "bound", "empirical", "stderr", "bound_config_epsilon"],
            [[r.gamma, r.bound, r.empirical, r.stderr, r.bound_config_epsilon] for r in rep.rows],
        )
        if not rep.ok:
            result["contract"] = "empirical fraction below bound - 3 stderr"

    elif args.kind == "pz":
        cfg, extra = _config(args)
        result.update(extra)
        z = np.abs(braid_amplitudes(cfg, workers=args.workers)) ** 2
        thetas = args.theta or [0.25, 0.5, 0.75]
        reps = [paley_zygmund_check(z, th) for th in thetas]
        result["config"] = cfg.to_dict()
        result["length"] = cfg.resolved_length()
        result["checks"] = [r.to_dict() for r in reps]
        table = (
            ["theta", "probability", "bound", "slack", "stderr"],
            [[r.theta, r.probability, r.bound, r.slack, r.stderr] for r in reps],
        )
        if not all(r.ok for r in reps):
            result["contract"] = "Paley-Zygmund slack below -3 stderr"

    if out_dir is not None:
        result["manifest"] = "manifest.json"
        _atomic_write(out_dir / "results.json", _dumps(result))
        manifest.outputs.append(str(out_dir / "results.json"))
        if table is not None:
            _atomic_write(out_dir / "table.csv", _csv_text(table[0], table[1], "manifest.json"))
            manifest.outputs.append(str(out_dir / "table.csv"))
        manifest.write(out_dir / "manifest.json")
    if "contract" in result:
        _emit(result, args)
        raise ContractViolation(result["contract"])
    return result


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="platjones", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    j = sub.add_parser("jones", help="Jones polynomial of a plat-closed braid")
    j.add_argument("--braid", required=True, help='signed generators, e.g. "1 -2 1"')
    j.add_argument("--strands", type=int, required=True)
    j.add_argument("--k", type=int, default=5)
    j.add_argument("--method", choices=("oracle", "path", "both"), default="both")
    j.add_argument("--budget", type=int, default=None, help="max crossings for the state sum")
    j.set_defaults(func=cmd_jones)

    s = sub.add_parser("sample", help="random braid words")
    s.add_argument("--strands", type=int, required=True)
    s.add_argument("--length", default="auto", help="integer or 'auto' (design length)")
    s.add_argument("--epsilon", type=float, default=0.1)
    s.add_argument("--lambda", dest="lam", type=float, default=1.0)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True, help="word file, one braid per line")
    s.add_argument("--probs", default=None, help="optional CSV of cap-outcome probabilities")
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_sample)

    e = sub.add_parser("experiment", help="design, anti-concentration and moment experiments")
    e.add_argument("kind", choices=("moments", "anticoncentration", "gap", "pz"))
    e.add_argument("--n", type=int, default=2)
    e.add_argument("--k", type=int, default=5)
    e.add_argument("--t", type=int, default=2)
    e.add_argument("--epsilon", type=float, default=0.1)
    e.add_argument("--gamma", type=float, action="append", help="repeatable")
    e.add_argument("--theta", type=float, action="append", help="repeatable")
    e.add_argument("--lambda", dest="lam", type=float, default=1.0)
    e.add_argument("--calibrate", action="store_true", help="use the calibrated lambda")
    e.add_argument("--length", type=int, default=None, help="override the design length")
    e.add_argument("--L", type=int, default=0, help="braid length for 'gap'")
    e.add_argument("--L-max", dest="L_max", type=int, default=0, help="tabulate gap for 0..L_max")
    e.add_argument("--samples", type=int, default=10_000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--beta", choices=("cap", "random"), default="cap")
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--out", default=None, help="directory for results.json, table.csv, manifest.json")
    e.set_defaults(func=cmd_experiment)
    return p


def _emit(report, args):
    sys.stdout.write(_dumps(report))
    args._emitted = True


def _fail(category: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": category, "message": message}) + "\n")
    return EXIT_CODES[category]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except BraidError as exc:
        return _fail("parse_error", str(exc))
    except OracleBudgetError as exc:
        return _fail("budget_error", str(exc))
    except ConfigError as exc:
        return _fail("config_error", str(exc))
    except DimensionError as exc:
        return _fail("dimension_error", str(exc))
    except ContractViolation as exc:
        return _fail("contract_violation", str(exc))
    except OSError as exc:
        return _fail("io_error", str(exc))
    except ValueError as exc:
        return _fail("config_error", str(exc))
    if not getattr(args, "_emitted", False):
        sys.stdout.write(_dumps(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
