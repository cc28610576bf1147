"""Command-line front end: ``figures``, ``verify`` and ``floor``.

Exit codes: 0 on success, 1 when a mathematical claim is falsified, 2 on an
operational error such as an unwritable output path or bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from attenuant import majorization as maj
from attenuant import schemes as sch
from attenuant import verify

EXIT_OK, EXIT_FALSIFIED, EXIT_OPERATIONAL = 0, 1, 2
SIG_DIGITS = 12


@dataclass
class RunConfig:
    command: str
    figure_id: str | None = None
    n_values: list[int] = field(default_factory=list)
    resolution: int = 201
    eps: float = sch.DEFAULT_EPS
    n_max: int = 200
    lam: float | None = None
    lam_min: float = 1.0 / 201.0
    lam_max: float = 1.0
    suites: list[str] = field(default_factory=list)
    output: str | None = None
    format: str = "json"
    threads: int = 1

    def validate(self) -> None:
        if self.resolution < 2:
            raise ValueError("resolution must be >= 2")
        if self.n_max < 2:
            raise ValueError("n_max must be >= 2")


def fmt(x: float) -> str:
    return f"{x:.{SIG_DIGITS}g}"


def _round(obj):
    """Round every float to the reporting precision, recursively."""
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x) or math.isnan(x):
            return str(x)
        return float(fmt(x))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def dump_json(report: dict) -> str:
    return json.dumps(_round(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
        return
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="")


# -- commands --------------------------------------------------------------------------


def figure_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["curve", "x", "y"])
    for curve, x, y in rows:
        writer.writerow([curve, fmt(x), fmt(y)])
    return buf.getvalue()


def cmd_figures(cfg: RunConfig) -> int:
    ids = [cfg.figure_id] if cfg.figure_id else list(sch.FIGURE_IDS)
    out_dir = Path(cfg.output or "figures")
    for fid in ids:
        grid: dict = {"points": cfg.resolution}
        if cfg.n_values:
            grid["n"] = cfg.n_values
        if cfg.lam is not None:
            grid["lam"] = cfg.lam
        rows = sch.figure_data(fid, grid, workers=cfg.threads)
        target = out_dir / f"{fid}.csv" if out_dir.suffix != ".csv" else out_dir
        _emit(figure_csv(rows), str(target))
        print(f"wrote {target} ({len(rows)} rows)", file=sys.stderr)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    names = cfg.suites or list(verify.SUITES)
    report: dict = {"config": asdict(cfg), "suites": {}}
    for name in names:
        fn = verify.SUITES[name]
        res = fn(n_max=cfg.n_max, points=maj.GRID_POINTS) if name == "majorization" else fn()
        report["suites"][name] = res.as_dict()
    report["passed"] = all(s["passed"] for s in report["suites"].values())
    _emit(dump_json(report), cfg.output)
    return EXIT_OK if report["passed"] else EXIT_FALSIFIED


def cmd_floor(cfg: RunConfig) -> int:
    if cfg.lam is not None:
        lams = [cfg.lam]
    else:
        lams = list(np.linspace(cfg.lam_min, cfg.lam_max, cfg.resolution))
    report: dict = {"config": asdict(cfg)}
    try:
        results = sch.floor_sweep(lams, cfg.eps, workers=cfg.threads)
    except sch.FloorFailure as exc:
        report["error"] = str(exc)
        report["passed"] = False
        _emit(dump_json(report), cfg.output)
        return EXIT_FALSIFIED
    worst = min(results, key=lambda r: r.value)
    n_big = cfg.n_max
    report.update(
        {
            "points": [asdict(r) for r in results],
            "global_min": asdict(worst),
            "asymptotic_small_lambda": {
                "limit": maj.ASYMPTOTIC_CERTIFIED,
                "n": n_big,
                "certified_at_1_over_n": maj.bound_chain(n_big, 1.0 / n_big).certified,
            },
            "fock_branch_floor": 32.0 / (6561.0 * math.log(2.0)),
            "passed": worst.value > 0.0,
        }
    )
    _emit(dump_json(report), cfg.output)
    return EXIT_OK if report["passed"] else EXIT_FALSIFIED


# -- argument parsing --------------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="attenuant", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=None, help="worker threads (default: ATTENUANT_THREADS or cores)")
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figures", help="write figure tables as CSV")
    fig.add_argument("--id", dest="figure_id", choices=sch.FIGURE_IDS)
    fig.add_argument("--n", dest="n_values", type=_int_list, default=[])
    fig.add_argument("--points", dest="resolution", type=int, default=201)
    fig.add_argument("--lambda", dest="lam", type=float)
    fig.add_argument("--out", dest="output", default="figures", help="directory, or a .csv path for a single figure")

    ver = sub.add_parser("verify", help="run verification suites and print a JSON report")
    ver.add_argument("--suite", dest="suites", action="append", choices=sorted(verify.SUITES))
    ver.add_argument("--nmax", dest="n_max", type=int, default=200)
    ver.add_argument("--out", dest="output")

    flo = sub.add_parser("floor", help="sweep the certified capacity floor")
    flo.add_argument("--lambda", dest="lam", type=float)
    flo.add_argument("--lambda-min", dest="lam_min", type=float, default=1.0 / 201.0)
    flo.add_argument("--lambda-max", dest="lam_max", type=float, default=1.0)
    flo.add_argument("--points", dest="resolution", type=int, default=2001)
    flo.add_argument("--eps", type=float, default=sch.DEFAULT_EPS)
    flo.add_argument("--nmax", dest="n_max", type=int, default=200)
    flo.add_argument("--out", dest="output")
    return parser


COMMANDS = {"figures": cmd_figures, "verify": cmd_verify, "floor": cmd_floor}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_OPERATIONAL
    opts = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__ and v is not None}
    opts["threads"] = args.threads if args.threads is not None else sch.thread_count()
    opts.setdefault("suites", [])
    cfg = RunConfig(**opts)
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OPERATIONAL


if __name__ == "__main__":
    sys.exit(main())
