"""Command-line front end.

Subcommands::

    qfannes entropy STATE.json ... [--q Q ...]
    qfannes bound RHO1.json RHO2.json [--q Q ...]
    qfannes sweep [--q Q ...] [--dim D ...] [--samples N] [--seed S] [--mode M] [--out FILE]
    qfannes axioms [--samples N] [--seed S]
    qfannes sample --dim D [--seed S] [--out FILE]

Exit status: 0 success, 1 input error, 2 when ``bound`` finds a pair outside
the hypothesis radius, 3 when ``sweep`` or ``axioms`` sees a tolerance
violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .axioms import run_axiom_suite
from .entropy import tsallis_entropy
from .fannes import Mode, check_fannes, sweep
from .linalg import InvalidDensityError, dump_matrix, load_matrix, sample_density, validate_density
from .qfunc import QParam

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_HYPOTHESIS = 2
EXIT_VIOLATION = 3

DEFAULT_Q = (0.25, 0.5, 0.9, 1.0, 1.1, 1.5, 2.0)
DEFAULT_DIMS = (2, 3, 4, 8)
DEFAULT_SAMPLES = 1000
DEFAULT_SEED = 42

COMMANDS = ("entropy", "bound", "sweep", "axioms", "sample")


@dataclass
class RunConfig:
    command: str
    q_values: list = field(default_factory=lambda: list(DEFAULT_Q))
    dims: list = field(default_factory=lambda: list(DEFAULT_DIMS))
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    input_paths: list = field(default_factory=list)
    output_path: str | None = None
    mode: str = Mode.WITHIN.value
    format: str | None = None
    workers: int = 1

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        for q in self.q_values:
            QParam(q)
        if self.samples < 1:
            raise ValueError("--samples must be at least 1")
        if any(d < 1 for d in self.dims):
            raise ValueError("--dim must be at least 1")
        Mode(self.mode)
        if self.command == "entropy" and not self.input_paths:
            raise ValueError("entropy needs at least one input file")
        if self.command == "bound" and len(self.input_paths) != 2:
            raise ValueError(f"bound needs exactly two input files, got {len(self.input_paths)}")
        if self.command == "sample" and len(self.dims) != 1:
            raise ValueError("sample needs exactly one --dim")


def fmt(x) -> str:
    """15 significant digits for floats; everything else via ``str``."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".15g")
    return str(x)


def _round15(x):
    if isinstance(x, float):
        return float(format(x, ".15g"))
    if isinstance(x, list):
        return [_round15(v) for v in x]
    if isinstance(x, dict):
        return {k: _round15(v) for k, v in x.items()}
    return x


def _dump_json(obj) -> str:
    return json.dumps(_round15(obj), indent=2) + "\n"


def _table(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _load_state(path):
    return validate_density(load_matrix(path))


def _emit(text, config: RunConfig, out):
    if config.output_path:
        Path(config.output_path).write_text(text)
    else:
        out.write(text)


def _cmd_entropy(config, out):
    states = [(p, _load_state(p)) for p in config.input_paths]
    records = []
    for path, rho in states:
        for q in config.q_values:
            records.append({"path": str(path), "q": float(q), "d": rho.dim,
                            "entropy": tsallis_entropy(rho, q).value})
    if (config.format or "csv") == "json":
        text = _dump_json(records)
    else:
        text = _table(("path", "q", "d", "entropy"), [tuple(r.values()) for r in records])
    _emit(text, config, out)
    return EXIT_OK


_REPORT_FIELDS = ("q", "d", "epsilon", "eigen_gap_sum", "radius", "hypothesis_met", "guaranteed",
                  "lhs", "rhs", "eigenwise_lhs", "eigenwise_rhs", "gap_rhs", "margin", "ratio",
                  "eigen_gaps", "flags")


def _cmd_bound(config, out):
    rho1, rho2 = (_load_state(p) for p in config.input_paths)
    if rho1.dim != rho2.dim:
        raise InvalidDensityError("dimension", f"states have dimensions {rho1.dim} and {rho2.dim}")
    reports = [check_fannes(rho1, rho2, q) for q in config.q_values]
    dicts = [{k: r.as_dict()[k] for k in _REPORT_FIELDS} for r in reports]
    if (config.format or "csv") == "json":
        text = _dump_json(dicts)
    else:
        rows = []
        for d in dicts:
            d = dict(d)
            d["eigen_gaps"] = " ".join(fmt(g) for g in d["eigen_gaps"])
            d["flags"] = " ".join(d["flags"])
            rows.append(tuple(d.values()))
        text = _table(_REPORT_FIELDS, rows)
    _emit(text, config, out)
    return EXIT_OK if all(r.hypothesis_met for r in reports) else EXIT_HYPOTHESIS


def _cmd_sweep(config, out):
    table = sweep(config.q_values, config.dims, config.samples, config.seed, config.mode,
                  workers=config.workers)
    _emit(table.to_csv(), config, out)
    if table.mode is Mode.WITHIN and table.violations:
        return EXIT_VIOLATION
    return EXIT_OK


def _cmd_axioms(config, out):
    results = run_axiom_suite(config.samples, config.seed)
    if (config.format or "json") == "json":
        text = _dump_json([r.as_dict() for r in results])
    else:
        text = _table(("check_name", "instances", "max_residual", "tolerance", "pass"),
                      [tuple(r.as_dict().values()) for r in results])
    _emit(text, config, out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION


def _cmd_sample(config, out):
    rho = sample_density(config.dims[0], config.seed)
    obj = _round15(json.loads(dump_matrix(rho)))
    _emit(json.dumps(obj) + "\n", config, out)
    return EXIT_OK


_HANDLERS = {
    "entropy": _cmd_entropy,
    "bound": _cmd_bound,
    "sweep": _cmd_sweep,
    "axioms": _cmd_axioms,
    "sample": _cmd_sample,
}


def run(config: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        config.validate()
        return _HANDLERS[config.command](config, out)
    except InvalidDensityError as exc:
        err.write(f"error: invalid input, {exc}\n")
    except (OSError, ValueError) as exc:
        err.write(f"error: {exc}\n")
    return EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qfannes", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("inputs", nargs="*", help="matrix JSON files")
        p.add_argument("--q", type=float, action="append", help="entropic index (repeatable)")
        p.add_argument("--dim", type=int, action="append", help="dimension (repeatable)")
        p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.WITHIN.value)
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--workers", type=int, default=1, help="processes for sweep")
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        q_values=args.q or list(DEFAULT_Q),
        dims=args.dim or list(DEFAULT_DIMS),
        samples=args.samples,
        seed=args.seed,
        input_paths=args.inputs,
        output_path=args.out,
        mode=args.mode,
        format=args.format,
        workers=args.workers,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
