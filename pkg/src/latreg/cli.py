"""``latreg <command> --config file.json [--seed S] [--tol T] [--out report.json]``.

Exit codes: 0 when the check passes, 1 when it fails (the report carries a
witness), 2 for usage errors, malformed configs and violated preconditions.

Config keys (all optional unless a command needs them)::

    {
      "representation": {"kind": "doubly-commuting-tensor", "n": 3, "d": 2, "seed": 7}
                        or {"gens": [[[re, im], ...], ...], "label": "..."},
      "group": {"kind": "zn", "n": 3},           # law-suite
      "tuple": [[1, 0], [0, 1], [0, 0]],         # certify, window-dilate
      "params": {...},                           # command specific
      "seed": 0, "tol": 1e-9, "out": "report.json"
    }
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from pathlib import Path
from typing import Any, Callable

from .errors import ContractError, LatregError
from .lattice import group_from_spec, law_suite
from .positivity import DEFAULT_TOL
from .regularity import (
    build_tilde_gram,
    certify_regularity,
    check_brehmer,
    check_regular_sampled,
    factorize_brehmer,
    window_verdict,
)
from .regularity.brehmer import MAX_BREHMER_N
from .report import Report
from .representation import (
    GENERATOR_KINDS,
    Representation,
    check_nica,
    check_row_column,
    generate,
    spectral_norm,
)
from .dilation import window_dilation
from .worked_examples import DEMO_NAMES, run_demo

WINDOW_TOL = 1e-10


class ConfigError(ContractError):
    """A config field is missing or malformed; the message names the field."""

    def __init__(self, field: str, problem: str):
        super().__init__(f"config field '{field}': {problem}")
        self.field = field


def _get(cfg: dict, field: str, kind, default=Any, path: str = ""):
    name = f"{path}{field}"
    if field not in cfg:
        if default is Any:
            raise ConfigError(name, "missing")
        return default
    value = cfg[field]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ConfigError(name, f"expected an integer, got {value!r}")
    if kind is float and (isinstance(value, bool) or not isinstance(value, (int, float))):
        raise ConfigError(name, f"expected a number, got {value!r}")
    if kind in (dict, list, str) and not isinstance(value, kind):
        raise ConfigError(name, f"expected {kind.__name__}, got {type(value).__name__}")
    return value


class Context:
    def __init__(self, cfg: dict, seed: int, tol: float):
        self.cfg = cfg
        self.seed = seed
        self.tol = tol
        self.params = _get(cfg, "params", dict, {})

    def param(self, field: str, kind, default=Any):
        return _get(self.params, field, kind, default, "params.")

    def representation(self, max_n: int | None = None) -> Representation:
        spec = _get(self.cfg, "representation", dict)
        if "gens" in spec:
            try:
                rep = Representation.from_json_obj(spec)
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError("representation.gens", str(exc)) from exc
        else:
            kind = _get(spec, "kind", str, path="representation.")
            if kind not in GENERATOR_KINDS:
                raise ConfigError("representation.kind", f"expected one of {GENERATOR_KINDS}")
            n = _get(spec, "n", int, 2, "representation.")
            d = _get(spec, "d", int, 2, "representation.")
            if n < 1 or d < 1:
                raise ConfigError("representation.n" if n < 1 else "representation.d", "must be >= 1")
            if max_n is not None and n > max_n:
                raise ConfigError("representation.n", f"must be <= {max_n} for this command")
            seed = _get(spec, "seed", int, self.seed, "representation.")
            rep = generate(kind, n, d, seed)
        if max_n is not None and rep.n > max_n:
            raise ConfigError("representation.n", f"must be <= {max_n} for this command")
        return rep

    def cone_tuple(self, rep: Representation) -> list[tuple[int, ...]]:
        raw = _get(self.cfg, "tuple", list)
        if not raw:
            raise ConfigError("tuple", "must be nonempty")
        out = []
        for k, p in enumerate(raw):
            if (not isinstance(p, list) or len(p) != rep.n
                    or not all(isinstance(c, int) and not isinstance(c, bool) and c >= 0 for c in p)):
                raise ConfigError(f"tuple[{k}]", f"expected {rep.n} nonnegative integers, got {p!r}")
            out.append(tuple(p))
        return out


def _cmd_check_brehmer(ctx: Context) -> Report:
    return check_brehmer(ctx.representation(MAX_BREHMER_N), ctx.tol)


def _cmd_check_regular(ctx: Context) -> Report:
    rep = ctx.representation()
    return check_regular_sampled(
        rep,
        max_entry=ctx.param("max_entry", int, 1),
        extra_random=ctx.param("extra_random", int, 20),
        seed=ctx.seed,
        tol=ctx.tol,
        workers=ctx.param("workers", int, None),
    )


def _cmd_certify(ctx: Context) -> Report:
    rep = ctx.representation()
    t = ctx.cone_tuple(rep)
    cert = certify_regularity(rep, t, depth_limit=ctx.param("depth_limit", int, 64), tol=ctx.tol,
                              entry_sum_bound=ctx.param("entry_sum_bound", int, 64))
    failing = cert.failing_leaves()
    window = window_verdict(rep, t, ctx.tol)
    witness = None
    if failing:
        witness = {"tuple": failing[0].tuple.elems, "g": failing[0].params["g"],
                   "lambda_min": failing[0].lambda_min}
    return Report(
        check="certify",
        verdict=cert.verdict is True,
        lambda_min=window.lambda_min,
        witness=witness,
        tolerances={"psd": ctx.tol},
        seed=ctx.seed,
        details={"certificate_verdict": cert.verdict, "window_psd": window.ok,
                 "leaves": len(cert.leaves()), "failing_leaves": len(failing),
                 "certificate": cert.to_json_obj()},
    )


def _cmd_factorize(ctx: Context) -> Report:
    rep = ctx.representation(MAX_BREHMER_N)
    n = ctx.param("n", int, rep.n)
    try:
        fact = factorize_brehmer(rep, n)
    except ContractError as exc:
        if exc.witness is None:
            raise
        return Report(check="factorize", verdict=False, lambda_min=exc.lambda_min,
                      witness=exc.witness, tolerances={"psd": DEFAULT_TOL}, seed=ctx.seed,
                      details={"error": str(exc)})
    return Report(
        check="factorize",
        verdict=True,
        tolerances={"residual": 1e-9},
        seed=ctx.seed,
        details={"order": [list(u) for u in fact.labels], "residual": fact.residual,
                 "telescoping_defect": fact.telescoping_defect,
                 "triangularity": fact.triangularity(), "R": fact.dense_R(), "X": fact.X.dense()},
    )


def _cmd_window_dilate(ctx: Context) -> Report:
    rep = ctx.representation()
    t = ctx.cone_tuple(rep)
    try:
        wd = window_dilation(rep, t, method=ctx.param("method", str, "cholesky"))
    except ContractError as exc:
        if exc.witness is None:
            raise
        return Report(check="window-dilate", verdict=False, lambda_min=exc.lambda_min,
                      witness=exc.witness, tolerances={"psd": DEFAULT_TOL}, seed=ctx.seed,
                      details={"error": str(exc)})
    X = build_tilde_gram(rep, t).dense()
    defect = spectral_norm(wd.gram() - X)
    ok = defect <= WINDOW_TOL * max(1.0, spectral_norm(X))
    return Report(check="window-dilate", verdict=ok, tolerances={"reproduction": WINDOW_TOL},
                  seed=ctx.seed, details={"reproduction_defect": defect, "dilation": wd})


def _cmd_nica(ctx: Context) -> Report:
    return check_nica(ctx.representation(), seed=ctx.seed, samples=ctx.param("samples", int, 50))


def _cmd_row_column(ctx: Context) -> Report:
    mode = ctx.param("mode", str, "column")
    if mode not in ("row", "column"):
        raise ConfigError("params.mode", "expected 'row' or 'column'")
    return check_row_column(ctx.representation(), mode=mode, seed=ctx.seed,
                            samples=ctx.param("samples", int, 100), tol=ctx.tol)


def _cmd_law_suite(ctx: Context) -> Report:
    spec = _get(ctx.cfg, "group", dict)
    try:
        group = group_from_spec(spec)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("group", str(exc)) from exc
    return law_suite(group, seed=ctx.seed, trials=ctx.param("trials", int, 1000))


def _cmd_worked_example(ctx: Context) -> Report:
    name = ctx.param("name", str, "counterexample")
    if name not in DEMO_NAMES:
        raise ConfigError("params.name", f"expected one of {DEMO_NAMES}")
    a = ctx.params.get("a", 0.6)
    b = ctx.params.get("b", 0.8)
    for field, v in (("a", a), ("b", b)):
        ok = isinstance(v, (int, float)) or (isinstance(v, list) and len(v) == 2)
        if not ok or isinstance(v, bool):
            raise ConfigError(f"params.{field}", "expected a number or [re, im]")
    with contextlib.redirect_stdout(sys.stderr):
        return run_demo(name, verbose=True, a=a, b=b)


COMMANDS: dict[str, Callable[[Context], Report]] = {
    "check-brehmer": _cmd_check_brehmer,
    "check-regular": _cmd_check_regular,
    "certify": _cmd_certify,
    "factorize": _cmd_factorize,
    "window-dilate": _cmd_window_dilate,
    "nica": _cmd_nica,
    "row-column": _cmd_row_column,
    "law-suite": _cmd_law_suite,
    "paper-demo": _cmd_worked_example,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latreg", description="Regularity and dilation checks.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", type=Path, help="JSON experiment config")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--tol", type=float, help="override the PSD tolerance")
    parser.add_argument("--out", type=Path, help="write the JSON report here (default: stdout)")
    parser.add_argument("--demo", help="shortcut for params.name of the worked-example command")
    return parser


def _load_config(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        cfg = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError("--config", f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("--config", f"invalid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("--config", "top level must be an object")
    return cfg


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = _load_config(args.config)
        if args.demo is not None:
            cfg.setdefault("params", {})["name"] = args.demo
        seed = args.seed if args.seed is not None else _get(cfg, "seed", int, 0)
        tol = args.tol if args.tol is not None else float(_get(cfg, "tol", float, DEFAULT_TOL))
        if not tol > 0:
            raise ConfigError("tol", f"must be positive, got {tol}")
        out = args.out if args.out is not None else cfg.get("out")
        report = COMMANDS[args.command](Context(cfg, seed, tol))
        report.seed = seed
        report.details.setdefault("config", cfg)
    except LatregError as exc:
        print(f"latreg: error: {exc}", file=sys.stderr)
        return 2
    text = report.to_json() + "\n"
    if out:
        Path(out).write_text(text)
        state = "PASS" if report.verdict else "FAIL"
        print(f"{args.command}: {state} -> {out}")
    else:
        sys.stdout.write(text)
    if not report.verdict and report.witness is not None:
        print(f"witness: {json.dumps(report.to_dict()['witness'])}", file=sys.stderr)
    return 0 if report.verdict else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
