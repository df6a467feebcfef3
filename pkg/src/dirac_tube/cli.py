"""Batch front-end.

    dirac-tube <command> [--config FILE] [--out DIR] [--format csv|json] [--set key=value ...]

Commands: curve-info, transverse, effective, solve2d, verify.
Exit codes: 0 success, 1 numerical failure, 2 configuration error.
The config file holds UTF-8 ``key = value`` lines; ``#`` starts a comment.
Set DIRAC_TUBE_THREADS to cap the BLAS thread pool.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import os
import sys
import warnings
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .geometry import GeometryError, TubeOverlapWarning, build_frame, epsilon_max, make_curve, read_curve
from .numerics import NumericalError

THREADS_ENV = "DIRAC_TUBE_THREADS"
VERIFY_COLUMNS = ["epsilon", "j", "E_computed", "E_predicted", "abs_diff"]


class ConfigError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.replace(",", " ").split()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.replace(",", " ").split()]


@dataclass
class RunConfig:
    curve: str = "circle 1"
    curve_file: str | None = None
    m: float = 0.0
    eps: list = field(default_factory=lambda: [0.1, 0.05, 0.025])
    j: list = field(default_factory=lambda: [1])
    delta: list = field(default_factory=lambda: [0.0, 0.1, 1.0])
    p_max: int = 5
    K: int = 24
    K_eff: int = 32
    N_t: int = 6
    N_s: int = 512
    quad_order: int = 32
    n_eigs: int = 8
    out: str = "."
    format: str = "csv"

    _parsers = {"m": float, "eps": _floats, "j": _ints, "delta": _floats, "p_max": int,
                "K": int, "K_eff": int, "N_t": int, "N_s": int, "quad_order": int, "n_eigs": int}

    def set(self, key: str, value: str) -> None:
        names = {f.name for f in fields(self)}
        if key not in names:
            raise ConfigError(f"unknown config key {key!r}")
        parse = self._parsers.get(key, str)
        try:
            setattr(self, key, parse(value.strip()))
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {value!r}") from exc

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        cfg = cls()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
            cfg.set(key.strip(), value)
        return cfg

    def validate(self) -> None:
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.m < 0:
            raise ConfigError("m must be non-negative")
        for name in ("K", "N_t", "p_max", "n_eigs"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if any(e <= 0 for e in self.eps):
            raise ConfigError("ε values must be positive")
        if any(j < 1 for j in self.j):
            raise ConfigError("j values must be positive")

    def load_curve(self):
        if self.curve_file:
            return read_curve(self.curve_file)
        name, *params = self.curve.split()
        try:
            values = [float(p) for p in params]
        except ValueError as exc:
            raise ConfigError(f"bad curve parameters in {self.curve!r}") from exc
        return make_curve(name, *values)

    def frame(self):
        return build_frame(self.load_curve(), self.N_s)


# -- output ----------------------------------------------------------------

def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_table(rows: list[dict], columns: list[str], path: Path, fmt: str) -> Path:
    path = path.with_suffix("." + fmt)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r[c]) for c in columns])
        path.write_text(buf.getvalue(), encoding="utf-8")
    else:
        path.write_text(json.dumps([{c: r[c] for c in columns} for r in rows], indent=2) + "\n",
                        encoding="utf-8")
    return path


def _emit(rows, columns, cfg: RunConfig, stem: str) -> None:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    path = write_table(rows, columns, out / stem, cfg.format)
    print(f"wrote {path}")


# -- commands --------------------------------------------------------------

def cmd_curve_info(cfg: RunConfig) -> dict:
    frame = cfg.frame()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TubeOverlapWarning)
        emax = epsilon_max(frame)
    info = {"length": frame.length, "kappa_max": frame.kappa_max, "epsilon_max": emax,
            "total_curvature": frame.total_curvature(), "N_s": frame.n_s,
            "overlap_warning": bool(caught)}
    columns = list(info)
    for k in columns:
        print(f"{k} = {_cell(info[k])}")
    _emit([info], columns, cfg, "curve_info")
    return info


def cmd_transverse(cfg: RunConfig) -> list[dict]:
    from .transverse import implicit_residual, transverse_eigenvalue, transverse_eigenvalue_series
    if any(d < 0 for d in cfg.delta):
        raise ConfigError("δ must be non-negative")
    rows = []
    for d in cfg.delta:
        for p in range(1, cfg.p_max + 1):
            lam = transverse_eigenvalue(p, d)
            rows.append({"p": p, "delta": d, "lambda_bisect": lam,
                         "lambda_series": transverse_eigenvalue_series(p, d),
                         "residual": abs(implicit_residual(lam, d))})
    _emit(rows, ["p", "delta", "lambda_bisect", "lambda_series", "residual"], cfg, "transverse")
    return rows


def cmd_effective(cfg: RunConfig) -> list[dict]:
    from .effective1d import MIN_MODES, effective_spectrum
    if cfg.K_eff < MIN_MODES:
        raise ConfigError(f"K_eff must be at least {MIN_MODES}")
    frame = cfg.frame()
    es = effective_spectrum(frame, cfg.K_eff, min(cfg.n_eigs, 2 * (2 * cfg.K_eff + 1)))
    rows = []
    for i, mu in enumerate(es.eigenvalues, 1):
        gap = es.pair_gaps[(i - 1) // 2] if (i - 1) // 2 < len(es.pair_gaps) else float("nan")
        rows.append({"j": i, "mu": float(mu), "pair_gap": float(gap)})
    _emit(rows, ["j", "mu", "pair_gap"], cfg, "effective")
    return rows


def cmd_solve2d(cfg: RunConfig) -> list[dict]:
    from .strip2d import StripProblem, strip_spectrum
    if not cfg.eps:
        raise ConfigError("ε list is empty")
    frame = cfg.frame()
    rows = []
    for e in cfg.eps:
        try:
            problem = StripProblem(frame, e, cfg.m, cfg.K, cfg.N_t, cfg.quad_order)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        S = strip_spectrum(problem, 2 * max(cfg.n_eigs // 2, 1))
        for j, E in enumerate(S.energies, 1):
            rows.append({"epsilon": e, "j": j, "mu_odd": float(S.mu[2 * j - 2]),
                         "mu_even": float(S.mu[2 * j - 1]), "E": float(E),
                         "pair_gap": float(S.pair_gaps[j - 1])})
    _emit(rows, ["epsilon", "j", "mu_odd", "mu_even", "E", "pair_gap"], cfg, "solve2d")
    return rows


def cmd_verify(cfg: RunConfig):
    from .asymptotics import verify_theorem
    if not cfg.eps:
        raise ConfigError("ε list is empty")
    if len(set(cfg.eps)) < 3:
        raise ConfigError("verify needs at least 3 distinct ε values")
    frame = cfg.frame()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TubeOverlapWarning)
        emax = epsilon_max(frame)
    if max(cfg.eps) >= emax:
        raise ConfigError(f"ε={max(cfg.eps)} not below ε_max={emax:.6g}")
    reports, rows = [], []
    for j in cfg.j:
        rep = verify_theorem(frame, cfg.m, j, cfg.eps, cfg.K, cfg.N_t, K_eff=cfg.K_eff,
                             quad_order=cfg.quad_order)
        reports.append(rep)
        rows += rep.rows()
    _emit(rows, VERIFY_COLUMNS, cfg, "verify")
    out = Path(cfg.out)
    text = "\n".join(r.to_text() for r in reports)
    (out / "verify_report.txt").write_text(text, encoding="utf-8")
    print(text, end="")
    return reports


COMMANDS = {"curve-info": cmd_curve_info, "transverse": cmd_transverse, "effective": cmd_effective,
            "solve2d": cmd_solve2d, "verify": cmd_verify}


@contextlib.contextmanager
def _thread_hint():
    n = os.environ.get(THREADS_ENV)
    if not n:
        yield
        return
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        yield
        return
    with threadpool_limits(limits=max(int(n), 1)):
        yield


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dirac-tube", description=__doc__.split("\n\n")[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="key = value run configuration file")
    ap.add_argument("--out", help="output directory (overrides config)")
    ap.add_argument("--format", choices=("csv", "json"), help="output format (overrides config)")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                    help="override a single config key; may be repeated")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig()
        if args.config:
            cfg = RunConfig.from_text(Path(args.config).read_text(encoding="utf-8"))
        for item in args.set:
            key, sep, value = item.partition("=")
            if not sep:
                raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
            cfg.set(key.strip(), value)
        if args.out:
            cfg.out = args.out
        if args.format:
            cfg.format = args.format
        cfg.validate()
        with _thread_hint():
            COMMANDS[args.command](cfg)
    except (ConfigError, GeometryError, OSError, ValueError) as exc:
        print(f"dirac-tube: configuration error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"dirac-tube: numerical failure: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
