"""Command-line front end: ``artifact <command> [flags]``.

Exit codes: 0 ok; 1 verify or dims mismatch; 2 configuration error or
unknown suite; 3 convergence failure; 4 scattering-model error; 5 internal
consistency failure.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import (ArtifactError, ConvergenceError, DiagnosticError, DomainError,
                     InternalError, ModelError, PoleError)
from .scattering import ScatteringModel, model_from_selector
from .surface import SurfaceSignature, dim_holomorphic, dim_via_residue
from .trace_geom import LengthSpectrum, geometric_trace
from . import zeta_det
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_MODEL, EXIT_INTERNAL = 0, 1, 2, 3, 4, 5
NA = "NA"


class ConfigError(Exception):
    pass


# ------------------------------------------------------------------ tables


@dataclass
class Table:
    kind: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Table):
            return NotImplemented
        return (self.kind, self.columns, self.rows) == (other.kind, other.columns, other.rows)


def _fmt(v) -> str:
    if v is None:
        return NA
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        text = format(v, ".17g")
        # keep floats distinguishable from ints on the way back in
        if re.fullmatch(r"-?\d+", text):
            text += ".0"
        return text
    return str(v)


def _parse(text: str):
    if text == NA:
        return None
    if text in ("true", "false"):
        return text == "true"
    if re.fullmatch(r"-?\d+", text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        return text


def to_csv(t: Table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["#table", t.kind])
    w.writerow(t.columns)
    for row in t.rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def from_csv(text: str) -> Table:
    rows = list(csv.reader(io.StringIO(text)))
    if len(rows) < 2 or rows[0][0] != "#table":
        raise ValueError("not a table CSV")
    return Table(rows[0][1], rows[1], [[_parse(x) for x in r] for r in rows[2:]])


def to_json(t: Table) -> str:
    return json.dumps({"table": t.kind, "columns": t.columns, "rows": t.rows})


def from_json(text: str) -> Table:
    d = json.loads(text)
    return Table(d["table"], d["columns"], d["rows"])


def emit(t: Table, fmt: str) -> str:
    return to_csv(t) if fmt == "csv" else to_json(t) + "\n"


# ------------------------------------------------------------------ config


@dataclass
class RunConfig:
    surface: SurfaceSignature | None = None
    spectrum_path: str | None = None
    scattering: str = "none"
    n: int = 0
    s_grid: list = field(default_factory=list)
    output_format: str = "csv"
    kmax: int = 64
    skip_scattering: bool = False
    jobs: int = 1

    def spectrum(self) -> LengthSpectrum:
        if not self.spectrum_path:
            return LengthSpectrum()
        return LengthSpectrum.from_json(_read(self.spectrum_path))

    def model(self) -> ScatteringModel | None:
        if self.scattering == "none":
            return None
        return model_from_selector(self.scattering)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


_INLINE_SIG = re.compile(r"^\s*(\d+)\s*;\s*(\d+)\s*;\s*([\d,\s]*)$")


def parse_surface(value) -> SurfaceSignature:
    """A JSON file path, a JSON object, or the inline form 'g;q;m1,m2'."""
    if isinstance(value, dict):
        return SurfaceSignature.from_dict(value)
    m = _INLINE_SIG.match(value)
    if m and not os.path.exists(value):
        orders = tuple(int(x) for x in m.group(3).split(",") if x.strip())
        return SurfaceSignature(int(m.group(1)), int(m.group(2)), orders)
    try:
        return SurfaceSignature.from_json(_read(value))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"surface file is not JSON: {exc}") from exc


def parse_s_grid(value) -> list[float]:
    if isinstance(value, (int, float)):
        items = [float(value)]
    elif isinstance(value, list):
        items = [float(x) for x in value]
    else:
        try:
            items = [float(x) for x in str(value).split(",") if x.strip()]
        except ValueError as exc:
            raise ConfigError(f"bad --s list: {exc}") from exc
    return items


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            raw = json.loads(_read(args.config))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not JSON: {exc}") from exc
        if "surface" in raw:
            cfg.surface = parse_surface(raw["surface"])
        cfg.spectrum_path = raw.get("spectrum", cfg.spectrum_path)
        cfg.scattering = raw.get("scattering", cfg.scattering)
        cfg.n = int(raw.get("n", cfg.n))
        if "s" in raw:
            cfg.s_grid = parse_s_grid(raw["s"])
        cfg.output_format = raw.get("format", cfg.output_format)
        cfg.kmax = int(raw.get("kmax", cfg.kmax))
        cfg.skip_scattering = bool(raw.get("skip_scattering", cfg.skip_scattering))
        cfg.jobs = int(raw.get("jobs", cfg.jobs))
    # command-line flags override the file
    if args.surface is not None:
        cfg.surface = parse_surface(args.surface)
    if args.spectrum is not None:
        cfg.spectrum_path = args.spectrum
    if args.scattering is not None:
        cfg.scattering = args.scattering
    if args.n is not None:
        cfg.n = args.n
    if args.s is not None:
        cfg.s_grid = parse_s_grid(args.s)
    if args.format is not None:
        cfg.output_format = args.format
    if args.kmax is not None:
        cfg.kmax = args.kmax
    if args.skip_scattering:
        cfg.skip_scattering = True
    if args.jobs is not None:
        cfg.jobs = args.jobs
    if cfg.n < 0:
        raise ConfigError("--n must be nonnegative")
    if cfg.output_format not in ("csv", "json"):
        raise ConfigError("--format must be csv or json")
    if cfg.kmax < 1 or cfg.jobs < 1:
        raise ConfigError("--kmax and --jobs must be positive")
    if not (cfg.scattering in ("none", "modular") or cfg.scattering.startswith("file:")):
        raise ConfigError(f"unknown scattering selector {cfg.scattering!r}")
    return cfg


def _need_surface(cfg: RunConfig) -> SurfaceSignature:
    if cfg.surface is None:
        raise ConfigError("--surface is required")
    return cfg.surface


def _need_grid(cfg: RunConfig) -> list[float]:
    if not cfg.s_grid:
        raise ConfigError("--s is required and must be nonempty")
    if any(not (s > 0 and math.isfinite(s)) for s in cfg.s_grid):
        raise ConfigError("every s must be a finite positive number")
    return cfg.s_grid


# ---------------------------------------------------------------- commands


def cmd_dims(cfg: RunConfig) -> tuple[Table, bool]:
    sig = _need_surface(cfg)
    t = Table("dims", ["n", "d_n", "d_n_residue"])
    ok = True
    for n in range(cfg.n + 1):
        d = dim_holomorphic(sig, n)
        if n == 0:
            t.rows.append([0, d, None])
            continue
        r = dim_via_residue(sig, n)
        ok &= r == d
        t.rows.append([n, d, int(r) if r.denominator == 1 else float(r)])
    return t, ok


def cmd_area(cfg: RunConfig) -> Table:
    sig = _need_surface(cfg)
    a = sig.area_over_2pi
    return Table("area", ["area", "area_over_2pi_num", "area_over_2pi_den"],
                 [[sig.area, a.numerator, a.denominator]])


def _trace_row(cfg: RunConfig, s: float) -> list:
    b = geometric_trace(cfg.surface, cfg.n, s, cfg.spectrum(), cfg.model(), cfg.kmax,
                        skip_scattering=cfg.skip_scattering)
    row = [s]
    for v in (b.identity, b.hyperbolic, b.elliptic, b.parabolic, b.total):
        row += [v.real, v.imag]
    return row + [b.truncation_error, b.partial]


def _det_row(cfg: RunConfig, s: float) -> list:
    model = cfg.model()
    a = zeta_det._model_a(cfg.surface, model)
    ld = zeta_det.log_det_resolvent(cfg.surface, cfg.n, s, cfg.spectrum(), a, cfg.kmax)
    d = cmath.exp(ld)
    return [s, ld.real, ld.imag, d.real, d.imag]


def _zeta_row(cfg: RunConfig, s: float) -> list:
    lz, tail = zeta_det.selberg_log_zeta(cfg.spectrum(), s)
    return [s, lz.real, lz.imag, tail]


_ROWS = {"trace": _trace_row, "det": _det_row, "zeta": _zeta_row}
_COLUMNS = {
    "trace": ["s", "identity_re", "identity_im", "hyperbolic_re", "hyperbolic_im", "elliptic_re",
              "elliptic_im", "parabolic_re", "parabolic_im", "total_re", "total_im",
              "truncation_error", "partial"],
    "det": ["s", "log_det_re", "log_det_im", "det_re", "det_im"],
    "zeta": ["s", "log_z_re", "log_z_im", "tail"],
}


def _worker(job: tuple[str, RunConfig, float]) -> list:
    kind, cfg, s = job
    return _ROWS[kind](cfg, s)


def grid_table(kind: str, cfg: RunConfig) -> Table:
    """One row per s; rows keep the input order whatever the worker count."""
    if kind != "zeta":
        _need_surface(cfg)
    grid = _need_grid(cfg)
    cfg.spectrum()  # surface file errors before any work is dispatched
    jobs = [(kind, cfg, s) for s in grid]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_worker, jobs))
    else:
        rows = [_worker(j) for j in jobs]
    return Table(kind, list(_COLUMNS[kind]), rows)


def cmd_constants(cfg: RunConfig) -> Table:
    sig = _need_surface(cfg)
    n = cfg.n
    a = zeta_det._model_a(sig, cfg.model())
    cst = zeta_det.b_d_constants(sig, n)
    c = zeta_det.c_constant(sig, n, a)
    return Table("constants", ["n", "A", "B", "D", "C_n", "d_n"],
                 [[n, a, cst.B, cst.D, c, dim_holomorphic(sig, n)]])


# -------------------------------------------------------------------- main


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with default settings")
    common.add_argument("--surface", help="signature JSON path or inline 'g;q;m1,m2'")
    common.add_argument("--spectrum", help="length spectrum JSON path")
    common.add_argument("--scattering", help="none | modular | file:PATH")
    common.add_argument("--n", type=int)
    common.add_argument("--s", help="comma-separated evaluation points")
    common.add_argument("--kmax", type=int)
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--jobs", type=int)
    common.add_argument("--skip-scattering", action="store_true")
    p = argparse.ArgumentParser(prog="artifact", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("dims", "area", "trace", "det", "constants", "zeta"):
        sub.add_parser(name, parents=[common])
    v = sub.add_parser("verify")
    v.add_argument("suite", nargs="?")
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    out = sys.stdout
    if args.command == "verify":
        if args.suite is not None and args.suite not in SUITES:
            print(f"unknown suite {args.suite!r}; available: {', '.join(SUITES)}", file=sys.stderr)
            return EXIT_CONFIG
        report = run_suite(args.suite)
        out.write(json.dumps(report, indent=2) + "\n")
        return EXIT_OK if report["failed"] == 0 else EXIT_FAIL
    try:
        cfg = build_config(args)
        code = EXIT_OK
        if args.command == "dims":
            table, ok = cmd_dims(cfg)
            code = EXIT_OK if ok else EXIT_FAIL
        elif args.command == "area":
            table = cmd_area(cfg)
        elif args.command == "constants":
            table = cmd_constants(cfg)
        else:
            table = grid_table(args.command, cfg)
        out.write(emit(table, cfg.output_format))
        return code
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ModelError as exc:
        print(f"scattering model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except (InternalError, DiagnosticError) as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ConfigError, DomainError, PoleError, ArtifactError, ValueError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
