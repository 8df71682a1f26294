"""Command-line front end: ``edelstein orbit|suborbit|verify|dr``.

Every command writes plot data as CSV (default) or JSON.  Settings come from
built-in defaults, then an optional flat ``key = value`` config file, then
command-line flags.

Exit codes: 0 success, 1 a certificate failed, 2 usage or config error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass, fields, replace

import numpy as np

from edelstein.indices import decimal_digits, edelstein_index, factorial, s_index
from edelstein.operator import DEFAULT_REL_TOL, Ell2Vector, orbit_norm_sq
from edelstein.plane import PlanePoint, RotationParams
from edelstein.schedules import XiSchedule
from edelstein.splitting import (
    apply_DR,
    apply_T,
    dr_trajectory,
    edelstein_lines,
    verify_monotone_equality,
)
from edelstein.theorems import (
    BLOWUP_MIN_N,
    verify_blowup_edelstein,
    verify_blowup_suborbit,
    verify_fractional_window,
    verify_vanishing_suborbit,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

ORBIT_COLUMNS = ("n", "norm_sq", "error_bound")
SUBORBIT_COLUMNS = ("n", "index", "digits", "norm_sq", "error_bound", "verdict")
VERIFY_COLUMNS = ("suite", "claim", "n", "k", "lhs", "rhs", "margin", "verdict")
DR_COLUMNS = ("n", "norm_sq", "error_bound", "shadow_norm_sq", "shadow_error_bound")

FAMILIES = ("factorial", "edelstein", "s")

# per-command default ranges
_RANGES = {
    "orbit": (1, 250),
    "suborbit": (1, 12),
    "verify": (BLOWUP_MIN_N, 40),
    "dr": (0, 50),
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    xi: str = "constant:1.0"
    n_min: int = 1
    n_max: int = 250
    rel_tol: float = DEFAULT_REL_TOL
    format: str = "csv"
    out: str = "-"
    family: str = "factorial"
    norms: bool = True
    truncate_at_n: bool = False
    horizon: int = 20
    vanishing_max: int = 12
    samples: int = 1000
    seed: int = 0

    def validate(self) -> RunConfig:
        try:
            XiSchedule.parse(self.xi)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if not (self.rel_tol > 0.0 and math.isfinite(self.rel_tol)):
            raise ConfigError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.n_min < 0 or self.n_min > self.n_max:
            raise ConfigError(f"need 0 <= n_min <= n_max, got n_min={self.n_min}, n_max={self.n_max}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.horizon < 1 or self.vanishing_max < 1 or self.samples < 1:
            raise ConfigError("horizon, vanishing_max and samples must be positive")
        return self

    @property
    def schedule(self) -> XiSchedule:
        return XiSchedule.parse(self.xi)


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "bool":
            lowered = raw.strip().lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None
    return raw.strip()


def load_config_file(path: str) -> dict:
    """Read ``key = value`` lines; ``#`` starts a comment; dashes in keys are allowed."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    values = {}
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _FIELD_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown or malformed setting {line!r}")
        values[key] = _coerce(key, raw)
    return values


def build_config(command: str, args: argparse.Namespace) -> RunConfig:
    n_min, n_max = _RANGES[command]
    config = RunConfig(n_min=n_min, n_max=n_max)
    if getattr(args, "config", None):
        config = replace(config, **load_config_file(args.config))
    overrides = {
        name: getattr(args, name)
        for name in _FIELD_TYPES
        if getattr(args, name, None) is not None
    }
    config = replace(config, **overrides)
    if command == "verify":
        _require_blowup_range(config.n_max)
    return config.validate()


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def render(rows: list[dict], columns, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{c: row.get(c) for c in columns} for row in rows], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def write_output(text: str, path: str):
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_orbit(config: RunConfig) -> list[dict]:
    """Rows ``(n, ||R^n 0||^2, error_bound)`` for ``n`` in ``[n_min, n_max]``."""
    xs = config.schedule
    rows = []
    for n in range(config.n_min, config.n_max + 1):
        K = n if (config.truncate_at_n and n > 0) else None
        value = orbit_norm_sq(xs, n, config.rel_tol, K=K)
        rows.append({"n": n, "norm_sq": value.value, "error_bound": value.error_bound})
    return rows


def cmd_suborbit(config: RunConfig, family: str | None = None) -> list[dict]:
    """Rows for the factorial, Edelstein or ``s`` index families.

    Indices are emitted as decimal strings.  The factorial family carries
    the vanishing certificate, the ``s`` family the blow-up certificate
    from ``n = 8`` on, and the Edelstein family the finite envelope check.
    """
    xs = config.schedule
    family = family or config.family
    rows = []
    for n in range(max(config.n_min, 1), config.n_max + 1):
        cert = None
        if family == "factorial":
            N = factorial(n)
            if config.norms:
                cert = verify_vanishing_suborbit(xs, n, config.rel_tol)
        elif family == "s":
            N = s_index(n)
            if config.norms and n >= BLOWUP_MIN_N:
                cert = verify_blowup_suborbit(xs, n, config.rel_tol)
        else:
            N = edelstein_index(n)
            if config.norms:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", RuntimeWarning)
                    cert = verify_blowup_edelstein(xs, n, config.rel_tol)
        row = {"n": n, "index": str(N), "digits": decimal_digits(N)}
        if cert is not None:
            row.update(norm_sq=cert.lhs.value, error_bound=cert.lhs.error_bound, verdict=cert.verdict)
        elif config.norms:
            value = orbit_norm_sq(xs, N, config.rel_tol)
            row.update(norm_sq=value.value, error_bound=value.error_bound, verdict="n/a")
        rows.append(row)
    return rows


def _property_rows(config: RunConfig) -> list[dict]:
    """Random-sample checks of ``D = T`` and of the monotone equality."""
    rng = np.random.default_rng(config.seed)
    rows = []
    thetas = [RotationParams.edelstein(k) for k in range(2, 7)]
    thetas += [RotationParams(0.5 * math.pi), RotationParams(1.5 * math.pi)]
    for params in thetas:
        U, V = edelstein_lines(params)
        worst = 0.0
        for p in rng.uniform(-10.0, 10.0, size=(config.samples, 2)):
            p = PlanePoint(*p)
            gap = (apply_DR(U, V, p) - apply_T(params, p)).norm()
            worst = max(worst, gap / (1.0 + p.norm()))
        rows.append(_check_row("dr", "dr_equals_t", params, worst, 1e-12))
    for params in (RotationParams.edelstein(k) for k in range(3, 7)):
        t2 = math.tan(0.5 * params.theta) ** 2
        worst = 0.0
        pts = rng.uniform(-10.0, 10.0, size=(config.samples, 4))
        for a, b, c, d in pts:
            p, q = PlanePoint(a, b), PlanePoint(c, d)
            scale = (1.0 + (p - q).norm_sq()) * (1.0 + t2)
            worst = max(worst, abs(verify_monotone_equality(params, p, q)) / scale)
        rows.append(_check_row("monotone", "monotone_equality", params, worst, 1e-12))
    return rows


def _check_row(suite, claim, params, worst, tol):
    return {
        "suite": suite, "claim": claim, "n": params.k, "k": None,
        "lhs": worst, "rhs": tol, "margin": tol - worst,
        "verdict": "pass" if worst <= tol else "fail",
    }


def _cert_row(suite, cert) -> dict:
    return {
        "suite": suite, "claim": cert.claim_id.value, "n": cert.n, "k": cert.k,
        "lhs": cert.lhs.value, "rhs": cert.rhs.value, "margin": cert.margin,
        "verdict": cert.verdict,
    }


def _require_blowup_range(n_max: int):
    if n_max < BLOWUP_MIN_N:
        raise ConfigError(
            f"blow-up suite needs n_max >= {BLOWUP_MIN_N}: the bounds on ||R^(s_n) 0||^2 "
            f"hold only for n >= {BLOWUP_MIN_N} (got n_max={n_max})"
        )


def cmd_verify(config: RunConfig) -> tuple[list[dict], bool]:
    """Run every certificate suite; returns the report rows and the overall verdict."""
    _require_blowup_range(config.n_max)
    xs = config.schedule
    rows = [_cert_row("vanishing", verify_vanishing_suborbit(xs, n, config.rel_tol))
            for n in range(1, config.vanishing_max + 1)]
    blow_range = range(max(config.n_min, BLOWUP_MIN_N), config.n_max + 1)
    rows += [_cert_row("blowup", verify_blowup_suborbit(xs, n, config.rel_tol)) for n in blow_range]
    for n in blow_range:
        rows += [_cert_row("window", c) for c in verify_fractional_window(n)]
    rows += _property_rows(config)
    return rows, all(r["verdict"] == "pass" for r in rows)


def cmd_dr(config: RunConfig) -> list[dict]:
    """Douglas-Rachford iterates from the origin in the product space, truncated at ``horizon``."""
    rows = []
    traj = dr_trajectory(config.schedule, Ell2Vector.zeros(0), range(config.n_min, config.n_max + 1), config.horizon)
    for r in traj:
        rows.append({
            "n": r.n, "norm_sq": r.norm_sq.value, "error_bound": r.norm_sq.error_bound,
            "shadow_norm_sq": r.shadow_norm_sq.value, "shadow_error_bound": r.shadow_norm_sq.error_bound,
        })
    return rows


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value settings file")
    common.add_argument("--xi", help="scale schedule, e.g. constant:1.0, invsqrt, geometric:0.5, "
                                     "list:1.0,0.9;tail:0.9")
    common.add_argument("--n-min", dest="n_min", type=int)
    common.add_argument("--n-max", dest="n_max", type=int)
    common.add_argument("--rel-tol", dest="rel_tol", type=float)
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out", help="output file (default: standard output)")

    parser = argparse.ArgumentParser(prog="edelstein", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    orbit = sub.add_parser("orbit", parents=[common], help="||R^n 0||^2 for a range of n")
    orbit.add_argument("--truncate-at-n", dest="truncate_at_n", action="store_const", const=True,
                       help="cut the series after K = n terms instead of adapting K")

    subo = sub.add_parser("suborbit", parents=[common], help="index families and their certificates")
    subo.add_argument("--family", choices=FAMILIES)
    subo.add_argument("--no-norms", dest="norms", action="store_const", const=False,
                      help="only list the indices and digit counts")

    ver = sub.add_parser("verify", parents=[common], help="run all certificate suites")
    ver.add_argument("--vanishing-max", dest="vanishing_max", type=int)
    ver.add_argument("--samples", type=int)
    ver.add_argument("--seed", type=int)

    dr = sub.add_parser("dr", parents=[common], help="product-space Douglas-Rachford trajectory")
    dr.add_argument("--horizon", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = build_config(args.command, args)
        status = EXIT_OK
        if args.command == "orbit":
            rows, columns = cmd_orbit(config), ORBIT_COLUMNS
        elif args.command == "suborbit":
            rows, columns = cmd_suborbit(config), SUBORBIT_COLUMNS
        elif args.command == "verify":
            rows, ok = cmd_verify(config)
            columns = VERIFY_COLUMNS
            status = EXIT_OK if ok else EXIT_FAIL
        else:
            rows, columns = cmd_dr(config), DR_COLUMNS
    except ConfigError as exc:
        print(f"edelstein: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        write_output(render(rows, columns, config.format), config.out)
    except OSError as exc:
        print(f"edelstein: cannot write {config.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    return status


if __name__ == "__main__":
    sys.exit(main())
