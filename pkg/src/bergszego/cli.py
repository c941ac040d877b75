"""Command-line front end.  Every command writes CSV (header row first).

Exit codes: 0 success, 1 tolerance failure, 2 usage or parse error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import re
import sys
from dataclasses import dataclass, field

from .core import PolyObservable
from .boundary_form import measure_audit
from .grammar import PolyParseError, format_poly, parse_poly
from .kernels import KernelSingularityError, boundary_distance, kernel_diag_ratio
from .projections import DIMENSION, bergman_apply, szego_apply
from .quadrature import (
    DEFAULT_RESOLUTION,
    MEASURE,
    QuadratureError,
    Resolution,
    disc_rule,
    exact_moment,
    integrate,
    sphere3_rule,
)
from .stokes import ball_terms, disc_terms, residual_table

log = logging.getLogger("bergszego")

EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

MAX_NORM = 0.95

_REAL = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^(?:(?P<re>{_REAL})(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i|(?P<only_im>{_REAL})i|(?P<only_re>{_REAL}))$")


class UsageError(ValueError):
    pass


def parse_complex(text: str) -> complex:
    """Parse ``a+bi``, ``bi`` or ``a`` (no spaces)."""
    m = _COMPLEX_RE.match(text.strip())
    if not m:
        raise UsageError(f"bad complex number {text!r}; expected a+bi")
    if m["only_re"] is not None:
        return complex(float(m["only_re"]), 0.0)
    if m["only_im"] is not None:
        return complex(0.0, float(m["only_im"]))
    return complex(float(m["re"]), float(m["im"]))


def parse_point(text: str) -> tuple[complex, ...]:
    """A complex number, or a parenthesised comma-separated tuple of them."""
    text = text.strip()
    if text.startswith("("):
        if not text.endswith(")"):
            raise UsageError(f"unbalanced parentheses in {text!r}")
        return tuple(parse_complex(p) for p in text[1:-1].split(","))
    return (parse_complex(text),)


def fmt_real(x: float) -> str:
    return format(x, ".17g")


def fmt_complex(z: complex) -> str:
    im = z.imag
    sign = "-" if math.copysign(1.0, im) < 0 else "+"
    return f"{fmt_real(z.real)}{sign}{fmt_real(abs(im))}i"


def fmt_point(coords) -> str:
    if len(coords) == 1:
        return fmt_complex(coords[0])
    return "(" + ",".join(fmt_complex(c) for c in coords) + ")"


@dataclass
class RunConfig:
    command: str
    domain: str = "disc"
    poly_spec: str = "1"
    z_list: list = field(default_factory=list)
    resolution: Resolution | None = None
    tolerance: float = 1e-8
    output_path: str | None = None
    workers: int = 1
    kmax: int = 4
    mmax: int = 4
    samples: int = 11
    case: str = "disc-reproduce"

    def __post_init__(self):
        if not self.tolerance > 0:
            raise UsageError("tolerance must be positive")
        for z in self.z_list:
            norm = math.sqrt(sum(abs(c) ** 2 for c in z))
            if norm > MAX_NORM:
                raise UsageError(f"point {fmt_point(z)} has |z| = {norm:.6g} > {MAX_NORM}")


# commands


def cmd_verify(cfg: RunConfig, out) -> int:
    n = DIMENSION[cfg.domain]
    f = parse_poly(cfg.poly_spec, n)
    if not cfg.z_list:
        raise UsageError("verify needs at least one --z")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["domain", "f", "z", "szego", "bergman", "residual", "stokes_defect", "pass"])
    ok = True
    for z in cfg.z_list:
        if len(z) != n:
            raise UsageError(f"point {fmt_point(z)} has dimension {len(z)}, domain {cfg.domain} needs {n}")
        run = disc_terms if cfg.domain == "disc" else ball_terms
        rep = run(f, z, cfg.resolution, cfg.workers)
        passed = rep.stokes_defect <= cfg.tolerance
        ok &= passed
        writer.writerow(
            [
                cfg.domain,
                format_poly(f),
                fmt_point(z),
                fmt_complex(rep.szego_side),
                fmt_complex(rep.bergman_term),
                fmt_complex(rep.residual),
                fmt_real(rep.stokes_defect),
                "true" if passed else "false",
            ]
        )
    return EXIT_OK if ok else EXIT_TOLERANCE


def _index_str(idx) -> str:
    d = idx.degrees
    return str(d[0]) if len(d) == 1 else "(" + ",".join(map(str, d)) + ")"


def cmd_residual_table(cfg: RunConfig, out) -> int:
    rows = residual_table(cfg.domain, cfg.kmax, cfg.mmax)
    writer = csv.writer(out, lineterminator="\n")
    head = ["k", "m"] if cfg.domain == "disc" else ["alpha", "beta"]
    writer.writerow(head + ["residual", "deviation"])
    for row in rows:
        writer.writerow(
            [_index_str(row.holo), _index_str(row.anti), format_poly(row.residual), "1" if row.deviates else "0"]
        )
    deviations = sum(r.deviates for r in rows)
    log.info("%d of %d rows have nonzero residual", deviations, len(rows))
    return EXIT_OK


def cmd_ratio(cfg: RunConfig, out, rmax: float = 0.95) -> int:
    if cfg.samples < 2:
        raise UsageError("ratio needs at least 2 samples")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["abs_z", "delta", "ratio", "ratio_over_delta"])
    ok = True
    for i in range(cfg.samples):
        r = rmax * i / (cfg.samples - 1)
        z = (r,) if cfg.domain == "disc" else (r, 0.0)
        delta = boundary_distance(z)
        ratio = kernel_diag_ratio(cfg.domain, z)
        ok &= 0 < ratio / delta <= 1
        writer.writerow([fmt_real(r), fmt_real(delta), fmt_real(ratio), fmt_real(ratio / delta)])
    return EXIT_OK if ok else EXIT_TOLERANCE


def _conv_disc_reproduce():
    f = PolyObservable.monomial((3,))
    z = (0.5,)
    exact = 0.125
    for nt in (8, 16, 32, 64, 128, 256):
        r = Resolution(nt, 16)
        err = max(
            abs(szego_apply("disc", f, z, Resolution(nt, 2)).value - exact),
            abs(bergman_apply("disc", f, z, r).value - exact),
        )
        yield f"n_theta={nt} n_radial=16", err


def _conv_ball_mass():
    for nr in (2, 4, 8, 16):
        rule = sphere3_rule(Resolution(8, nr), latitude="s")
        yield f"n_theta=8 n_radial={nr} latitude=s", abs(rule.mass() - MEASURE["sphere3"])


def _conv_disc_moment():
    exact = complex(exact_moment("disc", (2,), (2,)))
    for nr in (2, 4, 8, 16):
        r = Resolution(16, nr)
        got = integrate(disc_rule(r), lambda z: (z * z.conjugate()) ** 2)
        yield f"n_theta=16 n_radial={nr}", abs(got - exact)


CONVERGENCE_CASES = {
    "disc-reproduce": _conv_disc_reproduce,
    "ball-mass": _conv_ball_mass,
    "disc-moment": _conv_disc_moment,
}

# Errors below this are roundoff and are not required to keep decreasing.
ROUNDOFF_FLOOR = 1e-13


def cmd_convergence(cfg: RunConfig, out) -> int:
    try:
        case = CONVERGENCE_CASES[cfg.case]
    except KeyError:
        raise UsageError(f"unknown case {cfg.case!r}; choose from {sorted(CONVERGENCE_CASES)}") from None
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["resolution", "error"])
    errors = []
    for label, err in case():
        errors.append(err)
        writer.writerow([label, fmt_real(err)])
    monotone = all(b <= a or b <= ROUNDOFF_FLOOR for a, b in zip(errors[1:], errors[2:]))
    return EXIT_OK if monotone else EXIT_TOLERANCE


def cmd_measure_audit(cfg: RunConfig, out) -> int:
    f = parse_poly(cfg.poly_spec, 2)
    res = measure_audit(f, cfg.resolution)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["f", "form_mass", "sigma_mass", "ratio"])
    ratio = res["ratio"]
    writer.writerow(
        [
            res["f"],
            fmt_complex(res["form_mass"]),
            fmt_complex(res["sigma_mass"]),
            "" if ratio is None else fmt_complex(ratio),
        ]
    )
    if ratio is not None:
        print(f"form mass / surface-measure mass = {ratio.real:.6f}", file=sys.stderr)
    else:
        print(f"form mass = {res['form_mass'].real:.6g} (reference mass is zero)", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "residual-table": cmd_residual_table,
    "ratio": cmd_ratio,
    "convergence": cmd_convergence,
    "measure-audit": cmd_measure_audit,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bergszego", description="Bergman/Szegő kernel verification workbench"
    )
    parser.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, domain=True):
        if domain:
            p.add_argument("--domain", choices=["disc", "ball2"])
        p.add_argument("--n-theta", type=int)
        p.add_argument("--n-radial", type=int)
        p.add_argument("--output", "-o")
        p.add_argument("--workers", type=int)

    p = sub.add_parser("verify", help="Stokes decomposition and residual at points")
    common(p)
    p.add_argument("--f", dest="poly")
    p.add_argument("--z", action="append", help="a+bi, or (a+bi,c+di) on ball2; repeatable")
    p.add_argument("--tol", type=float)

    p = sub.add_parser("residual-table", help="exact Szegő minus Bergman residual per monomial")
    common(p)
    p.add_argument("--kmax", type=int)
    p.add_argument("--mmax", type=int)

    p = sub.add_parser("ratio", help="diagonal ratio S(z,z)/K(z,z) against boundary distance")
    common(p)
    p.add_argument("--samples", type=int)

    p = sub.add_parser("convergence", help="error against exact values at growing resolution")
    common(p, domain=False)
    p.add_argument("--case", choices=sorted(CONVERGENCE_CASES))

    p = sub.add_parser("measure-audit", help="mass of the 1/16 boundary 3-form on the sphere")
    common(p, domain=False)
    p.add_argument("--f", dest="poly")
    return parser


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    return data


# RunConfig field names accepted in config files as aliases of the flag names
CONFIG_ALIASES = {
    "poly_spec": "f",
    "polySpec": "f",
    "z_list": "z",
    "zList": "z",
    "tolerance": "tol",
    "output_path": "output",
    "outputPath": "output",
}


def make_config(args: argparse.Namespace) -> RunConfig:
    base = _load_config(args.config) if args.config else {}
    base = {CONFIG_ALIASES.get(k, k).replace("-", "_"): v for k, v in base.items()}
    res = base.pop("resolution", None)
    if isinstance(res, dict):
        base.setdefault("n_theta", res.get("n_theta", res.get("nTheta")))
        base.setdefault("n_radial", res.get("n_radial", res.get("nRadial")))
    flags = {k: v for k, v in vars(args).items() if v is not None}

    def pick(name, key=None, default=None):
        key = key or name
        if key in flags:
            return flags[key]
        return base.get(name, default)

    domain = pick("domain", default="disc")
    if domain not in DIMENSION:
        raise UsageError(f"unknown domain {domain!r}")
    n_theta = pick("n_theta")
    n_radial = pick("n_radial")
    resolution = None
    if n_theta is not None or n_radial is not None:
        default = DEFAULT_RESOLUTION["disc" if domain == "disc" else "ball4"]
        try:
            resolution = Resolution(n_theta or default.n_theta, n_radial or default.n_radial)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    z_raw = flags.get("z", base.get("z", []))
    if isinstance(z_raw, str):
        z_raw = [z_raw]
    cfg = RunConfig(
        command=args.command,
        domain=domain,
        poly_spec=pick("f", "poly", "1"),
        z_list=[parse_point(str(z)) for z in z_raw],
        resolution=resolution,
        tolerance=float(pick("tol", default=1e-8)),
        output_path=pick("output"),
        workers=int(pick("workers", default=1)),
        kmax=int(pick("kmax", default=4)),
        mmax=int(pick("mmax", default=4)),
        samples=int(pick("samples", default=11)),
        case=pick("case", default="disc-reproduce"),
    )
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = make_config(args)
        buf = io.StringIO()
        code = COMMANDS[cfg.command](cfg, buf)
    except (UsageError, PolyParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # precondition violations from the library (dimension, |z| too large)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, KernelSingularityError, ArithmeticError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = buf.getvalue()
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
