"""Command-line front end.

Subcommands::

    ancs sweep   --family KIND [--param k=v ...] --quantity Q --grid LO HI COUNT
    ancs verify  [SUITE]
    ancs zeros   --family sg|sgm [--range LO HI]
    ancs deform  --family KIND [--param k=v ...] --n N --eta ETA [--flavor asym|sym]
    ancs limits  --family KIND [--param k=v ...]

Exit codes: 0 success, 1 verification failure, 2 argument error, 3 domain
error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .an_core import bernoulli_transform, distribution, invert_nbar, mean_photon_number, moments
from .errors import DomainError, TruncationError
from .families import KINDS, FamilySpec, limit_checks, make_family
from .helstrom import find_hb_zeros, helstrom_of_nbar, helstrom_pure

EXIT_OK, EXIT_VERIFY, EXIT_ARGS, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3, 4

QUANTITIES = ("pn_table", "nbar_of_u", "mandel_of_nbar", "helstrom", "delta", "log_helstrom")
WORKERS_ENV = "ANCS_WORKERS"


class ArgumentError(ValueError):
    pass


@dataclass(frozen=True)
class SweepRequest:
    family: FamilySpec
    quantity: str
    axis: str
    grid: tuple
    eta: float = 1.0
    xi0: float = 0.5
    log_grid: bool = False
    n_max: int | None = None
    output: str = "-"
    fmt: str = "csv"

    def __post_init__(self):
        lo, hi, count = self.grid
        if self.quantity not in QUANTITIES:
            raise ArgumentError(f"unknown quantity {self.quantity!r}")
        if self.axis not in ("u", "nbar"):
            raise ArgumentError(f"axis must be u or nbar, got {self.axis!r}")
        if not lo < hi or int(count) < 2:
            raise ArgumentError("grid needs lo < hi and count >= 2")
        if self.log_grid and lo <= 0:
            raise ArgumentError("a log grid needs lo > 0")
        if not 0.0 < self.eta <= 1.0:
            raise ArgumentError(f"eta must lie in (0, 1], got {self.eta}")
        if not 0.0 < self.xi0 < 1.0:
            raise ArgumentError(f"xi0 must lie in (0, 1), got {self.xi0}")
        if self.fmt not in ("csv", "json"):
            raise ArgumentError(f"format must be csv or json, got {self.fmt!r}")

    def points(self) -> np.ndarray:
        lo, hi, count = self.grid
        if self.log_grid:
            return np.geomspace(lo, hi, int(count))
        return np.linspace(lo, hi, int(count))


# --------------------------------------------------------------------------
# parsing helpers


def _parse_params(items) -> dict:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise ArgumentError(f"--param expects name=value, got {item!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise ArgumentError(f"--param {name}: {value!r} is not a number") from None
    return out


def read_config(path: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment; ``param`` may repeat."""
    cfg = {"param": []}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ArgumentError(f"{path}:{lineno}: expected key = value")
            key = key.strip().replace("-", "_")
            value = value.strip()
            if key == "param":
                cfg["param"].append(value)
            else:
                cfg[key] = value
    return cfg


def _merge_config(args, cfg: dict, keys: dict):
    """Fill options left unset on the command line from ``cfg``; flags win."""
    for key, conv in keys.items():
        if getattr(args, key, None) is None and key in cfg:
            try:
                setattr(args, key, conv(cfg[key]))
            except ValueError:
                raise ArgumentError(f"config: bad value for {key}: {cfg[key]!r}") from None
    params = _parse_params(cfg.get("param"))
    params.update(_parse_params(args.param))
    args.params = params


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


def _grid(text):
    parts = text.split() if isinstance(text, str) else list(text)
    if len(parts) != 3:
        raise ValueError(text)
    return float(parts[0]), float(parts[1]), int(parts[2])


def _spec(args) -> FamilySpec:
    if args.family is None:
        raise ArgumentError("--family is required")
    try:
        return FamilySpec(args.family, args.params)
    except ValueError as exc:
        raise ArgumentError(str(exc)) from None


def _workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ArgumentError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


# --------------------------------------------------------------------------
# sweep


def _u_of(fam, nbar):
    if nbar >= fam.nbar_sup:
        if nbar == fam.nbar_sup:
            return math.inf
        raise DomainError(f"{fam.label()}: nbar={nbar} above {fam.nbar_sup}")
    return invert_nbar(fam, nbar)


def _columns(req: SweepRequest, n_cols: int = 0):
    base = ["u", "nbar"]
    return base + {
        "pn_table": [f"P_{n}" for n in range(n_cols)],
        "nbar_of_u": ["nbar_eta"],
        "mandel_of_nbar": ["mandel_q"],
        "helstrom": ["overlap_sq", "p_h", "p_h_gs", "delta"],
        "delta": ["delta"],
        "log_helstrom": ["log_p_h", "log_p_h_gs"],
    }[req.quantity]


def _row(fam, req: SweepRequest, x: float) -> list:
    if req.axis == "u":
        u = fam.check_u(x)
        nbar = mean_photon_number(fam, u)
    else:
        nbar = float(x)
        if nbar < 0:
            raise DomainError(f"nbar must be nonnegative, got {nbar}")
        u = _u_of(fam, nbar)
    q = req.quantity
    if q == "pn_table":
        if math.isinf(u):
            raise DomainError(f"{fam.label()}: no distribution at nbar={nbar}")
        p = distribution(fam, u)
        if req.eta < 1.0:
            p = bernoulli_transform(p, req.eta)
        return [u, nbar] + list(p.probs)
    if q == "nbar_of_u":
        return [u, nbar, req.eta * nbar]
    if q == "mandel_of_nbar":
        m = fam.closed("mandel_of_nbar", nbar)
        if m is None:
            m = moments(fam, u).mandel_q
        return [u, nbar, float(m)]
    rec = helstrom_of_nbar(fam, nbar, req.xi0, req.eta)
    gs = helstrom_pure(math.exp(-req.eta * nbar), req.xi0)
    if q == "helstrom":
        return [u, nbar, rec.overlap_sq, rec.p_h, gs, rec.delta]
    if q == "delta":
        return [u, nbar, rec.delta]
    return [u, nbar, _log(rec.p_h), _log(gs)]


def _log(x):
    return math.log(x) if x > 0 else -math.inf


def compute_sweep(req: SweepRequest):
    """Return ``(columns, rows)``; rows are in grid order regardless of worker count."""
    fam = make_family(req.family)
    pts = req.points()
    if req.axis == "u" and pts[-1] >= fam.radius_sq:
        raise DomainError(f"{fam.label()}: grid reaches u={pts[-1]} beyond R^2={fam.radius_sq}")
    workers = min(_workers(), len(pts))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda x: _row(fam, req, float(x)), pts))
    else:
        rows = [_row(fam, req, float(x)) for x in pts]
    n_cols = 0
    if req.quantity == "pn_table":
        width = max(len(r) for r in rows) - 2
        n_cols = width if req.n_max is None else req.n_max + 1
        rows = [(r + [0.0] * (n_cols + 2 - len(r)))[: n_cols + 2] for r in rows]
    return _columns(req, n_cols), rows


def _meta(req: SweepRequest) -> dict:
    lo, hi, count = req.grid
    return {
        "tool": f"ancs {__version__}",
        "family": make_family(req.family).label(),
        "quantity": req.quantity,
        "axis": req.axis,
        "grid": f"{lo!r} {hi!r} {int(count)} {'log' if req.log_grid else 'linear'}",
        "eta": repr(req.eta),
        "xi0": repr(req.xi0),
    }


def _fmt(x: float) -> str:
    return "%.16e" % x if math.isfinite(x) else ("nan" if math.isnan(x) else ("inf" if x > 0 else "-inf"))


def render_csv(meta: dict, columns, rows) -> str:
    lines = [f"# {k}: {v}" for k, v in meta.items()]
    lines.append(",".join(columns))
    lines.extend(",".join(_fmt(float(v)) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def render_json(meta: dict, columns, rows) -> str:
    body = {"meta": meta, "columns": list(columns), "rows": [[float(v) for v in r] for r in rows]}
    return json.dumps(body, indent=1) + "\n"


def _emit(text: str, path: str):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_sweep(args) -> int:
    if args.config:
        cfg = read_config(args.config)
    else:
        cfg = {}
    _merge_config(args, cfg, {"family": str, "quantity": str, "axis": str, "grid": _grid,
                              "eta": float, "xi0": float, "log_grid": _bool, "n_max": int,
                              "output": str, "format": str})
    if args.quantity is None or args.grid is None:
        raise ArgumentError("--quantity and --grid are required")
    axis = args.axis or ("u" if args.quantity in ("pn_table", "nbar_of_u") else "nbar")
    req = SweepRequest(
        family=_spec(args), quantity=args.quantity, axis=axis, grid=tuple(args.grid),
        eta=1.0 if args.eta is None else args.eta, xi0=0.5 if args.xi0 is None else args.xi0,
        log_grid=bool(args.log_grid), n_max=args.n_max, output=args.output or "-",
        fmt=args.format or "csv")
    columns, rows = compute_sweep(req)
    render = render_csv if req.fmt == "csv" else render_json
    _emit(render(_meta(req), columns, rows), req.output)
    return EXIT_OK


# --------------------------------------------------------------------------
# other subcommands


def cmd_verify(args) -> int:
    from .checks import SUITES, run_suite

    if args.suite != "all" and args.suite not in SUITES:
        raise ArgumentError(f"unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}")
    results = run_suite(args.suite)
    failed = 0
    for r in results:
        failed += not r.passed
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  deviation={r.deviation:.3e}"
              f"  tolerance={r.tolerance:.1e}")
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def cmd_zeros(args) -> int:
    _merge_config(args, {}, {})
    spec = _spec(args)
    if spec.kind not in ("sg", "sgm"):
        raise ArgumentError(f"zeros needs family sg or sgm, got {spec.kind}")
    lo, hi = args.range
    zs = find_hb_zeros(make_family(spec), lo, hi)
    out = [{"nbar": z.nbar, "u": z.u, "residual": z.residual} for z in zs]
    print(json.dumps({"family": spec.kind, "range": [lo, hi], "zeros": out}, indent=1))
    return EXIT_OK


def cmd_deform(args) -> int:
    from .deformed_binomial import DeformedSequence, asym_law, sym_law

    _merge_config(args, {}, {})
    spec = _spec(args)
    fam = make_family(spec)
    if args.n < 0:
        raise ArgumentError("--n must be nonnegative")
    if fam.support_max is not None and args.n > fam.support_max:
        raise DomainError(f"{fam.label()}: sequence ends at n={fam.support_max}")
    seq = DeformedSequence.from_family(fam, max(args.n, 1))
    law = asym_law(seq, args.n, args.eta) if args.flavor == "asym" else sym_law(seq, args.n, args.eta)
    columns = ["k", "p_k"] + (["string_prob"] if law.string_probs is not None else [])
    rows = []
    for k in range(args.n + 1):
        row = [float(k), float(law.probs[k])]
        if law.string_probs is not None:
            row.append(float(law.string_probs[k]))
        rows.append(row)
    meta = {"tool": f"ancs {__version__}", "family": fam.label(), "flavor": law.flavor,
            "n": str(args.n), "eta": repr(args.eta)}
    render = render_csv if args.format == "csv" else render_json
    _emit(render(meta, columns, rows), args.output)
    return EXIT_OK


def cmd_limits(args) -> int:
    _merge_config(args, {}, {})
    rep = limit_checks(_spec(args))
    if not rep.checks:
        print(f"no limiting checks defined for {rep.kind}")
    for c in rep.checks:
        print(f"{c.name}  deviation={c.deviation:.3e}")
    return EXIT_OK


# --------------------------------------------------------------------------


def _add_family(p, required=True):
    p.add_argument("--family", choices=KINDS, default=None, required=False,
                   help="coherent-state family")
    p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                   help="family parameter (repeatable), e.g. n_j=4, kappa=2, a=1, beta=2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ancs", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"ancs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="tabulate a quantity on a grid (CSV or JSON)")
    _add_family(p)
    p.add_argument("--quantity", choices=QUANTITIES)
    p.add_argument("--axis", choices=("u", "nbar"),
                   help="grid variable (default: u for pn_table and nbar_of_u, else nbar)")
    p.add_argument("--grid", nargs=3, type=float, metavar=("LO", "HI", "COUNT"))
    p.add_argument("--log-grid", action="store_const", const=True, default=None,
                   help="geometric instead of linear spacing")
    p.add_argument("--eta", type=float, help="detector efficiency (default 1)")
    p.add_argument("--xi0", type=float, help="prior of the vacuum (default 1/2)")
    p.add_argument("--n-max", type=int, help="pn_table: number of P_n columns minus one")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--output", "-o", help="output file (default stdout)")
    p.add_argument("--config", help="key = value file mirroring the flags; flags win")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the numerical check suites")
    p.add_argument("suite", nargs="?", default="all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("zeros", help="mean photon numbers where the Helstrom bound vanishes")
    _add_family(p)
    p.add_argument("--range", nargs=2, type=float, default=(0.0, 6.0), metavar=("LO", "HI"))
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("deform", help="deformed binomial law for n trials")
    _add_family(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--flavor", choices=("asym", "sym"), default="asym")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("limits", help="deviation from the limiting distributions")
    _add_family(p)
    p.set_defaults(func=cmd_limits)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ArgumentError as exc:
        print(f"ancs: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except (DomainError, TruncationError) as exc:
        print(f"ancs: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"ancs: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"ancs: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
