"""Command-line interface: ``sixvertex {z,efp,hgen,sweep,validate}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
import xml.etree.ElementTree as ET
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import mpmath

from . import contour, detform, efp, oracle, orthopoly, qism, validation
from .errors import CapExceededError, ConditioningWarning, SixVertexError
from .model import HomParams, InhomParams
from .numerics import get_context

MIN_PRECISION = 32
DEFAULT_PRECISION = 128
OUTPUT_DIGITS = 50
CSV_HEADER = ("N", "r", "s", "value", "method", "imag_residual")

Z_METHODS_HOM = ("oracle", "det-hom", "qism")
Z_METHODS_INHOM = ("oracle", "det-inhom", "qism")
EFP_METHODS_HOM = ("det-hom", "ortho", "mir1", "mir2", "mir3", "oracle", "qism")
EFP_METHODS_INHOM = ("sum-inhom", "oracle", "qism")
HGEN_METHODS = ("ortho", "oracle")
# tag for cells fixed by the boundary conditions rather than computed
EXACT_TAG = "exact"


class UsageError(Exception):
    """Invalid flags or parameters; exit status 2."""


@dataclass
class Row:
    n: int
    r: int | None
    s: int | None
    value: object
    method: str

    def cells(self, digits: int) -> list[str]:
        return [str(self.n), "" if self.r is None else str(self.r), "" if self.s is None else str(self.s),
                format_value(self.value, digits), self.method, format_imag(self.value)]


def format_value(x, digits: int = OUTPUT_DIGITS) -> str:
    if isinstance(x, int):
        return str(x)
    return mpmath.nstr(mpmath.re(x), digits, min_fixed=-5, max_fixed=digits)


def format_imag(x) -> str:
    if isinstance(x, int):
        return "0"
    im = abs(mpmath.im(x))
    return mpmath.nstr(im, 3, min_fixed=0, max_fixed=0) if im else "0"


# ---------------------------------------------------------------------------
# parameters and method dispatch


def _params(args):
    """``HomParams`` or, when ``--lambdas``/``--nus`` are given, ``InhomParams``."""
    try:
        if args.lambdas or args.nus:
            lams = args.lambdas or []
            nus = args.nus or ["0"] * len(lams)
            if args.N is not None and args.N != len(lams):
                raise UsageError("--N disagrees with the number of --lambdas")
            return InhomParams(lams, nus, args.eta, args.precision)
        return HomParams(args.lambda_, args.eta, args.precision)
    except UsageError:
        raise
    except (ValueError, SixVertexError) as exc:
        raise UsageError(f"bad parameters: {exc}") from exc


def _size(args, p) -> int:
    n = p.n if isinstance(p, InhomParams) else args.N
    if n is None:
        raise UsageError("--N is required")
    if n < 1:
        raise UsageError("--N must be positive")
    return n


def z_value(method: str, p, n: int):
    if method == "oracle":
        return oracle.brute_z(p if isinstance(p, InhomParams) else p.to_inhom(n))
    if method == "qism":
        return qism.z_qism(p if isinstance(p, InhomParams) else p.to_inhom(n))
    if method == "det-hom":
        return detform.z_hom(p, n)
    if method == "det-inhom":
        return detform.z_ik_inhom(p)
    raise UsageError(f"unknown method {method!r}")


def z_applicable(method: str, n: int) -> bool:
    if method == "oracle":
        return n <= oracle.CAP
    if method == "qism":
        return n <= qism.STATE_CAP
    return True


def efp_value(method: str, p, n: int, r: int, s: int):
    if isinstance(p, HomParams):
        inhom = p.to_inhom(n)
        table = {
            "det-hom": lambda: efp.efp_hom(p, n, r, s),
            "ortho": lambda: orthopoly.efp_ortho(p, n, r, s),
            "mir1": lambda: contour.efp_mir1(p, n, r, s),
            "mir2": lambda: contour.efp_mir2(p, n, r, s),
            "mir3": lambda: contour.efp_mir3(p, n, r, s),
            "oracle": lambda: oracle.brute_efp(inhom, r, s),
            "qism": lambda: qism.efp_qism(inhom, r, s),
        }
    else:
        table = {
            "sum-inhom": lambda: efp.efp_inhom(p, r, s),
            "oracle": lambda: oracle.brute_efp(p, r, s),
            "qism": lambda: qism.efp_qism(p, r, s),
        }
    if method not in table:
        raise UsageError(f"method {method!r} does not apply to these parameters")
    return table[method]()


def efp_applicable(method: str, n: int, s: int) -> bool:
    """Whether ``method`` stays within its size caps at (N, s)."""
    caps = {
        "det-hom": n <= efp.DEFAULT_N_CAP and s <= efp.DEFAULT_S_CAP,
        "ortho": n <= orthopoly.JET_BUDGET and s <= efp.DEFAULT_S_CAP,
        "mir1": s <= contour.S_CAP and n <= orthopoly.JET_BUDGET,
        "mir2": s <= contour.S_CAP and n <= orthopoly.JET_BUDGET,
        "mir3": s <= contour.S_CAP_MIR3 and n <= oracle.CAP,
        "oracle": n <= oracle.CAP,
        "qism": n <= qism.STATE_CAP,
        "sum-inhom": True,
    }
    return caps.get(method, False)


def _choose(requested: str, candidates: tuple, applicable) -> list[str]:
    if requested == "all":
        chosen = [m for m in candidates if applicable(m)]
        if not chosen:
            raise UsageError("no method applies at this size")
        return chosen
    if requested not in candidates:
        raise UsageError(f"method {requested!r} does not apply here; choose from {', '.join(candidates)} or all")
    if not applicable(requested):
        raise UsageError(f"method {requested!r} exceeds its size cap here")
    return [requested]


def max_pairwise_deviation(values: list):
    dev = mpmath.mpf(0)
    for i, x in enumerate(values):
        for y in values[i + 1:]:
            scale = max(abs(x), abs(y))
            d = abs(x - y) / scale if scale else abs(x - y)
            dev = max(dev, d)
    return dev


def _check_index(name: str, value, n: int):
    if value is None:
        raise UsageError(f"--{name} is required")
    if not 1 <= value <= n:
        raise UsageError(f"--{name} must lie in 1..{n}")


# ---------------------------------------------------------------------------
# commands


def cmd_z(args) -> tuple[list[Row], object]:
    p = _params(args)
    n = _size(args, p)
    candidates = Z_METHODS_INHOM if isinstance(p, InhomParams) else Z_METHODS_HOM
    methods = _choose(args.method or "det-" + ("inhom" if isinstance(p, InhomParams) else "hom"),
                      candidates, lambda m: z_applicable(m, n))
    rows = [Row(n, None, None, z_value(m, p, n), m) for m in methods]
    return rows, max_pairwise_deviation([row.value for row in rows])


def cmd_efp(args) -> tuple[list[Row], object]:
    p = _params(args)
    n = _size(args, p)
    _check_index("r", args.r, n)
    _check_index("s", args.s, n)
    candidates = EFP_METHODS_INHOM if isinstance(p, InhomParams) else EFP_METHODS_HOM
    default = "sum-inhom" if isinstance(p, InhomParams) else "det-hom"
    methods = _choose(args.method or default, candidates, lambda m: efp_applicable(m, n, args.s))
    rows = [Row(n, args.r, args.s, efp_value(m, p, n, args.r, args.s), m) for m in methods]
    return rows, max_pairwise_deviation([row.value for row in rows])


def cmd_hgen(args) -> tuple[list[Row], object]:
    """Coefficients ``H_N^(r)`` of the generating function, one row per r."""
    p = _params(args)
    if isinstance(p, InhomParams):
        raise UsageError("hgen is defined for homogeneous parameters only")
    n = _size(args, p)
    methods = _choose(args.method or "ortho", HGEN_METHODS,
                      lambda m: n <= (oracle.CAP if m == "oracle" else orthopoly.JET_BUDGET))
    rows, per_method = [], []
    for m in methods:
        vals = list(orthopoly.boundary_H(p, n)) if m == "ortho" else oracle.brute_first_row_c(p, n)
        per_method.append(vals)
        rows.extend(Row(n, r, None, v, m) for r, v in enumerate(vals, 1))
    dev = max((max_pairwise_deviation(list(col)) for col in zip(*per_method)), default=mpmath.mpf(0))
    return rows, dev


def _pack(x):
    """Raw mantissa tuples pickle exactly; context-bound mpf objects do not."""
    if hasattr(x, "_mpc_"):
        return "c", x._mpc_
    return "r", x._mpf_


def _unpack(ctx, packed):
    kind, raw = packed
    return ctx.make_mpc(raw) if kind == "c" else ctx.make_mpf(raw)


def _sweep_cell(task):
    """Evaluate one grid cell; runs in worker processes, so it takes plain data."""
    method, lam, eta, dps, n, r, s = task
    p = HomParams(_unpack(get_context(dps), lam), _unpack(get_context(dps), eta), dps)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConditioningWarning)
        value = efp_value(method, p, n, r, s)
    return _pack(value if hasattr(value, "_mpc_") else p.ctx.mpf(value))


def cmd_sweep(args) -> tuple[list[Row], object]:
    p = _params(args)
    if isinstance(p, InhomParams):
        raise UsageError("sweep is defined for homogeneous parameters only")
    n = _size(args, p)
    smax = args.smax if args.smax is not None else 1
    if not 1 <= smax <= n:
        raise UsageError(f"--smax must lie in 1..{n}")
    method = args.method or "det-hom"
    if method == "all" or method not in EFP_METHODS_HOM:
        raise UsageError(f"sweep needs a single method from {', '.join(EFP_METHODS_HOM)}")
    if not efp_applicable(method, n, smax):
        raise UsageError(f"method {method!r} cannot cover N = {n}, s up to {smax}")
    cells = [(r, s) for s in range(1, smax + 1) for r in range(1, n + 1)]
    # cells fixed by the boundary: s > r vanish, r = N is the left boundary
    tasks = [(method, _pack(p.lam), _pack(p.eta), p.dps, n, r, s) for r, s in cells if s <= r < n]
    if args.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            values = list(pool.map(_sweep_cell, tasks))
    else:
        values = [_sweep_cell(t) for t in tasks]
    computed = {(t[5], t[6]): _unpack(p.ctx, v) for t, v in zip(tasks, values)}
    rows, dev = [], mpmath.mpf(0)
    for r, s in sorted(cells):
        if (r, s) in computed:
            rows.append(Row(n, r, s, computed[r, s], method))
        elif s > r:
            rows.append(Row(n, r, s, 0, EXACT_TAG))
        else:
            rows.append(Row(n, r, s, 1, EXACT_TAG))
    return rows, dev


# ---------------------------------------------------------------------------
# output


def render_csv(rows: list[Row], digits: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.cells(digits))
    return buf.getvalue()


def render_json(rows: list[Row], digits: int, dev=None) -> str:
    out = [dict(zip(CSV_HEADER, row.cells(digits))) for row in rows]
    return json.dumps(out, indent=2) + "\n"


def render_text(rows: list[Row], digits: int, dev=None) -> str:
    lines = []
    for row in rows:
        where = f"N={row.n}" + (f" r={row.r}" if row.r is not None else "") + (f" s={row.s}" if row.s is not None else "")
        lines.append(f"{where}  {row.method:<9}  {format_value(row.value, digits)}")
    if dev is not None and len({row.method for row in rows}) > 1:
        lines.append(f"max pairwise relative deviation: {mpmath.nstr(dev, 3)}")
    return "\n".join(lines) + "\n"


def render_svg(rows: list[Row], n: int, smax: int, cell: int = 32) -> str:
    """Grayscale heatmap, one rect per (r, s); 0 is white and 1 is black.

    Columns run over r = N..1 from left to right, matching the lattice where
    columns are numbered from the right; rows run over s from the top.
    """
    ET.register_namespace("", "http://www.w3.org/2000/svg")
    svg = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg", "version": "1.1",
        "width": str(cell * n), "height": str(cell * smax),
        "viewBox": f"0 0 {cell * n} {cell * smax}",
    })
    for row in rows:
        v = min(max(float(mpmath.re(row.value)), 0.0), 1.0)
        level = round(255 * (1 - v))
        rect = ET.SubElement(svg, "rect", {
            "x": str(cell * (n - row.r)), "y": str(cell * (row.s - 1)),
            "width": str(cell), "height": str(cell),
            "fill": f"rgb({level},{level},{level})",
        })
        ET.SubElement(rect, "title").text = f"r={row.r} s={row.s} F={format_value(row.value, 12)}"
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(svg, encoding="unicode") + "\n"


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# parser


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _precision(text: str) -> int:
    value = _positive_int(text)
    if value < MIN_PRECISION:
        raise argparse.ArgumentTypeError(f"precision must be at least {MIN_PRECISION} digits")
    return value


def _tolerance(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError("tolerance must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sixvertex",
        description="Domain-wall six-vertex model: partition function and emptiness formation probability.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lambda", dest="lambda_", default="pi/2",
                        help="spectral parameter, decimal radians or a multiple of pi such as pi/2")
    common.add_argument("--eta", default="pi/6", help="crossing parameter (same formats as --lambda)")
    common.add_argument("--lambdas", nargs="+", metavar="X",
                        help="column parameters for an inhomogeneous lattice (right to left)")
    common.add_argument("--nus", nargs="+", metavar="X", help="row parameters (top down); default all zero")
    common.add_argument("--precision", type=_precision, default=DEFAULT_PRECISION,
                        help=f"working decimal digits (at least {MIN_PRECISION})")
    common.add_argument("--format", choices=("text", "csv", "json", "svg"), default="text")
    common.add_argument("--output", help="write to this file instead of standard output")
    common.add_argument("--tolerance", type=_tolerance, default=1e-40,
                        help="largest allowed cross-method relative deviation")
    common.add_argument("--workers", type=_positive_int, default=1, help="processes for sweep cells")
    common.add_argument("--digits", type=_positive_int, default=None,
                        help=f"significant digits printed (default {OUTPUT_DIGITS}, at most the precision)")

    p_z = sub.add_parser("z", parents=[common], help="partition function")
    p_z.add_argument("--N", type=_positive_int)
    p_z.add_argument("--method", help=f"one of {', '.join(Z_METHODS_HOM + ('det-inhom',))} or all")

    p_efp = sub.add_parser("efp", parents=[common], help="emptiness formation probability F_N^(r,s)")
    p_efp.add_argument("--N", type=_positive_int)
    p_efp.add_argument("--r", type=_positive_int)
    p_efp.add_argument("--s", type=_positive_int)
    p_efp.add_argument("--method", help=f"one of {', '.join(EFP_METHODS_HOM + ('sum-inhom',))} or all")

    p_h = sub.add_parser("hgen", parents=[common], help="coefficients H_N^(r) of the generating function h_N(z)")
    p_h.add_argument("--N", type=_positive_int)
    p_h.add_argument("--method", help="ortho, oracle or all")

    p_sw = sub.add_parser("sweep", parents=[common], help="grid of F_N^(r,s) for 1 <= r <= N, 1 <= s <= smax")
    p_sw.add_argument("--N", type=_positive_int)
    p_sw.add_argument("--smax", type=_positive_int)
    p_sw.add_argument("--method", help=f"one of {', '.join(EFP_METHODS_HOM)}")

    p_v = sub.add_parser("validate", help="run the named numerical checks and print a JSON report")
    p_v.add_argument("--only", nargs="+", metavar="NAME",
                     help=f"groups ({', '.join(validation.GROUPS)}) or individual check names")
    p_v.add_argument("--precision", type=_precision, default=DEFAULT_PRECISION)
    p_v.add_argument("--format", choices=("json", "text"), default="json")
    p_v.add_argument("--output")
    p_v.add_argument("--seed", type=int, default=validation.DEFAULT_SEED)
    p_v.add_argument("--list", action="store_true", help="list the checks and exit")
    return parser


def _validate(args) -> int:
    if args.list:
        for c in validation.CHECKS:
            _emit(f"{c.group:<12} {c.name:<24} {c.anchor}\n", None)
        return 0
    try:
        checks = validation.select(args.only)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    records = [validation.run_check(c, args.precision, args.seed) for c in checks]
    if args.format == "json":
        text = json.dumps(records, indent=2) + "\n"
    else:
        text = "".join(
            f"{'PASS' if r['pass'] else 'FAIL'}  {r['name']:<24} dev {r['max_dev']:<10} tol {r['tol']}\n"
            + "".join(f"      warning: {w}\n" for w in r["warnings"])
            for r in records
        )
    _emit(text, args.output)
    return 0 if all(r["pass"] for r in records) else 1


COMMANDS = {"z": cmd_z, "efp": cmd_efp, "hgen": cmd_hgen, "sweep": cmd_sweep}


def run(args) -> int:
    if args.command == "validate":
        return _validate(args)
    if args.format == "svg" and args.command != "sweep":
        raise UsageError("svg output is available for sweep only")
    digits = min(args.digits or OUTPUT_DIGITS, args.precision)
    rows, dev = COMMANDS[args.command](args)
    if args.format == "csv":
        text = render_csv(rows, digits)
    elif args.format == "json":
        text = render_json(rows, digits)
    elif args.format == "svg":
        text = render_svg(rows, rows[0].n, max(row.s for row in rows))
    else:
        text = render_text(rows, digits, dev)
    _emit(text, args.output)
    if dev > args.tolerance:
        print(f"sixvertex: cross-method deviation {mpmath.nstr(dev, 3)} exceeds tolerance {args.tolerance:g}",
              file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except (UsageError, CapExceededError) as exc:
        parser.print_usage(sys.stderr)
        print(f"sixvertex: error: {exc}", file=sys.stderr)
        return 2
    except (SixVertexError, ArithmeticError) as exc:
        print(f"sixvertex: numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
