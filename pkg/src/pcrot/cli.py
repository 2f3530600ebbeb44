"""Command-line front end.

Numbers are read exactly: "3/4", "0.27" and "2" become rationals.  Anything
else (pi/4, (sqrt(5)-1)/2, ...) is evaluated in interval arithmetic and
becomes an approximate scalar with a rigorous error bound.
"""

from __future__ import annotations

import argparse
import ast
import colorsys
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import gcd

from mpmath.ctx_iv import MPIntervalContext
from mpmath.libmp import finf, fnan, fninf, to_rational

from . import __version__
from .core import (
    Approx,
    BoundaryAmbiguous,
    Family,
    InvalidParameters,
    MapSpec,
    _CTX,
    classify,
    cmp,
    fixed_point_check,
    is_exact,
    to_float,
)
from .dynamics import (
    HypothesisViolated,
    InsufficientLength,
    attractor,
    attractor_code,
    code,
    complexity,
    conjugacy_residual,
    rotation_code,
)
from .inverse import FixedPointRegion, Inconclusive, OutOfDomain, invert, rotation_number
from .regions import (
    InfeasibleGoal,
    Membership,
    Region,
    SynthesisTarget,
    contains,
    enumerate_regions,
    region,
    synthesize,
)
from .series import PrecisionExhausted, RotationTarget

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
MAX_FAREY = 30

_IV = MPIntervalContext()
_IV.prec = 240


class UsageError(ValueError):
    pass


# -- number parsing -----------------------------------------------------------------

_FUNCS = {"sqrt": _IV.sqrt, "exp": _IV.exp, "log": _IV.log, "sin": _IV.sin, "cos": _IV.cos}
_NAMES = {"pi": lambda: _IV.pi, "e": lambda: _IV.e}


def _iv_eval(node):
    if isinstance(node, ast.Expression):
        return _iv_eval(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        q = Fraction(repr(node.value)) if isinstance(node.value, float) else Fraction(node.value)
        return _IV.mpf(q.numerator) / q.denominator
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]()
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _iv_eval(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        left, right = _iv_eval(node.left), _iv_eval(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            return left / right
        if isinstance(node.op, ast.Pow) and isinstance(node.right, ast.Constant) and isinstance(node.right.value, int):
            return left ** node.right.value
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS and len(node.args) == 1:
        return _FUNCS[node.func.id](_iv_eval(node.args[0]))
    raise UsageError(f"unsupported expression element: {ast.dump(node)[:40]}")


def parse_scalar(text: str, mode: str = "auto"):
    """Rational literal -> Fraction; expression -> Approx; mode 'approx' lifts everything."""
    text = text.strip()
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        q = None
    if q is not None:
        return Approx(q) if mode == "approx" else q
    if mode == "exact":
        raise UsageError(f"{text!r} is not a rational literal (exact mode)")
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise UsageError(f"cannot parse number {text!r}") from exc
    try:
        iv = _iv_eval(tree)
    except ZeroDivisionError as exc:
        raise UsageError(f"division by zero in {text!r}") from exc
    if any(t in (finf, fninf, fnan) for t in iv._mpi_):
        raise UsageError(f"{text!r} does not evaluate to a finite number")
    lo, hi = (Fraction(int(p), int(r)) for p, r in (to_rational(t) for t in iv._mpi_))
    return Approx((lo + hi) / 2, (hi - lo) / 2)


def enc(x):
    """JSON encoding: exact values as "p/q" strings, approximate ones as value/err."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Approx):
        return {"value": _CTX.nstr(x.value, 30), "err": _CTX.nstr(x.err, 3)}
    if isinstance(x, (list, tuple)):
        return [enc(v) for v in x]
    if isinstance(x, dict):
        return {k: enc(v) for k, v in x.items()}
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _fmt(x) -> str:
    """Plain text for CSV cells."""
    if isinstance(x, Approx):
        return _CTX.nstr(x.value, 20)
    return str(x)


# -- argument helpers -------------------------------------------------------------

def _family(args) -> Family:
    return Family(parse_scalar(args.lam, args.mode), parse_scalar(args.d, args.mode))


def _target(args, required: bool = True):
    if args.rho is None:
        if required:
            raise UsageError("--rho is required")
        return None
    rho = parse_scalar(args.rho, args.mode)
    if args.k is not None:
        if is_exact(rho):
            raise UsageError("--k declares a resonance of an irrational rho")
        return RotationTarget(rho, k=args.k)
    if args.alpha is None:
        raise UsageError("give --alpha or --k")
    return RotationTarget(rho, parse_scalar(args.alpha, args.mode))


def _spec(args) -> MapSpec:
    if args.delta is None or args.a is None:
        raise UsageError("--delta and --a are required")
    return MapSpec(parse_scalar(args.lam, args.mode), parse_scalar(args.d, args.mode),
                   parse_scalar(args.delta, args.mode), parse_scalar(args.a, args.mode))


def _header(args, **extra) -> dict:
    out = {"lambda": parse_scalar(args.lam, args.mode), "d": parse_scalar(args.d, args.mode)}
    out.update(extra)
    out["mode"] = args.mode
    return out


def _emit(args, payload: dict):
    text = json.dumps(enc(payload), indent=2, sort_keys=False) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _region_json(reg: Region) -> dict:
    rational = reg.target.rational
    out = {
        "delta_lo": reg.delta_lo,
        "delta_hi": reg.delta_hi,
        "a_offset_lo": reg.a_offset_lo,
        "a_offset_hi": reg.a_offset_hi,
        "a_at_delta_lo": list(reg.a_interval(reg.delta_lo)),
        "a_at_delta_hi": list(reg.a_interval(reg.delta_hi)),
        "corners": [list(c) for c in reg.corners()],
        # Conjugacy needs delta < delta_hi and a > a_lo when rho is rational.
        "includes": {"delta_lo": True, "delta_hi": not rational, "a_lo": not rational, "a_hi": True},
        "clipped": reg.clipped,
        "degenerate": {"delta": reg.delta_degenerate, "a": reg.a_degenerate},
    }
    if reg.caveat:
        out["caveat"] = "truncated series; values carry the certified tail"
    if reg.delta_degenerate and reg.a_degenerate:
        out["notice"] = "zero-width region: both intervals are single points"
    elif reg.delta_degenerate or reg.a_degenerate:
        out["notice"] = "zero-width in " + ("delta" if reg.delta_degenerate else "a")
    return out


# -- SVG --------------------------------------------------------------------------

SIZE = 560
PAD = 40


def _px(delta, a) -> tuple[float, float]:
    span = SIZE - 2 * PAD
    return PAD + to_float(delta) * span, SIZE - PAD - to_float(a) * span


def _svg_open(title: str) -> list[str]:
    span = SIZE - 2 * PAD
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- pcrot {__version__} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{title}</title>",
        f'<defs><clipPath id="sq"><rect x="{PAD}" y="{PAD}" width="{span}" height="{span}"/></clipPath></defs>',
        f'<rect x="{PAD}" y="{PAD}" width="{span}" height="{span}" fill="white" stroke="black"/>',
        f'<text x="{SIZE / 2}" y="{SIZE - 8}" text-anchor="middle" font-size="14">delta</text>',
        f'<text x="12" y="{SIZE / 2}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 12 {SIZE / 2})">a</text>',
    ]


def _eta_curves(fam: Family) -> list[str]:
    lam, d = to_float(fam.lam), to_float(fam.d)
    lines = []
    lo = 1 - lam - d
    for shift, dash in ((d, "6,3"), (0.0, "2,3")):
        pts = []
        for i in range(101):
            delta = lo + (1 - lo) * i / 100
            a = (1 - delta - shift) / lam
            pts.append("%.3f,%.3f" % _px(delta, min(max(a, -0.5), 1.5)))
        lines.append(f'<polyline points="{" ".join(pts)}" fill="none" stroke="black" '
                     f'stroke-dasharray="{dash}" clip-path="url(#sq)"/>')
    x0, _ = _px(lo, 0)
    lines.append(f'<line x1="{x0:.3f}" y1="{PAD}" x2="{x0:.3f}" y2="{SIZE - PAD}" stroke="gray"/>')
    return lines


def _polygon(reg: Region, color: str, opacity: float = 0.6) -> str:
    pts = " ".join("%.3f,%.3f" % _px(dl, a) for dl, a in reg.corners())
    return (f'<polygon points="{pts}" fill="{color}" fill-opacity="{opacity}" stroke="{color}" '
            f'stroke-width="0.5" clip-path="url(#sq)"/>')


def _color(rho) -> str:
    r, g, b = colorsys.hsv_to_rgb(0.67 * (1 - to_float(rho)), 0.85, 0.9)
    return "#%02x%02x%02x" % (round(255 * r), round(255 * g), round(255 * b))


def region_svg(fam: Family, regions: list[Region], title: str) -> str:
    lines = _svg_open(title)
    lines += [_polygon(r, _color(r.target.rho)) for r in regions]
    lines += _eta_curves(fam)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def corners_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rho", "alpha", "corner", "delta", "a"])
    for rho, al, reg in rows:
        for i, (dl, a) in enumerate(reg.corners()):
            w.writerow([_fmt(rho), _fmt(al), i, _fmt(dl), _fmt(a)])
    return buf.getvalue()


# -- commands -----------------------------------------------------------------------

def cmd_region(args) -> int:
    fam, target = _family(args), _target(args)
    reg = region(fam, target)
    payload = _header(args, rho=target.rho, alpha=target.alpha)
    if target.k is not None:
        payload["k"] = target.k
    payload["region"] = _region_json(reg)
    _emit(args, payload)
    if args.svg:
        _write(args.svg, region_svg(fam, [reg], f"region rho={_fmt(target.rho)} alpha={_fmt(target.alpha)}"))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    fam = _family(args)
    rho = parse_scalar(args.rho, "exact")
    regs = enumerate_regions(fam, rho)
    payload = _header(args, rho=rho)
    payload["regions"] = [dict(alpha=al, **_region_json(r)) for al, r in regs]
    _emit(args, payload)
    if args.csv:
        _write(args.csv, corners_csv([(rho, al, r) for al, r in regs]))
    if args.svg:
        _write(args.svg, region_svg(fam, [r for _, r in regs], f"regions rho={rho}"))
    return EXIT_OK


def cmd_synth(args) -> int:
    fam = _family(args)
    rho = parse_scalar(args.rho, args.mode)
    alpha = parse_scalar(args.alpha, args.mode) if args.alpha is not None else None
    goal = SynthesisTarget(rho, args.goal, n_orbits=args.orbits, k=args.k, map_type=args.map_type, alpha=alpha)
    spec, cert = synthesize(fam, goal)
    reg = cert.pop("region")
    cert["region"] = _region_json(reg)
    payload = _header(args, delta=spec.delta, a=spec.a, rho=cert.pop("rho"), alpha=cert.pop("alpha"))
    payload["certificate"] = cert
    _emit(args, payload)
    return EXIT_OK


def cmd_invert(args) -> int:
    fam = _family(args)
    delta, a = parse_scalar(args.delta, args.mode), parse_scalar(args.a, args.mode)
    payload = _header(args, delta=delta, a=a)
    try:
        c = invert(fam, delta, a)
    except FixedPointRegion as exc:
        payload.update(rho=Fraction(0), result="fixed_point_region", message=str(exc))
        _emit(args, payload)
        return EXIT_FAILED
    except Inconclusive as exc:
        payload.update(result="inconclusive", message=str(exc))
        _emit(args, payload)
        return EXIT_FAILED
    payload.update(rho=c.rho, alpha=c.alpha, membership=c.membership, case=c.case,
                   checks={"delta": c.delta_check, "a": c.a_check})
    _emit(args, payload)
    return EXIT_OK if c.delta_check and c.a_check else EXIT_FAILED


def cmd_rotnum(args) -> int:
    spec = _spec(args)
    est = rotation_number(spec, n_max=args.n_max, eps=args.eps)
    payload = _header(args, delta=spec.delta, a=spec.a)
    payload.update(lower=est.lower, upper=est.upper, exact=est.exact, winding=est.winding,
                   period=est.period, iterations=est.iterations)
    _emit(args, payload)
    return EXIT_OK


def cmd_attractor(args) -> int:
    spec, target = _spec(args), _target(args)
    att = attractor(spec, target, grid=args.grid, depth=args.depth)
    payload = _header(args, delta=spec.delta, a=spec.a, rho=target.rho, alpha=target.alpha)
    payload["kind"] = att.kind
    rows = []
    if att.kind == "periodic":
        payload["cycles"] = [{"period": c.period, "winding": c.winding, "points": c.points, "preimages": c.preimages}
                             for c in att.orbits]
        for i, c in enumerate(att.orbits):
            rows += [[i, j, _fmt(x), _fmt(y)] for j, (x, y) in enumerate(zip(c.points, c.preimages))]
        header = ["cycle", "index", "x", "y"]
    else:
        payload["sample"] = [[y, x] for y, x in att.sample]
        payload["gaps"] = [{"y": y, "left": lo, "right": hi} for y, lo, hi in att.gaps]
        payload["unreported_gap_mass"] = att.unreported_gap_mass
        rows = [[_fmt(y), _fmt(lo), _fmt(hi)] for y, lo, hi in att.gaps]
        header = ["y", "gap_left", "gap_right"]
    _emit(args, payload)
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        _write(args.csv, buf.getvalue())
    return EXIT_OK


def cmd_code(args) -> int:
    spec = _spec(args)
    payload = _header(args, delta=spec.delta, a=spec.a)
    target = _target(args, required=False)
    if target is not None and args.y0 is not None:
        y0 = parse_scalar(args.y0, "exact")
        c = attractor_code(spec, target, y0, args.n)
        r = rotation_code(target, y0, args.n)
        payload.update(rho=target.rho, alpha=target.alpha, y0=y0, word=c.word(), rotation_word=r.word(),
                       equal=c.symbols == r.symbols)
    else:
        x0 = parse_scalar(args.x0 or "0", args.mode)
        c = code(spec, x0, args.n)
        payload.update(x0=x0, word=c.word(), truncated=c.truncated, partition=list(c.partition))
    _emit(args, payload)
    return EXIT_OK


def cmd_complexity(args) -> int:
    if args.word:
        word = [int(ch) for ch in args.word]
        payload = {"word_length": len(word)}
    else:
        spec, target = _spec(args), _target(args)
        y0 = parse_scalar(args.y0 or "0", "exact")
        c = attractor_code(spec, target, y0, args.length)
        word = list(c.symbols)
        payload = _header(args, delta=spec.delta, a=spec.a, rho=target.rho, alpha=target.alpha)
        payload["word_length"] = len(word)
    payload["p"] = complexity(word, args.n_max, periodic=args.periodic)
    _emit(args, payload)
    return EXIT_OK


def _verify(spec: MapSpec, target: RotationTarget, seeds: int) -> tuple[list[dict], bool]:
    checks: list[dict] = []

    def add(name, ok, **info):
        checks.append(dict(name=name, passed=bool(ok), **info))

    fp = fixed_point_check(spec)
    if fp.region != "none":
        add("fixed_point", False, region=fp.region, rho=Fraction(0), x_star=fp.x_star, ghost=fp.ghost)
        return checks, False
    reg = region(spec.family, target)
    try:
        m = contains(reg, spec.delta, spec.a)
    except BoundaryAmbiguous as exc:
        add("contains", False, message=str(exc))
        return checks, False
    add("contains", m == Membership.INSIDE_STRICT, membership=m.value)
    if m != Membership.INSIDE_STRICT:
        add("conjugacy", False, skipped=True, message="hypotheses need inside_strict")
        return checks, False
    add("map_class", True, tag=classify(spec)[1].tag.value)
    grid = [Fraction(i, seeds) for i in range(seeds)]
    res = conjugacy_residual(spec, target, grid)
    add("conjugacy_residual", res.ok, value=res.value, bound=res.bound)
    try:
        att = attractor(spec, target)
        info = ({"cycles": len(att.orbits), "period": att.orbits[0].period, "winding": att.orbits[0].winding}
                if att.kind == "periodic" else {"gaps": len(att.gaps)})
        add("attractor", True, kind=att.kind, **info)
    except HypothesisViolated as exc:
        add("attractor", False, message=str(exc))
    n = 4 * target.q if target.rational else 256
    same = all(attractor_code(spec, target, y, n).symbols == rotation_code(target, y, n).symbols for y in grid[:8])
    add("code_equality", same, length=n + 1)
    if target.rational:
        est = rotation_number(spec)
        add("rotation_number", est.exact == target.rho, exact=est.exact)
    return checks, all(c["passed"] for c in checks)


def cmd_verify(args) -> int:
    spec, target = _spec(args), _target(args)
    checks, ok = _verify(spec, target, args.grid)
    payload = _header(args, delta=spec.delta, a=spec.a, rho=target.rho, alpha=target.alpha)
    payload.update(checks=checks, passed=ok)
    _emit(args, payload)
    return EXIT_OK if ok else EXIT_FAILED


def farey(order: int) -> list[Fraction]:
    """Reduced fractions strictly inside (0, 1) with denominator <= order (order 1 gives 1/2)."""
    order = max(order, 2)
    return sorted(Fraction(p, q) for q in range(2, order + 1) for p in range(1, q) if gcd(p, q) == 1)


def _threads() -> int:
    try:
        n = int(os.environ.get("PCROT_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else min(8, os.cpu_count() or 1)


def cmd_plot(args) -> int:
    if not 1 <= args.farey_order <= MAX_FAREY:
        raise UsageError(f"--farey-order must lie in 1..{MAX_FAREY}")
    fam = _family(args)
    rhos = farey(args.farey_order)
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        # map() keeps input order, so the output does not depend on scheduling
        per_rho = list(pool.map(lambda r: enumerate_regions(fam, r), rhos))
    rows = [(rho, al, reg) for rho, regs in zip(rhos, per_rho) for al, reg in regs]
    if args.svg:
        _write(args.svg, region_svg(fam, [r for _, _, r in rows], f"tongues, Farey order {args.farey_order}"))
    if args.csv:
        _write(args.csv, corners_csv(rows))
    _emit(args, _header(args, farey_order=args.farey_order, rationals=len(rhos), regions=len(rows)))
    return EXIT_OK


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcrot", description="Regions, attractors and codes of "
                                     "three-interval piecewise contracting circle maps.")
    parser.add_argument("--version", action="version", version=f"pcrot {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lambda", dest="lam", required=True, help="slope lambda in (0, 1)")
    common.add_argument("--d", required=True, help="jump d in (0, 1 - lambda)")
    common.add_argument("--mode", choices=("auto", "exact", "approx"), default="auto")
    common.add_argument("--out", help="write JSON here instead of stdout")
    tgt = argparse.ArgumentParser(add_help=False)
    tgt.add_argument("--rho")
    tgt.add_argument("--alpha")
    tgt.add_argument("--k", type=int, help="resonance alpha = {k rho} for irrational rho")
    mp = argparse.ArgumentParser(add_help=False)
    mp.add_argument("--delta")
    mp.add_argument("--a")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("region", parents=[common, tgt], help="one parameter region")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("enumerate", parents=[common], help="all 2q+1 regions of rho = p/q")
    p.add_argument("--rho", required=True)
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("synth", parents=[common], help="build a map with a prescribed behaviour")
    p.add_argument("--rho", required=True)
    p.add_argument("--goal", choices=("orbit_count", "complexity", "map_type"), required=True)
    p.add_argument("--orbits", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--map-type", choices=("M1", "M2", "M3"))
    p.add_argument("--alpha")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("invert", parents=[common, mp], help="recover (rho, alpha) from (delta, a)")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("rotnum", parents=[common, mp], help="rotation number of a map")
    p.add_argument("--n-max", type=int, default=10000)
    p.add_argument("--eps", type=float, default=1e-12)
    p.set_defaults(func=cmd_rotnum)

    p = sub.add_parser("attractor", parents=[common, mp, tgt], help="periodic orbits or Cantor sample")
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--depth", type=int, default=40)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_attractor)

    p = sub.add_parser("code", parents=[common, mp, tgt], help="symbolic itinerary")
    p.add_argument("--x0")
    p.add_argument("--y0", help="code the attractor point phi(y0) instead")
    p.add_argument("--n", type=int, default=20)
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("complexity", parents=[mp, tgt], help="factor complexity p(1..n)")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--d")
    p.add_argument("--mode", choices=("auto", "exact", "approx"), default="auto")
    p.add_argument("--out")
    p.add_argument("--word", help="explicit word over 0/1/2")
    p.add_argument("--y0")
    p.add_argument("--length", type=int, default=4000)
    p.add_argument("--n-max", type=int, default=15)
    p.add_argument("--periodic", action="store_true", help="treat the word as one period")
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("verify", parents=[common, mp, tgt], help="check the conjugacy statements")
    p.add_argument("--grid", type=int, default=64)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", parents=[common], help="tongue overlay for a Farey order")
    p.add_argument("--farey-order", type=int, default=20)
    p.add_argument("--svg")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "complexity" and not args.word and (args.lam is None or args.d is None):
        parser.error("complexity needs --word or a full map (--lambda, --d, --delta, --a, --rho, ...)")
    try:
        return args.func(args)
    except (UsageError, InvalidParameters, OutOfDomain, InfeasibleGoal, InsufficientLength) as exc:
        print(f"pcrot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HypothesisViolated as exc:
        print(f"pcrot: hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (BoundaryAmbiguous, PrecisionExhausted) as exc:
        print(f"pcrot: undecided at working precision: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except ValueError as exc:
        print(f"pcrot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
