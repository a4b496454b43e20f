"""Command-line front end.

Exit status: 0 on success, 1 on usage errors (bad flags, malformed or
incomplete points), 2 when a computation fails.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import CATALOG, get_metric, list_metrics
from .dsl import MetricSpec, differentiate, parse_expression, parse_metric_file, simplify, to_text
from .einstein import densitized_residual, einstein_at, einstein_density_at, ricci_at, scalar_at
from .errors import DegengrError
from .geometry import check_radical_stationary, check_semiregular, riemann_at
from .scfoliate import PRESETS, foliation, preset, render
from .tensor import eval_metric, signature_of


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------------ helpers

def _num(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _matrix(m) -> list:
    return [[_num(v) for v in row] for row in np.asarray(m)]


def _fmt(x) -> str:
    return "nan" if x is None else f"{x:.12g}"


def _table(m, labels) -> str:
    cells = [[_fmt(_num(v)) for v in row] for row in np.asarray(m)]
    width = max([len(c) for row in cells for c in row] + [len(s) for s in labels] + [1])
    head = " " * (max(len(s) for s in labels) + 2) + "  ".join(s.rjust(width) for s in labels)
    pad = max(len(s) for s in labels)
    rows = [f"{lab.ljust(pad)}  " + "  ".join(c.rjust(width) for c in row) for lab, row in zip(labels, cells)]
    return "\n".join([head] + rows)


def _kv_pairs(items, what) -> dict[str, float]:
    out = {}
    for item in items:
        for part in item.split(","):
            part = part.strip()
            if not part:
                continue
            key, sep, val = part.partition("=")
            if not sep:
                raise UsageError(f"{what} entry {part!r} is not of the form name=value")
            try:
                out[key.strip()] = float(val)
            except ValueError:
                raise UsageError(f"{what} {key.strip()!r} has non-numeric value {val!r}") from None
    return out


def _load_spec(args) -> MetricSpec:
    params = _kv_pairs(args.param or [], "parameter")
    if args.metric:
        path = Path(args.metric)
        try:
            text = path.read_text()
        except OSError as exc:
            raise DegengrError(f"cannot read metric file {path}: {exc.strerror}") from None
        spec = parse_metric_file(text, path.stem)
        if params:
            unknown = set(params) - set(spec.param_dict)
            if unknown:
                raise UsageError(f"metric file declares no parameter(s) {', '.join(sorted(unknown))}")
            spec = spec.with_params(**params)
        return spec
    return get_metric(args.name, params)


def _point(spec: MetricSpec, text: str) -> list[float]:
    vals = _kv_pairs([text], "coordinate")
    unknown = [k for k in vals if k not in spec.coords]
    if unknown:
        raise UsageError(f"unknown coordinate(s) {', '.join(unknown)}; chart has {', '.join(spec.coords)}")
    missing = [c for c in spec.coords if c not in vals]
    if missing:
        raise UsageError(f"missing coordinate(s) {', '.join(missing)} in --at")
    return [vals[c] for c in spec.coords]


def _path(spec: MetricSpec, limit: list[float], text: str | None) -> np.ndarray:
    """``[-]COORD[:K1..K2]``: ``limit +/- 2^-k e_COORD`` for ``k = K1..K2``."""
    text = text or f"{spec.coords[0]}:1..12"
    coord, _, ks = text.partition(":")
    sign = 1.0
    if coord.startswith("-"):
        sign, coord = -1.0, coord[1:]
    if coord not in spec.coords:
        raise UsageError(f"path coordinate {coord!r} not in chart ({', '.join(spec.coords)})")
    lo, hi = 1, 12
    if ks:
        a, sep, b = ks.partition("..")
        try:
            lo, hi = int(a), int(b)
        except ValueError:
            raise UsageError(f"path range {ks!r} is not of the form K1..K2") from None
        if not sep or hi < lo:
            raise UsageError(f"path range {ks!r} is not of the form K1..K2")
    i = spec.coords.index(coord)
    pts = []
    for k in range(lo, hi + 1):
        p = list(limit)
        p[i] += sign * 2.0 ** (-k)
        pts.append(p)
    return np.array(pts)


def _plain(obj):
    """Non-finite floats become null so the output stays strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _emit(args, payload: dict, text: str):
    if args.json:
        sys.stdout.write(json.dumps(_plain(payload), indent=2, sort_keys=True, allow_nan=False) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


# ------------------------------------------------------------------- verbs

def cmd_metric_list(args):
    entries = [e.schema_dict() for e in list_metrics()]
    lines = []
    for e in entries:
        params = ", ".join(f"{p['name']}={p['default']:g}" for p in e["params"]) or "-"
        lines.append(f"{e['name']:<26} {params:<22} {e['description']}")
    _emit(args, {"metrics": entries}, "\n".join(lines))


def cmd_metric_show(args):
    spec = _load_spec(args)
    entry = CATALOG.get(spec.name)
    payload = {
        "name": spec.name,
        "dim": spec.dim,
        "coords": list(spec.coords),
        "params": spec.param_dict,
        "components": [[to_text(e) for e in row] for row in spec.components],
    }
    if entry is not None:
        payload["singular_loci"] = list(entry.singular_loci)
    _emit(args, payload, spec.to_text())


def cmd_check(args):
    spec = _load_spec(args)
    p = _point(spec, args.at)
    if args.radical_stationary:
        g = eval_metric(spec, p)
        ok = check_radical_stationary(spec, p)
        sig = signature_of(g)
        payload = {"point": p, "signature": list(sig), "radical_stationary": ok}
        text = f"signature (zero, plus, minus) = {sig}\nradical-stationary: {'yes' if ok else 'no'}"
        _emit(args, payload, text)
        return
    path = _path(spec, p, args.path)
    rep = check_semiregular(spec, path, limit=p)
    payload = rep.to_dict()
    payload["path"] = _matrix(path)
    lines = [
        f"samples: {len(path)} points approaching {p}",
        f"co-contracted Koszul products: {payload['verdict']}",
    ]
    if rep.diverged:
        lines.append("diverging (a,b,c,d): " + " ".join("".join(map(str, ix)) for ix in rep.diverged))
    if rep.diagonal_for_all_c is not None:
        lines.append(f"diagonal criterion, for all c: {rep.diagonal_for_all_c}")
        lines.append(f"diagonal criterion, for some c: {rep.diagonal_for_some_c}")
    lines.append(f"radical-stationary at the limit: {rep.limit_radical_stationary}")
    _emit(args, payload, "\n".join(lines))


def _independent(R, atol):
    d = R.shape[0]
    out = []
    for a in range(d):
        for b in range(a + 1, d):
            for c in range(d):
                for e in range(c + 1, d):
                    if (a, b) <= (c, e) and abs(R[a, b, c, e]) > atol:
                        out.append(((a, b, c, e), float(R[a, b, c, e])))
    return out


def cmd_curvature(args):
    spec = _load_spec(args)
    p = _point(spec, args.at)
    R = riemann_at(spec, p).components
    scale = float(np.abs(R).max()) if R.size else 0.0
    entries = _independent(R, 1e-12 * max(1.0, scale))
    payload = {
        "point": p,
        "coords": list(spec.coords),
        "components": [{"index": list(ix), "value": v} for ix, v in entries],
    }
    c = spec.coords
    lines = [f"R[{','.join(c[i] for i in ix)}] = {_fmt(v)}" for ix, v in entries] or ["all components vanish"]
    _emit(args, payload, "\n".join(lines))


def cmd_einstein(args):
    spec = _load_spec(args)
    p = _point(spec, args.at)
    labels = list(spec.coords)
    if args.density:
        d = einstein_density_at(spec, p)
        payload = {"point": p, "density_upper": _matrix(d.upper), "density_lower": _matrix(d.lower),
                   "normalization": d.normalization}
        text = ["G^ab det g:", _table(d.upper, labels), "", "G_ab det g:", _table(d.lower, labels)]
        if args.lam is not None or args.kappa is not None:
            lam = args.lam or 0.0
            kappa = 1.0 if args.kappa is None else args.kappa
            res = densitized_residual(spec, p, lam=lam, kappa=kappa)
            payload["residual"] = _matrix(res)
            payload["lambda"], payload["kappa"] = lam, kappa
            text += ["", f"(G_ab + lambda g_ab - kappa T_ab) det g, lambda={lam:g}, kappa={kappa:g}, T=0:",
                     _table(res, labels)]
        _emit(args, payload, "\n".join(text))
        return
    ric = ricci_at(spec, p)
    s = scalar_at(spec, p)
    G = einstein_at(spec, p)
    payload = {"point": p, "ricci": _matrix(ric.matrix), "scalar": _num(s), "einstein": _matrix(G),
               "convention": ric.convention}
    text = ["Ricci:", _table(ric.matrix, labels), "", f"scalar: {_fmt(s)}", "", "Einstein:", _table(G, labels)]
    _emit(args, payload, "\n".join(text))


def cmd_foliate(args):
    out = Path(args.out)
    fmt = out.suffix.lower().lstrip(".")
    if fmt not in ("svg", "csv"):
        raise UsageError(f"--out must end in .svg or .csv, got {out.name!r}")
    cfg = preset(args.preset, args.a, args.b)
    x_range = tuple(_kv_float_pair(args.x_range))
    ps = foliation(cfg, args.leaves, x_range, args.samples)
    data = render(ps, fmt)
    try:
        out.write_bytes(data)
    except OSError as exc:
        raise DegengrError(f"cannot write {out}: {exc.strerror}") from None
    payload = {"preset": args.preset, "a": args.a, "b": args.b, "leaves": args.leaves,
               "out": str(out), "bytes": len(data), "polylines": len(ps.polylines)}
    _emit(args, payload, f"wrote {len(ps.polylines)} polylines to {out} ({len(data)} bytes)")


def _kv_float_pair(text: str):
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--x-range must be LO,HI, got {text!r}") from None
    return lo, hi


def cmd_expr_diff(args):
    e = parse_expression(args.expr)
    d = simplify(differentiate(e, args.var))
    _emit(args, {"expr": to_text(e), "var": args.var, "derivative": to_text(d)}, to_text(d))


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    metric_src = argparse.ArgumentParser(add_help=False)
    src = metric_src.add_mutually_exclusive_group(required=True)
    src.add_argument("--metric", metavar="FILE", help="metric file")
    src.add_argument("--name", choices=sorted(CATALOG), help="catalog metric")
    metric_src.add_argument("--param", action="append", metavar="k=v", help="parameter value (repeatable)")
    metric_src.add_argument("--at", required=True, metavar="c1=v1,c2=v2,...", help="point, every coordinate")

    parser = _Parser(prog="degengr", description="Curvature of degenerate metrics and strip-map foliations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbs = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    metric = verbs.add_parser("metric", help="catalog metrics")
    msub = metric.add_subparsers(dest="action", required=True, parser_class=_Parser)
    msub.add_parser("list", parents=[common], help="list catalog metrics").set_defaults(func=cmd_metric_list)
    show = msub.add_parser("show", parents=[common], help="print a metric in file format")
    show.add_argument("--name", required=True, choices=sorted(CATALOG))
    show.add_argument("--param", action="append", metavar="k=v")
    show.set_defaults(func=cmd_metric_show, metric=None)

    check = verbs.add_parser("check", parents=[common, metric_src], help="radical-stationarity or semi-regularity")
    mode = check.add_mutually_exclusive_group(required=True)
    mode.add_argument("--radical-stationary", action="store_true")
    mode.add_argument("--semiregular", action="store_true")
    check.add_argument("--path", metavar="SPEC",
                       help="[-]COORD[:K1..K2], points at +/- 2^-k along COORD from --at (default first coord, 1..12)")
    check.set_defaults(func=cmd_check)

    curv = verbs.add_parser("curvature", parents=[common, metric_src], help="nonzero R_abcd at a point")
    curv.set_defaults(func=cmd_curvature)

    ein = verbs.add_parser("einstein", parents=[common, metric_src], help="Ricci, scalar and Einstein tensors")
    ein.add_argument("--density", action="store_true", help="Einstein density via the Levi-Civita symbol")
    ein.add_argument("--lambda", dest="lam", type=float, metavar="L", help="cosmological constant for the residual")
    ein.add_argument("--kappa", type=float, metavar="K", help="coupling constant for the residual")
    ein.set_defaults(func=cmd_einstein)

    fol = verbs.add_parser("foliate", parents=[common], help="foliation figure of a preset")
    fol.add_argument("--preset", required=True, choices=PRESETS)
    fol.add_argument("--a", type=float, default=1.0)
    fol.add_argument("--b", type=float, default=0.5)
    fol.add_argument("--leaves", type=int, required=True)
    fol.add_argument("--out", required=True, metavar="FILE.svg|FILE.csv")
    fol.add_argument("--x-range", default="-10,10", metavar="LO,HI")
    fol.add_argument("--samples", type=int, default=241)
    fol.set_defaults(func=cmd_foliate)

    expr = verbs.add_parser("expr", help="expression utilities")
    esub = expr.add_subparsers(dest="action", required=True, parser_class=_Parser)
    diff = esub.add_parser("diff", parents=[common], help="symbolic derivative")
    diff.add_argument("--expr", required=True)
    diff.add_argument("--var", required=True)
    diff.set_defaults(func=cmd_expr_diff)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"degengr: usage error: {exc}\n")
        return 1
    except (DegengrError, ValueError, ArithmeticError) as exc:
        sys.stderr.write(f"degengr {args.verb}: {type(exc).__name__}: {exc}\n")
        return 2
    return 0


def main() -> None:
    sys.exit(run())
