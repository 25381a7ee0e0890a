"""Command-line front end.

Reads a walk description as JSON (group plus exact rational weights),
runs the requested analysis, and emits JSON or CSV with deterministic
ordering and fixed 12-significant-digit float formatting, so identical
invocations are byte-identical.

Exit codes: 0 success, 2 usage or parse error, 3 internal invariant
violation, 4 golden-scenario mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .dance import analyze_dance, spectral_gap
from .group import GroupSpec
from .intlinalg import AffinePointSet, InvariantViolationError, twist_to_coordinates
from .llt import (
    attractor_eval,
    build_attractor,
    classify,
    evaluation_window,
    llt_sup_error,
    tv_to_uniform_coset,
)
from .measure import Distribution, convolution_power, sample_path
from .scenarios import SCENARIOS


class SpecError(ValueError):
    """The input walk description is malformed."""


def _fmt_float(x: float) -> str:
    return f"{x:.12g}"


def _fmt_fraction(w: Fraction) -> str:
    return f"{w.numerator}/{w.denominator}" if w.denominator != 1 else str(w.numerator)


def _render(obj, indent: int = 0) -> str:
    """JSON with insertion-ordered keys and .12g floats."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(f'{pad}  {json.dumps(str(k))}: {_render(v, indent + 1)}'
                           for k, v in obj.items())
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        items = [_render(v, indent + 1) for v in obj]
        if sum(len(i) for i in items) < 60 and all("\n" not in i for i in items):
            return "[" + ", ".join(items) + "]"
        inner = ",\n".join(f"{pad}  {i}" for i in items)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, Fraction):
        return json.dumps(_fmt_fraction(obj))
    if isinstance(obj, int):
        return str(obj)
    return json.dumps(obj)


def _emit(obj):
    sys.stdout.write(_render(obj) + "\n")


def load_spec(text: str) -> Distribution:
    """Parse a walk description document into a Distribution."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"invalid JSON: {e}") from None
    try:
        gdoc = doc["group"]
        group = GroupSpec(gdoc.get("torsion", []), gdoc.get("rank", 0))
        weights = {}
        for entry in doc["distribution"]:
            elem = entry["elem"]
            x = group.element(elem.get("torsion", []), elem.get("free", []))
            w = Fraction(str(entry["weight"]))
            weights[x] = weights.get(x, Fraction(0)) + w
        return Distribution(group, weights)
    except SpecError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise SpecError(f"invalid walk description: {e}") from None


def dump_spec(p: Distribution) -> str:
    """Serialize a distribution back into the walk description format.

    Inverse of load_spec up to residue reduction: parsing the dump gives
    an identical Distribution.
    """
    doc = {
        "group": {"torsion": list(p.group.torsion_moduli), "rank": p.group.free_rank},
        "distribution": [
            {"elem": _element_doc(x), "weight": w} for x, w in p.items()
        ],
    }
    return _render(doc) + "\n"


def _read_spec(path: str) -> Distribution:
    if path == "-":
        return load_spec(sys.stdin.read())
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return load_spec(fh.read())
    except OSError as e:
        raise SpecError(f"cannot read {path}: {e}") from None


def _element_doc(x) -> dict:
    return {"torsion": list(x.torsion), "free": list(x.free)}


def _count_or_infinite(v):
    return "infinite" if v is None else v


def _thread_cap() -> int:
    raw = os.environ.get("DANCEWALK_THREADS", "")
    if raw.strip():
        try:
            return max(1, int(raw))
        except ValueError:
            raise SpecError(f"DANCEWALK_THREADS must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def cmd_analyze(args) -> int:
    p = _read_spec(args.spec)
    d = analyze_dance(p)
    gap = spectral_gap(p)
    cls = classify(p)
    omega = GroupSpec(*d.omega_invariants)
    out = {
        "group": {
            "torsion": list(p.group.torsion_moduli),
            "rank": p.group.free_rank,
            "canonical_torsion": list(p.group.invariant_factors),
        },
        "base_point": _element_doc(d.base_point),
        "walk_subgroup": {
            "hnf_generators": [list(r) for r in d.walk_subgroup.basis.data],
            "order": _count_or_infinite(d.walk_subgroup.order()),
            "index": _count_or_infinite(d.walk_subgroup.index()),
            "rank": d.rank_d,
        },
        "normalization": d.normalization_c,
        "omega": {
            "isomorphic_to": "dual of " + omega.describe(),
            "quotient_torsion": list(d.omega_invariants[0]),
            "quotient_rank": d.omega_invariants[1],
        },
        "spectral_gap": {
            "rho": gap.rho,
            "achieved_at": None if gap.achieved_at is None
            else list(gap.achieved_at.torsion_chars),
        },
        "classification": {
            "irreducible": cls.irreducible,
            "aperiodic": cls.aperiodic,
            "period": "undefined" if cls.period is None else cls.period,
            "dance_cosets": cls.dance_cosets,
            "reason": cls.reason,
        },
    }
    _emit(out)
    return 0


def cmd_convolve(args) -> int:
    p = _read_spec(args.spec)
    pn = convolution_power(p, args.n)
    out = {
        "n": args.n,
        "support_size": len(pn),
        "weights": [
            {"elem": _element_doc(x), "weight": w, "weight_float": float(w)}
            for x, w in pn.items()
        ],
    }
    _emit(out)
    return 0


def _compare_records(p, a, n):
    pn = convolution_power(p, n)
    records = []
    for x in evaluation_window(p, a, n):
        w = pn.weight(x)
        approx = attractor_eval(a, n, x)
        records.append({
            "n": n,
            "x": list(x.coords()),
            "p": w,
            "p_float": float(w),
            "theta": a.dance.theta(n, x),
            "attractor": approx,
            "abs_error": abs(float(w) - approx),
        })
    return records


def cmd_compare(args) -> int:
    p = _read_spec(args.spec)
    try:
        ns = [int(s) for s in args.n.split(",") if s.strip()]
    except ValueError:
        raise SpecError(f"bad step list {args.n!r}") from None
    if not ns or any(n < 1 for n in ns):
        raise SpecError("at least one step n >= 1 is required")
    a = build_attractor(p)
    with ThreadPoolExecutor(max_workers=min(_thread_cap(), len(ns))) as pool:
        blocks = list(pool.map(lambda n: _compare_records(p, a, n), sorted(ns)))
    records = [r for block in blocks for r in block]
    if args.format == "json":
        _emit(records)
    else:
        dim = p.group.dim
        header = (["n"] + [f"x{i}" for i in range(dim)]
                  + ["p_num", "p_den", "p_float", "theta", "attractor", "abs_error"])
        lines = [",".join(header)]
        for r in records:
            w = r["p"]
            lines.append(",".join(
                [str(r["n"])] + [str(c) for c in r["x"]]
                + [str(w.numerator), str(w.denominator), _fmt_float(r["p_float"]),
                   str(r["theta"]), _fmt_float(r["attractor"]), _fmt_float(r["abs_error"])]))
        sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_attractor(args) -> int:
    p = _read_spec(args.spec)
    a = build_attractor(p)
    report = llt_sup_error(p, a, args.n)
    out = {
        "case": a.case,
        "rank": a.rank_d,
        "torsion_order": a.torsion_order,
        "normalization": a.dance.normalization_c,
    }
    if a.case == "dpos":
        out["phi_matrix"] = [list(r) for r in a.phi.matrix.data]
        out["mean"] = list(a.moments.mean)
        out["covariance"] = [list(r) for r in a.moments.covariance]
    out["report"] = {
        "n": report.n,
        "sup_error": report.sup_error,
        "scaled_sup_error": report.scaled_sup_error,
        "sup_error_exact": report.sup_error_exact,
        "worst_point": None if report.worst_point is None else _element_doc(report.worst_point),
    }
    _emit(out)
    return 0


def cmd_tv(args) -> int:
    p = _read_spec(args.spec)
    r = tv_to_uniform_coset(p, args.n)
    _emit({
        "n": r.n,
        "tv_exact": r.tv_exact,
        "tv_exact_float": float(r.tv_exact),
        "tv_bound": r.tv_bound,
    })
    return 0


def cmd_twist(args) -> int:
    try:
        pts = json.loads(args.points)
        pts = [tuple(int(c) for c in p) for p in pts]
    except (json.JSONDecodeError, TypeError, ValueError) as e:
        raise SpecError(f"bad point list: {e}") from None
    if not pts:
        raise SpecError("point list must be nonempty")
    dims = {len(p) for p in pts}
    if len(dims) != 1:
        raise SpecError("points must share one ambient dimension")
    res = twist_to_coordinates(AffinePointSet(dims.pop(), pts))
    _emit({
        "dimension": res.d,
        "automorphism": [list(r) for r in res.phi.matrix.data],
        "offset": list(res.w),
        "images": sorted([list(res.phi.matrix.mul_vec(p)) for p in pts]),
    })
    return 0


def cmd_sample(args) -> int:
    p = _read_spec(args.spec)
    paths = []
    for i in range(args.paths):
        walk = sample_path(p, args.n, args.seed + i)
        paths.append([list(x.coords()) for x in walk.positions])
    _emit({"n": args.n, "seed": args.seed, "paths": paths})
    return 0


def cmd_examples(args) -> int:
    runner = SCENARIOS.get(args.name)
    if runner is None:
        sys.stderr.write("unknown scenario %r; available: %s\n"
                         % (args.name, ", ".join(sorted(SCENARIOS))))
        return 2
    checks = runner()
    failed = 0
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        failed += not c.passed
        line = f"{status}  {c.label}"
        if c.detail:
            line += f"  ({c.detail})"
        sys.stdout.write(line + "\n")
    sys.stdout.write(f"{len(checks) - failed}/{len(checks)} checks passed\n")
    return 4 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dancewalk",
        description="Exact analysis of random walks on finitely generated abelian groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_spec(sp):
        sp.add_argument("--spec", default="-", metavar="PATH",
                        help="walk description JSON (path or - for stdin)")
        return sp

    with_spec(sub.add_parser("analyze", help="walk subgroup, dance data, gap, classification")
              ).set_defaults(func=cmd_analyze)

    sp = with_spec(sub.add_parser("convolve", help="exact convolution power"))
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_convolve)

    sp = with_spec(sub.add_parser("compare", help="exact law vs attractor per point"))
    sp.add_argument("--n", required=True, metavar="A,B,C", help="comma-separated steps")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_compare)

    sp = with_spec(sub.add_parser("attractor", help="attractor data and sup-error report"))
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_attractor)

    sp = with_spec(sub.add_parser("tv", help="exact TV distance to the uniform coset law"))
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_tv)

    sp = sub.add_parser("twist", help="align a point set with its affine span")
    sp.add_argument("--points", required=True, metavar="JSON",
                    help='e.g. "[[1,0],[0,1]]"')
    sp.set_defaults(func=cmd_twist)

    sp = with_spec(sub.add_parser("sample", help="seeded walk paths"))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--paths", type=int, default=1)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("examples", help="run a named golden scenario")
    sp.add_argument("name")
    sp.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except InvariantViolationError as e:
        sys.stderr.write(f"internal invariant violation: {e}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
