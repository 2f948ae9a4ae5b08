"""Batch command-line front end.

    wallcross <command> <input.json> [--out report.json] [--bound p/q]
              [--sector-sign minus|plus] [--side plus|minus] [--pretty] [--text]

Input numbers must be integers or "p/q" strings; decimal floats are rejected.
Exit codes: 0 success, 2 invalid input or failed validation, 3 computation
error or violated invariant.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import InputError, LawrencePairingError, NonRationalNumber, SchemaError, WallcrossError
from .gitchambers import GitData, StabilityVector
from .serialize import dumps, label_json, point_json, q, qvec, scalar_json

COMMANDS = ("validate", "chambers", "wallcross", "fan", "fixed-points", "fm", "monodromy", "ifunction", "verify")

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")

SCHEMA = {
    "type": "object",
    "required": ["rank", "n", "characters", "theta_plus"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "rank": {"type": "integer", "minimum": 0},
        "n": {"type": "integer", "minimum": 0},
        "characters": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "extended": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "theta_plus": {"$ref": "#/$defs/vector"},
        "theta_minus": {"$ref": "#/$defs/vector"},
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "bound": {"$ref": "#/$defs/rational"},
                "sector_sign": {"enum": ["minus", "plus"]},
                "side": {"enum": ["plus", "minus"]},
            },
        },
    },
    "$defs": {
        "rational": {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": _RATIONAL.pattern}]},
        "vector": {"type": "array", "items": {"$ref": "#/$defs/rational"}},
    },
}


@dataclass
class InputSpec:
    name: str
    r: int
    n: int
    characters: tuple[tuple[int, ...], ...]
    extended: tuple[int, ...]
    theta_plus: tuple[Fraction, ...]
    theta_minus: tuple[Fraction, ...] | None
    options: dict = field(default_factory=dict)
    digest: str = ""

    def git(self) -> GitData:
        return GitData(self.r, self.n, self.characters)


def _line_of(text: str, token: str) -> int:
    idx = text.find(token)
    return text.count("\n", 0, idx) + 1 if idx >= 0 else 0


def _reject_float(text: str):
    def hook(tok):
        raise NonRationalNumber(f"line {_line_of(text, tok)}: decimal number {tok!r}; write it as \"p/q\"")
    return hook


def _reject_constant(tok):
    raise NonRationalNumber(f"non-finite number {tok!r}")


def _find_decimal_strings(obj, path=""):
    if isinstance(obj, str) and re.fullmatch(r"-?\d*\.\d*(e-?\d+)?", obj) and any(c.isdigit() for c in obj):
        yield path, obj
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _find_decimal_strings(v, f"{path}[{i}]")
    elif isinstance(obj, dict):
        for k, v in obj.items():
            yield from _find_decimal_strings(v, f"{path}.{k}" if path else k)


def resolve_path(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    name = p.name if p.suffix else p.name + ".json"
    bundled = resources.files("wallcross") / "data" / name
    if bundled.is_file():
        return Path(str(bundled))
    raise SchemaError(f"{path}: no such file or bundled fixture")


def parse_text(text: str, strict: bool = True) -> InputSpec:
    try:
        raw = json.loads(text, parse_float=_reject_float(text), parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    for where, tok in _find_decimal_strings(raw):
        raise NonRationalNumber(f"{where}: decimal string {tok!r}; write it as \"p/q\"")
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = ".".join(str(x) for x in err.absolute_path) or "<root>"
        raise SchemaError(f"{where} (line {_line_of(text, str(err.absolute_path[-1]) if err.absolute_path else '{')}): {err.message}")
    r, n = raw["rank"], raw["n"]
    chars = tuple(tuple(c) for c in raw["characters"])
    ext = tuple(raw.get("extended", ()))
    if any(len(c) != r for c in chars):
        raise SchemaError(f"characters: every row needs {r} entries")
    if len(chars) != 2 * n + len(ext):
        raise SchemaError(f"characters: expected 2n + |extended| = {2 * n + len(ext)} rows, got {len(chars)}")
    if list(ext) != list(range(2 * n + 1, len(chars) + 1)):
        raise SchemaError(f"extended: must list the trailing indices {list(range(2 * n + 1, len(chars) + 1))}")
    if strict:
        for i in range(n):
            if chars[n + i] != tuple(-x for x in chars[i]):
                raise LawrencePairingError(f"characters[{n + i}] must equal -characters[{i}] (D_{n + i + 1} = -D_{i + 1})")
    tp = tuple(Fraction(x) for x in raw["theta_plus"])
    tm = tuple(Fraction(x) for x in raw["theta_minus"]) if "theta_minus" in raw else None
    for label, th in (("theta_plus", tp), ("theta_minus", tm)):
        if th is not None and len(th) != r:
            raise SchemaError(f"{label}: expected {r} entries")
    opts = dict(raw.get("options", {}))
    canonical = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return InputSpec(
        name=raw.get("name", ""),
        r=r,
        n=n,
        characters=chars,
        extended=ext,
        theta_plus=tp,
        theta_minus=tm,
        options=opts,
        digest=hashlib.sha256(canonical.encode()).hexdigest(),
    )


def parse_input(path, strict: bool = True) -> InputSpec:
    p = resolve_path(str(path))
    return parse_text(p.read_text(encoding="utf-8"), strict=strict)


# commands --------------------------------------------------------------------


def _need_minus(spec: InputSpec):
    if spec.theta_minus is None:
        raise SchemaError("theta_minus is required for this command")
    return spec.theta_minus


def _sets(xs) -> list[list[int]]:
    return [sorted(x) for x in sorted(xs, key=sorted)]


def cmd_validate(spec: InputSpec, opts) -> tuple[dict, int]:
    from .gitchambers import validate

    g = spec.git()
    out, ok = {}, True
    for label, th in (("plus", spec.theta_plus), ("minus", spec.theta_minus)):
        if th is None:
            continue
        rep = validate(g, StabilityVector(th))
        out[label] = {k: {"ok": v[0], "detail": v[1]} for k, v in rep.checks.items()}
        ok &= rep.ok
    return {"report": out, "ok": ok}, 0 if ok else 2


def cmd_chambers(spec, opts):
    from .gitchambers import anticone_set, extended_set

    g = spec.git()
    res = {}
    for label, th in (("plus", spec.theta_plus), ("minus", spec.theta_minus)):
        if th is None:
            continue
        A = anticone_set(g, StabilityVector(th))
        res[label] = {
            "theta": qvec(th),
            "minimal_anticones": _sets(A.minimal),
            "extended_set": sorted(extended_set(g, StabilityVector(th))),
        }
    return res, 0


def _wc_json(wc) -> dict:
    from .gitchambers import anticone_set, tilde_data

    td = tilde_data(wc)
    return {
        "e": list(wc.e),
        "wall_basis": [list(v) for v in wc.wall_basis],
        "M_plus": sorted(wc.M_plus),
        "M_minus": sorted(wc.M_minus),
        "M_zero": sorted(wc.M_zero),
        "theta_zero": qvec(wc.theta_zero.value),
        "tilde": {
            "characters": [list(c) for c in td.characters],
            "theta": {"value": qvec(td.theta.value), "epsilon": qvec(td.theta.infinitesimal or ())},
            "theta_plus": qvec(td.theta_plus.value),
            "theta_minus": qvec(td.theta_minus.value),
            "minimal_anticones": {
                "theta": _sets(anticone_set(td, td.theta).minimal),
                "theta_plus": _sets(anticone_set(td, td.theta_plus).minimal),
                "theta_minus": _sets(anticone_set(td, td.theta_minus).minimal),
            },
        },
    }


def cmd_wallcross(spec, opts):
    from .gitchambers import wall_crossing

    wc = wall_crossing(spec.git(), spec.theta_plus, _need_minus(spec))
    return _wc_json(wc), 0


def cmd_fan(spec, opts):
    from .stackgeom import hypertoric_ideal, stacky_fan

    g = spec.git()
    res = {"hypertoric_ideal": {"generators": [list(r) for r in hypertoric_ideal(g).generators],
                                "text": hypertoric_ideal(g).as_strings()}}
    for label, th in (("plus", spec.theta_plus), ("minus", spec.theta_minus)):
        if th is None:
            continue
        f = stacky_fan(g, StabilityVector(th))
        res[label] = {
            "N": {"free_rank": f.N_group.free_rank, "torsion": list(f.N_group.torsion)},
            "b": [list(b) for b in f.b],
            "top_cones": _sets(f.top_cones),
            "cone_count": len(f.cones),
            "extended_set": sorted(f.ext),
            "rays_ok": f.rays_ok,
            "support_flags": list(f.support_flags),
        }
    return res, 0


def _atlas_json(atlas) -> list:
    return [
        {
            "delta": list(p.delta),
            "isotropy": {"order": p.order, "torsion": list(p.isotropy.torsion)},
            "lifts": [list(x) for x in p.lifts],
            "elements": [qvec(x) for x in p.elements],
        }
        for p in atlas
    ]


def cmd_fixed_points(spec, opts):
    from .stackgeom import fixed_points

    g = spec.git()
    res = {}
    for label, th in (("plus", spec.theta_plus), ("minus", spec.theta_minus)):
        if th is None:
            continue
        at = fixed_points(g, StabilityVector(th))
        res[label] = {"points": _atlas_json(at), "basis_size": at.size}
    return res, 0


def _matrix_json(m) -> dict:
    return {
        "rows": [label_json(x) for x in m.rows],
        "cols": [label_json(x) for x in m.cols],
        "entries": [[scalar_json(v) for v in row] for row in m.entries],
        "text": [[str(v) for v in row] for row in m.entries],
    }


def cmd_fm(spec, opts):
    from .fmk import crossing_context, fm_matrix, fm_transform

    ctx = crossing_context(spec.git(), spec.theta_plus, _need_minus(spec))
    m = fm_matrix(ctx)
    images = []
    for lab in ctx.minus_labels():
        img = fm_transform(ctx, *lab)
        images.append({
            "label": label_json(lab),
            "values": [{"point": point_json(pt), "value": scalar_json(v), "text": str(v)} for pt, v in zip(ctx.plus.points, img.values)],
        })
    cases = [
        {"delta": list(c.delta), "shared": c.shared, "j_minus": c.j_minus, "l": c.l}
        for _, c in sorted(ctx.cases.items())
    ]
    return {
        "cases": cases,
        "M_base": ctx.M_base,
        "M_ext": ctx.M_ext,
        "matrix": _matrix_json(m),
        "determinant_nonzero": not m.determinant().is_zero(),
        "images": images,
    }, 0


def cmd_monodromy(spec, opts):
    from .fmk import crossing_context, monodromy

    ctx = crossing_context(spec.git(), spec.theta_plus, _need_minus(spec))
    m = monodromy(ctx)
    det = m.determinant()
    unit = det.as_unit()
    return {
        "matrix": _matrix_json(m),
        "is_identity": m.is_identity(),
        "determinant": scalar_json(det),
        "determinant_is_unit": unit is not None,
    }, 0


def cmd_ifunction(spec, opts):
    from .gitchambers import wall_crossing
    from .ifun import chart_transition, i_series

    g = spec.git()
    side = opts.get("side") or spec.options.get("side", "plus")
    bound = Fraction(opts.get("bound") or spec.options.get("bound", "1"))
    sign = opts.get("sector_sign") or spec.options.get("sector_sign", "minus")
    theta = spec.theta_plus if side == "plus" else _need_minus(spec)
    chart = None
    res = {"side": side, "bound": q(bound), "sector_sign": sign}
    if spec.theta_minus is not None:
        chart = chart_transition(wall_crossing(g, spec.theta_plus, spec.theta_minus))
        res["chart"] = {
            "basis_plus": [list(v) for v in chart.basis_plus],
            "basis_minus": [list(v) for v in chart.basis_minus],
            "c_i": qvec(chart.c_i),
            "c": q(chart.c),
        }
    s = i_series(g, StabilityVector(theta), bound, chart, side=side, sector_sign=sign)
    res["sigma"] = {"basis": [list(v) for v in s.sigma.basis], "c0": s.sigma.c0, "c0_value": q(s.sigma.c0_value)}
    res["terms"] = [
        {
            "degree": qvec(t.degree.d),
            "pairings": qvec(t.degree.pairings),
            "monomial": qvec(t.monomial),
            "factors": [
                {"j": f.j, "kind": f.kind, "a": qvec(f.a_values)} for f in t.factors if f.kind != "one"
            ],
            "sector": qvec(t.sector.fractions),
            "age": q(t.sector.age),
            "value": str(t.value),
        }
        for t in s.terms
    ]
    return res, 0


def _suite_task(args):
    from .checks import run_suite

    name, r, n, chars, tp, tm, bound, sign = args
    g = GitData(r, n, chars)
    kw = {"bound": bound, "sector_sign": sign} if name == "ifun" else {}
    return [c.as_dict() for c in run_suite(name, g, StabilityVector(tp), tm and StabilityVector(tm), **kw)]


def _task(name: str, spec: InputSpec, opts: dict) -> tuple:
    bound = Fraction(opts.get("bound") or spec.options.get("bound", "1"))
    sign = opts.get("sector_sign") or spec.options.get("sector_sign", "minus")
    return (name, spec.r, spec.n, spec.characters, spec.theta_plus, spec.theta_minus, bound, sign)


def worker_count() -> int:
    env = os.environ.get("WALLCROSS_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            cap = max(1, int(env))
        except ValueError:
            raise SchemaError("WALLCROSS_THREADS must be a positive integer") from None
    return cap


def cmd_verify(spec, opts):
    from .checks import SUITES

    tasks = [_task(name, spec, opts) for name in SUITES]
    workers = min(worker_count(), len(tasks))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_suite_task, tasks))
    else:
        results = [_suite_task(t) for t in tasks]
    suites = {name: res for name, res in zip(SUITES, results)}
    ok = all(c["ok"] for res in results for c in res)
    return {"suites": suites, "ok": ok}, 0 if ok else 3


HANDLERS = {
    "validate": cmd_validate,
    "chambers": cmd_chambers,
    "wallcross": cmd_wallcross,
    "fan": cmd_fan,
    "fixed-points": cmd_fixed_points,
    "fm": cmd_fm,
    "monodromy": cmd_monodromy,
    "ifunction": cmd_ifunction,
    "verify": cmd_verify,
}


# the invariant suite attached to each command's report
COMMAND_SUITES = {
    "chambers": ("gitchambers",),
    "wallcross": ("gitchambers",),
    "fan": ("fgab", "stackgeom"),
    "fixed-points": ("stackgeom", "eqk"),
    "fm": ("fmk",),
    "monodromy": ("fmk",),
    "ifunction": ("ifun",),
}


def run(command: str, spec: InputSpec, opts: dict | None = None) -> tuple[dict, int]:
    opts = opts or {}
    results, code = HANDLERS[command](spec, opts)
    checks = []
    for name in COMMAND_SUITES.get(command, ()):
        checks += _suite_task(_task(name, spec, opts))
    if command == "verify":
        checks = [c for suite in results["suites"].values() for c in suite]
    if command == "validate":
        checks = [
            {"name": f"validate.{k}_{side}", "ok": v["ok"], "detail": v["detail"]}
            for side, rep in results["report"].items()
            for k, v in rep.items()
        ]
    if code == 0 and not all(c["ok"] for c in checks):
        code = 3
    report = {
        "command": command,
        "input": {"name": spec.name, "digest": spec.digest},
        "results": results,
        "checks": checks,
    }
    return report, code


def _text(report: dict) -> str:
    lines = [f"command: {report['command']}", f"input: {report['input']['name']} ({report['input']['digest'][:12]})"]

    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k in sorted(obj):
                v = obj[k]
                if isinstance(v, (dict, list)) and v and not all(isinstance(x, (str, int, bool)) for x in (v if isinstance(v, list) else [None])):
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {json.dumps(v, ensure_ascii=False)}")
        elif isinstance(obj, list):
            for v in obj:
                if isinstance(v, (dict, list)):
                    lines.append(f"{pad}-")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}- {v}")

    walk(report["results"], 1)
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wallcross", description="Exact wall-crossing computations for Lawrence toric and hypertoric stacks.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("input", help="input JSON file, or the name of a bundled fixture such as tstar_p12")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--bound", help="truncation bound B as p/q (ifunction, verify)")
    ap.add_argument("--sector-sign", choices=("minus", "plus"), dest="sector_sign")
    ap.add_argument("--side", choices=("plus", "minus"))
    ap.add_argument("--pretty", action="store_true", help="indent the JSON report")
    ap.add_argument("--text", action="store_true", help="plain-text report instead of JSON")
    ap.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report (breaks byte-identical output)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    opts = {"bound": args.bound, "sector_sign": args.sector_sign, "side": args.side}
    if args.bound is not None and not _RATIONAL.match(args.bound):
        print(f"error: NonRationalNumber: --bound {args.bound!r} must be an integer or p/q", file=sys.stderr)
        return 2
    start = time.perf_counter()
    try:
        spec = parse_input(args.input, strict=args.command != "validate")
        report, code = run(args.command, spec, opts)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except WallcrossError as exc:
        print(f"error: {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 3)
    out = _text(report) if args.text else dumps(report, pretty=args.pretty) + "\n"
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
