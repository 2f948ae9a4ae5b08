"""Lossless JSON encodings for exact values."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .cyclotomic import Cyclo, CycloScalar, Poly


def q(x) -> str:
    return str(Fraction(x))


def qvec(v) -> list[str]:
    return [q(x) for x in v]


def cyclo_json(c: Cyclo) -> dict:
    n = c.normalized()
    return {"M": n.M, "coeffs": qvec(n.c)}


def poly_json(p: Poly) -> list:
    return [{"exps": qvec(e), "coeff": cyclo_json(c)} for e, c in sorted(p.terms.items())]


def scalar_json(s: CycloScalar) -> dict:
    den = [{"factor": poly_json(p), "mult": m} for p, m in s.den.values()]
    den.sort(key=lambda x: json.dumps(x, sort_keys=True))
    return {"num": poly_json(s.num), "den": den}


def kclass_json(k) -> dict:
    return {
        "side": k.side.tag,
        "values": [{"point": point_json(pt), "value": scalar_json(v)} for pt, v in zip(k.side.points, k.values)],
    }


def point_json(pt) -> dict:
    delta, ghat = pt
    return {"delta": list(delta), "g": qvec(ghat)}


def label_json(lab) -> dict:
    delta, rho = lab
    return {"delta": list(delta), "rho": list(rho)}


def to_jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return q(x)
    if isinstance(x, CycloScalar):
        return scalar_json(x)
    if isinstance(x, Poly):
        return poly_json(x)
    if isinstance(x, Cyclo):
        return cyclo_json(x)
    if isinstance(x, (frozenset, set)):
        return sorted(to_jsonable(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    return x


def dumps(obj: Any, pretty: bool = False) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2 if pretty else None, separators=None if pretty else (",", ":"), ensure_ascii=False)
