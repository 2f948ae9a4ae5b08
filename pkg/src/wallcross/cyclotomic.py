"""Exact scalars: cyclotomic numbers, Λ-Laurent polynomials with rational
exponents, and rational functions with factored denominators.

``Cyclo`` is an element of ℚ(ζ_M) on the power basis 1, ζ, …, ζ^{φ(M)-1}.
Operands with different conductors are embedded into the lcm field, and
``normalized()`` descends to the smallest M that still contains the value,
so equal numbers always share one canonical representation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from . import polyhedra as ph

F0, F1 = Fraction(0), Fraction(1)


# cyclotomic polynomials ------------------------------------------------------


def _poly_divexact(a: list[int], b: list[int]) -> list[int]:
    # coefficient lists, lowest degree first; b monic
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = a[k + len(b) - 1]
        q[k] = c
        if c:
            for j, bj in enumerate(b):
                a[k + j] -= c * bj
    if any(a[: len(b) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(M: int) -> tuple[int, ...]:
    """Φ_M with integer coefficients, lowest degree first."""
    num = [-1] + [0] * (M - 1) + [1]
    for d in range(1, M):
        if M % d == 0:
            num = _poly_divexact(num, list(cyclotomic_poly(d)))
    return tuple(num)


def phi(M: int) -> int:
    return len(cyclotomic_poly(M)) - 1


@lru_cache(maxsize=None)
def _power_table(M: int) -> tuple[tuple[Fraction, ...], ...]:
    """x^k mod Φ_M for 0 ≤ k < 2·max(φ(M), M)."""
    P = cyclotomic_poly(M)
    deg = len(P) - 1
    size = 2 * max(deg, M) + 1
    rows = []
    cur = [F0] * deg
    cur[0] = F1
    for _ in range(size):
        rows.append(tuple(cur))
        # multiply by x and reduce using x^deg = -Σ P_k x^k
        top = cur[-1]
        cur = [F0] + cur[:-1]
        if top:
            cur = [c - top * P[k] for k, c in enumerate(cur)]
    return tuple(rows)


def _reduce(coeffs: Sequence[Fraction], M: int) -> tuple[Fraction, ...]:
    table = _power_table(M)
    deg = phi(M)
    out = [F0] * deg
    for k, c in enumerate(coeffs):
        if c:
            row = table[k] if k < len(table) else table[k % M]
            for j, x in enumerate(row):
                if x:
                    out[j] += c * x
    return tuple(out)


@lru_cache(maxsize=None)
def _embed_matrix(M: int, M2: int) -> tuple[tuple[Fraction, ...], ...]:
    # images of ζ_M^k (k < φ(M)) in ℚ(ζ_{M2}), M | M2
    step = M2 // M
    table = _power_table(M2)
    return tuple(table[(k * step) % M2] for k in range(phi(M)))


class Cyclo:
    """An element of the cyclotomic field ℚ(ζ_M)."""

    __slots__ = ("M", "c")

    def __init__(self, M: int, coeffs: Iterable = ()):
        c = [Fraction(x) for x in coeffs]
        deg = phi(M)
        if len(c) > deg:
            c = list(_reduce(c, M))
        c += [F0] * (deg - len(c))
        self.M = M
        self.c = tuple(c)

    # constructors
    @classmethod
    def rational(cls, q) -> Cyclo:
        return cls(1, (Fraction(q),))

    @classmethod
    def zeta(cls, M: int, k: int = 1) -> Cyclo:
        return cls(M, _power_table(M)[k % M])

    @classmethod
    def exp2pi(cls, q) -> Cyclo:
        """exp(2πi·q) for rational q."""
        q = Fraction(q) % 1
        return cls.zeta(q.denominator, q.numerator)

    # structure
    def embed(self, M2: int) -> Cyclo:
        if M2 == self.M:
            return self
        if M2 % self.M:
            raise ValueError(f"cannot embed Q(zeta_{self.M}) into Q(zeta_{M2})")
        E = _embed_matrix(self.M, M2)
        out = [F0] * phi(M2)
        for a, row in zip(self.c, E):
            if a:
                for j, x in enumerate(row):
                    if x:
                        out[j] += a * x
        return Cyclo(M2, out)

    def descend(self, d: int) -> Cyclo | None:
        """The same number as an element of ℚ(ζ_d), or None if it is not there."""
        if self.M % d:
            d2 = lcm(d, self.M)
            return self.embed(d2).descend(d) if d2 != self.M else None
        if d == self.M:
            return self
        if not any(self.c[1:]):
            return Cyclo(d, (self.c[0],))
        E = _embed_matrix(d, self.M)
        A = [[E[k][j] for k in range(len(E))] for j in range(len(self.c))]
        x = ph.solve(A, self.c)
        return None if x is None else Cyclo(d, x)

    def normalized(self) -> Cyclo:
        if self.M == 1:
            return self
        if not any(self.c[1:]):
            return Cyclo(1, (self.c[0],))
        for d in range(1, self.M):
            if self.M % d == 0:
                x = self.descend(d)
                if x is not None:
                    return x
        return self

    def key(self) -> tuple:
        n = self.normalized()
        return (n.M, n.c)

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return self.normalized().M == 1

    def __bool__(self):
        return not self.is_zero()

    # arithmetic
    def _lift(self, other) -> tuple[Cyclo, Cyclo]:
        if not isinstance(other, Cyclo):
            other = Cyclo.rational(other)
        if self.M == other.M:
            return self, other
        M = lcm(self.M, other.M)
        return self.embed(M), other.embed(M)

    def __add__(self, other):
        a, b = self._lift(other)
        return Cyclo(a.M, [x + y for x, y in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.M, [-x for x in self.c])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyclo) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Cyclo):
            q = Fraction(other)
            return Cyclo(self.M, [x * q for x in self.c])
        a, b = self._lift(other)
        prod = [F0] * (2 * len(a.c) - 1)
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        prod[i + j] += x * y
        return Cyclo(a.M, _reduce(prod, a.M))

    __rmul__ = __mul__

    def inverse(self) -> Cyclo:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        n = len(self.c)
        # column k of the multiplication-by-self matrix is self·ζ^k
        cols = [(self * Cyclo(self.M, _power_table(self.M)[k])).c for k in range(n)]
        A = [[cols[k][j] for k in range(n)] for j in range(n)]
        x = ph.solve(A, [F1] + [F0] * (n - 1))
        return Cyclo(self.M, x)

    def __truediv__(self, other):
        if not isinstance(other, Cyclo):
            return self * (F1 / Fraction(other))
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Cyclo.rational(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Cyclo):
            try:
                other = Cyclo.rational(other)
            except (TypeError, ValueError):
                return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Cyclo({self.M}, {[str(x) for x in self.c]})"

    def __str__(self):
        n = self.normalized()
        if n.M == 1:
            return str(n.c[0])
        parts = []
        for k, x in enumerate(n.c):
            if x:
                parts.append(str(x) if k == 0 else f"{x}*z{n.M}^{k}")
        return "(" + " + ".join(parts) + ")" if parts else "0"


# units: root of unity times a Λ-monomial --------------------------------------

Exps = tuple  # tuple[Fraction, ...]


def _add_exps(a: Exps, b: Exps) -> Exps:
    return tuple(x + y for x, y in zip(a, b))


def _scale_exps(a: Exps, q) -> Exps:
    return tuple(x * q for x in a)


@dataclass(frozen=True)
class Unit:
    """exp(2πi·phase) · Λ^exps, with phase taken mod 1."""

    phase: Fraction
    exps: Exps

    def __post_init__(self):
        object.__setattr__(self, "phase", Fraction(self.phase) % 1)
        object.__setattr__(self, "exps", tuple(Fraction(x) for x in self.exps))

    @classmethod
    def one(cls, nvars: int) -> Unit:
        return cls(F0, (F0,) * nvars)

    @classmethod
    def monomial(cls, exps) -> Unit:
        return cls(F0, exps)

    def __mul__(self, other: Unit) -> Unit:
        return Unit(self.phase + other.phase, _add_exps(self.exps, other.exps))

    def inverse(self) -> Unit:
        return Unit(-self.phase, tuple(-x for x in self.exps))

    def __truediv__(self, other: Unit) -> Unit:
        return self * other.inverse()

    def __pow__(self, k) -> Unit:
        k = Fraction(k)
        if k.denominator != 1:
            raise ValueError("use root() for fractional powers")
        return Unit(self.phase * k, _scale_exps(self.exps, k))

    def root(self, l: int, branch: int = 0) -> Unit:
        """Principal l-th root (phase in [0, 1/l)), times ζ_l^branch."""
        return Unit((self.phase + branch) / l, _scale_exps(self.exps, Fraction(1, l)))

    def is_one(self) -> bool:
        return self.phase == 0 and not any(self.exps)

    def coeff(self) -> Cyclo:
        return Cyclo.exp2pi(self.phase)

    def as_poly(self) -> Poly:
        return Poly({self.exps: self.coeff()}, len(self.exps))

    def as_scalar(self) -> CycloScalar:
        return CycloScalar(self.as_poly())


# Laurent polynomials ---------------------------------------------------------


class Poly:
    """Finite sum of Cyclo · Λ^a with a ∈ ℚ^nvars."""

    __slots__ = ("nvars", "terms")

    def __init__(self, terms: Mapping[Exps, Cyclo] | None = None, nvars: int = 0):
        t = {}
        for e, c in (terms or {}).items():
            e = tuple(Fraction(x) for x in e)
            if not isinstance(c, Cyclo):
                c = Cyclo.rational(c)
            if not c.is_zero():
                t[e] = c
        self.terms = t
        self.nvars = nvars

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> Poly:
        # trusted constructor: Fraction exponents, nonzero Cyclo coefficients
        p = cls.__new__(cls)
        p.terms, p.nvars = terms, nvars
        return p

    @classmethod
    def const(cls, c, nvars: int) -> Poly:
        return cls({(F0,) * nvars: c}, nvars)

    @classmethod
    def zero(cls, nvars: int) -> Poly:
        return cls({}, nvars)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: Poly) -> Poly:
        t = dict(self.terms)
        for e, c in other.terms.items():
            if e in t:
                s = t[e] + c
                if s.is_zero():
                    del t[e]
                else:
                    t[e] = s
            else:
                t[e] = c
        return Poly._raw(t, self.nvars)

    def __neg__(self) -> Poly:
        return Poly._raw({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other) -> Poly:
        if isinstance(other, Unit):
            c = other.coeff()
            return Poly({_add_exps(e, other.exps): x * c for e, x in self.terms.items()}, self.nvars)
        if not isinstance(other, Poly):
            return Poly({e: x * other for e, x in self.terms.items()}, self.nvars)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exps(e1, e2)
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return Poly._raw({e: c for e, c in out.items() if not c.is_zero()}, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        out = Poly.const(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def lead(self) -> tuple[Exps, Cyclo]:
        e = min(self.terms)
        return e, self.terms[e]

    def conductor(self) -> int:
        return lcm(1, *(c.normalized().M for c in self.terms.values()))

    def exponent_denominator(self) -> int:
        return lcm(1, *(x.denominator for e in self.terms for x in e))

    def normalized_terms(self) -> list[tuple[Exps, Cyclo]]:
        return sorted((e, c.normalized()) for e, c in self.terms.items())

    def key(self) -> tuple:
        return tuple((e, c.key()) for e, c in sorted(self.terms.items()))

    def descends_to(self, M: int) -> bool:
        """All coefficients in ℚ(ζ_M) and all exponent denominators dividing M."""
        if M % self.exponent_denominator():
            return False
        return all(c.descend(M) is not None for c in self.terms.values())

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.normalized_terms():
            mono = "*".join(f"L{k + 1}^{x}" if x != 1 else f"L{k + 1}" for k, x in enumerate(e) if x)
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)


def _monic_factor(p: Poly) -> tuple[Poly, Unit | None, Cyclo]:
    """Write p = scale · Λ^a · q with q's smallest term equal to 1."""
    e, c = p.lead()
    inv = c.inverse()
    shift = tuple(-x for x in e)
    q = Poly({_add_exps(k, shift): v * inv for k, v in p.terms.items()}, p.nvars)
    return q, Unit.monomial(e), c


class CycloScalar:
    """num / (Π factor^mult), the denominator factored into monic Laurent polynomials."""

    __slots__ = ("num", "den", "nvars")

    def __init__(self, num: Poly, den: Mapping[tuple, tuple[Poly, int]] | None = None):
        self.num = num
        self.nvars = num.nvars
        self.den = dict(den or {})

    @classmethod
    def const(cls, c, nvars: int) -> CycloScalar:
        return cls(Poly.const(c, nvars))

    @classmethod
    def zero(cls, nvars: int) -> CycloScalar:
        return cls(Poly.zero(nvars))

    @classmethod
    def one(cls, nvars: int) -> CycloScalar:
        return cls.const(1, nvars)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _den_poly(self, keys=None) -> Poly:
        out = Poly.const(1, self.nvars)
        for k, (p, m) in self.den.items():
            if keys is not None:
                m = keys.get(k, 0)
            out = out * (p ** m)
        return out

    def _with_den(self, target: Mapping[tuple, tuple[Poly, int]]) -> Poly:
        num = self.num
        for k, (p, m) in target.items():
            have = self.den.get(k, (p, 0))[1]
            if m > have:
                num = num * (p ** (m - have))
        return num

    def __add__(self, other):
        other = _as_scalar(other, self.nvars)
        den = dict(self.den)
        for k, (p, m) in other.den.items():
            if k not in den or den[k][1] < m:
                den[k] = (p, m)
        num = self._with_den(den) + other._with_den(den)
        return CycloScalar(num, den)._trim() if not num.is_zero() else CycloScalar.zero(self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return CycloScalar(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_scalar(other, self.nvars))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Unit):
            return CycloScalar(self.num * other, self.den)
        other = _as_scalar(other, self.nvars)
        if self.is_zero() or other.is_zero():
            return CycloScalar.zero(self.nvars)
        den = dict(self.den)
        for k, (p, m) in other.den.items():
            den[k] = (p, den[k][1] + m) if k in den else (p, m)
        return CycloScalar(self.num * other.num, den)._trim()

    __rmul__ = __mul__

    def inverse(self) -> CycloScalar:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        # numerator factors become denominator factors after normalization
        q, mono, c = _monic_factor(self.num)
        num = self._den_poly() * mono.inverse() * c.inverse()
        den = {}
        if len(q.terms) > 1:
            den[q.key()] = (q, 1)
        return CycloScalar(num, den)

    def __truediv__(self, other):
        other = _as_scalar(other, self.nvars)
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = CycloScalar.one(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def _trim(self) -> CycloScalar:
        # cancel denominator factors that divide the numerator exactly
        num, den = self.num, {}
        for k, (p, m) in self.den.items():
            while m > 0:
                qt = exact_divide(num, p)
                if qt is None:
                    break
                num, m = qt, m - 1
            if m:
                den[k] = (p, m)
        return CycloScalar(num, den)

    def __eq__(self, other):
        try:
            other = _as_scalar(other, self.nvars)
        except TypeError:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def descends_to(self, M: int) -> bool:
        return self.num.descends_to(M) and all(p.descends_to(M) for p, _ in self.den.values())

    def as_unit(self) -> tuple[Unit, Cyclo] | None:
        """(monomial, coefficient) when the value is c·Λ^a, else None."""
        if self.is_zero():
            return None
        d = self._den_poly()
        e, c = self.num.lead()
        de, dc = d.lead()
        mono = Unit.monomial(tuple(a - b for a, b in zip(e, de)))
        coeff = c / dc
        if (d * mono) * coeff == self.num:
            return mono, coeff
        return None

    def __repr__(self):
        return f"CycloScalar({self})"

    def __str__(self):
        if not self.den:
            return str(self.num)
        den = " * ".join(f"({p})" + (f"^{m}" if m > 1 else "") for _, (p, m) in sorted(self.den.items()))
        return f"({self.num}) / ({den})"


def _as_scalar(x, nvars: int) -> CycloScalar:
    if isinstance(x, CycloScalar):
        return x
    if isinstance(x, Poly):
        return CycloScalar(x)
    if isinstance(x, Unit):
        return x.as_scalar()
    if isinstance(x, (int, Fraction, Cyclo)):
        return CycloScalar.const(x, nvars)
    raise TypeError(f"cannot coerce {type(x).__name__} to a scalar")


def _degree_box(p: Poly) -> list[tuple[Fraction, Fraction]]:
    return [(min(e[k] for e in p.terms), max(e[k] for e in p.terms)) for k in range(p.nvars)]


def exact_divide(a: Poly, b: Poly, max_terms: int = 10_000) -> Poly | None:
    """a / b when b divides a in the Laurent ring, else None.

    Long division in the lexicographic order on exponents.  In every variable
    the degree range of a product is the sum of the ranges, so quotient terms
    must stay inside the box [min a − min b, max a − max b]; leaving it (or an
    empty box) proves non-divisibility.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero():
        return a
    abox, bbox = _degree_box(a), _degree_box(b)
    qbox = [(al - bl, ah - bh) for (al, ah), (bl, bh) in zip(abox, bbox)]
    if any(lo > hi for lo, hi in qbox):
        return None
    be, bc = b.lead()
    binv = bc.inverse()
    bterms = list(b.terms.items())
    rem = dict(a.terms)
    q: dict = {}
    for _ in range(max_terms):
        if not rem:
            return Poly._raw(q, a.nvars)
        e = min(rem)
        qe = tuple(x - y for x, y in zip(e, be))
        if any(not (lo <= x <= hi) for x, (lo, hi) in zip(qe, qbox)):
            return None
        qc = rem[e] * binv
        q[qe] = qc
        for te, tc in bterms:
            k = tuple(x + y for x, y in zip(te, qe))
            v = rem.get(k)
            nv = -(tc * qc) if v is None else v - tc * qc
            if nv.is_zero():
                rem.pop(k, None)
            else:
                rem[k] = nv
    return None


def galois_descends(values: Iterable[CycloScalar], M: int) -> bool:
    return all(v.descends_to(M) for v in values)


def gcd_all(xs: Iterable[int]) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g
