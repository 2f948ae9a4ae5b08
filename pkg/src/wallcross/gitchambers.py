"""GIT data, anticones, chambers and single-wall crossings.

Indices of characters are 1-based throughout, matching the usual D_1..D_N
labelling; index sets are frozensets.  The layout of a Lawrence datum is
fixed: D_1..D_n, then D_{n+i} = -D_i, then the extended characters.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from . import polyhedra as ph
from .errors import NonGenericTheta, NotAdjacent, SameChamber
from .fgab import IntMatrix, kernel_basis, smith_normal_form

Subset = frozenset


@dataclass(frozen=True)
class StabilityVector:
    """θ ∈ 𝕃^∨ ⊗ ℚ, optionally perturbed by an infinitesimal: value + ε·infinitesimal."""

    value: tuple[Fraction, ...]
    infinitesimal: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "value", tuple(Fraction(x) for x in self.value))
        if self.infinitesimal is not None:
            inf = tuple(Fraction(x) for x in self.infinitesimal)
            object.__setattr__(self, "infinitesimal", inf if any(inf) else None)

    @classmethod
    def of(cls, *xs) -> StabilityVector:
        return cls(tuple(xs))

    def __len__(self):
        return len(self.value)

    def lex(self) -> tuple[tuple[Fraction, ...], ...]:
        if self.infinitesimal is None:
            return tuple((x,) for x in self.value)
        return tuple(zip(self.value, self.infinitesimal))

    def pair_sign(self, e: Sequence[int]) -> int:
        return ph.lex_sign(tuple(sum(Fraction(a) * t[k] for a, t in zip(e, self.lex())) for k in range(len(self.lex()[0]))))

    def __str__(self):
        s = "(" + ", ".join(str(x) for x in self.value)
        if self.infinitesimal is not None:
            s += "; eps·(" + ", ".join(str(x) for x in self.infinitesimal) + ")"
        return s + ")"


def as_theta(theta) -> StabilityVector:
    if isinstance(theta, StabilityVector):
        return theta
    if isinstance(theta, (int, Fraction)):
        return StabilityVector((theta,))
    return StabilityVector(tuple(theta))


@dataclass(frozen=True)
class GitData:
    """Characters D_1..D_N ∈ 𝕃^∨ = ℤ^r of a Lawrence datum with ``n`` pairs."""

    r: int
    n: int
    characters: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        chars = tuple(tuple(int(x) for x in c) for c in self.characters)
        object.__setattr__(self, "characters", chars)
        if any(len(c) != self.r for c in chars):
            raise ValueError("every character needs r coordinates")
        if len(chars) < 2 * self.n:
            raise ValueError("fewer characters than Lawrence pairs")

    @classmethod
    def lawrence(cls, half: Iterable[Sequence[int]], extended: Iterable[Sequence[int]] = ()) -> GitData:
        """Build D_1..D_n, -D_1..-D_n, extended from the first half."""
        half = [tuple(int(x) for x in v) for v in half]
        ext = [tuple(int(x) for x in v) for v in extended]
        r = len(half[0]) if half else len(ext[0])
        return cls(r, len(half), tuple(half + [tuple(-x for x in v) for v in half] + ext))

    @classmethod
    def rank_one(cls, *half: int, extended: Sequence[int] = ()) -> GitData:
        return cls.lawrence([(a,) for a in half], [(a,) for a in extended])

    @property
    def N(self) -> int:
        return len(self.characters)

    @property
    def ext_count(self) -> int:
        return self.N - 2 * self.n

    @property
    def m(self) -> int:
        """Rank of the big torus acting on the coordinates (n + |S|)."""
        return self.n + self.ext_count

    @property
    def extended_indices(self) -> frozenset[int]:
        return frozenset(range(2 * self.n + 1, self.N + 1))

    def char(self, i: int) -> tuple[int, ...]:
        return self.characters[i - 1]

    def twist(self, i: int) -> tuple[int, ...]:
        """Equivariant weight of R_i over the basis (λ_1, ..., λ_m, λ)."""
        w = [0] * (self.m + 1)
        if i <= self.n:
            w[i - 1] = 1
        elif i <= 2 * self.n:
            w[i - self.n - 1] = -1
            w[self.m] = 1
        else:
            w[self.n + (i - 2 * self.n) - 1] = 1
        return tuple(w)

    def lawrence_pairing_ok(self) -> bool:
        return all(self.char(self.n + i) == tuple(-x for x in self.char(i)) for i in range(1, self.n + 1))

    def calabi_yau_ok(self) -> bool:
        return all(sum(self.char(i)[k] for i in range(1, 2 * self.n + 1)) == 0 for k in range(self.r))

    def inclusion(self) -> IntMatrix:
        """𝕃 ↪ ℤ^N, x ↦ (⟨D_i, x⟩)_i (an N×r matrix)."""
        return IntMatrix.from_rows(self.characters, self.r)


def _chars(data):
    return data.characters


def _index_sets(N, size):
    return (frozenset(c) for c in combinations(range(1, N + 1), size))


@lru_cache(maxsize=200_000)
def _angle_contains(chars, I, lex_theta) -> bool:
    return ph.in_open_cone([chars[i - 1] for i in sorted(I)], lex_theta)


def angle_contains(data, I: Iterable[int], theta) -> bool:
    """θ ∈ ∠_I = {Σ_{i∈I} a_i D_i : a_i > 0}, with ∠_∅ = {0}; decided exactly."""
    return _angle_contains(_chars(data), frozenset(I), as_theta(theta).lex())


def span_rank(data, I: Iterable[int]) -> int:
    return ph.rank([data.characters[i - 1] for i in sorted(I)])


def _flats_below_full_rank(data):
    """Closures of rank-deficient spans; θ ∈ some rank-deficient ∠_I iff θ ∈ ∠_F for one of these."""
    chars, r, N = data.characters, data.r, len(data.characters)
    flats = set()
    for k in range(r):
        for I in combinations(range(1, N + 1), k):
            vecs = [chars[i - 1] for i in I]
            if ph.rank(vecs) != k:
                continue
            flat = frozenset(j for j in range(1, N + 1) if ph.rank(vecs + [chars[j - 1]]) == k)
            flats.add(flat)
    return sorted(flats, key=lambda f: (len(f), sorted(f)))


def is_generic(data, theta) -> bool:
    """θ lies in an open chamber: θ ∉ ∠_I for every I whose characters fail to span."""
    theta = as_theta(theta)
    return not any(angle_contains(data, F, theta) for F in _flats_below_full_rank(data))


@dataclass(frozen=True)
class AnticoneSet:
    """Minimal anticones of 𝒜_θ plus an upward-closure membership test."""

    minimal: tuple[frozenset[int], ...]
    N: int

    def __contains__(self, I) -> bool:
        I = frozenset(I)
        return any(d <= I for d in self.minimal)

    def all_anticones(self) -> list[frozenset[int]]:
        return [frozenset(c) for k in range(self.N + 1) for c in combinations(range(1, self.N + 1), k) if frozenset(c) in self]

    def sorted_minimal(self) -> list[tuple[int, ...]]:
        return [tuple(sorted(d)) for d in self.minimal]


def _minimal_anticones(data, theta) -> tuple[frozenset[int], ...]:
    # For generic θ every minimal anticone has exactly r elements: a smaller one
    # would put θ in a rank-deficient ∠_I.  So the scan stops at size r; the
    # cost is C(N, r) exact feasibility tests (fine for N ≤ 12).
    found = []
    for k in range(data.r + 1):
        for I in _index_sets(len(data.characters), k):
            if any(d <= I for d in found):
                continue
            if angle_contains(data, I, theta):
                found.append(I)
    return tuple(sorted(found, key=sorted))


def anticone_set(data, theta) -> AnticoneSet:
    theta = as_theta(theta)
    if not is_generic(data, theta):
        raise NonGenericTheta(f"theta={theta} lies on a wall")
    return AnticoneSet(_minimal_anticones(data, theta), len(data.characters))


def extended_set(data, theta) -> frozenset[int]:
    """S = {i : [N] minus {i} is not an anticone}."""
    A = anticone_set(data, theta)
    full = frozenset(range(1, len(data.characters) + 1))
    return frozenset(i for i in full if (full - {i}) not in A)


@dataclass
class ValidationReport:
    checks: dict[str, tuple[bool, str]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(ok for ok, _ in self.checks.values())

    def add(self, name, ok, detail=""):
        self.checks[name] = (bool(ok), detail)

    def failures(self) -> list[str]:
        return [k for k, (ok, _) in self.checks.items() if not ok]


def validate(g: GitData, theta) -> ValidationReport:
    theta = as_theta(theta)
    rep = ValidationReport()
    rep.add("lawrence_pairing", g.lawrence_pairing_ok(), "D_{n+i} = -D_i")
    rep.add("calabi_yau", g.calabi_yau_ok(), "sum of the 2n Lawrence characters vanishes")
    snf = smith_normal_form(g.inclusion())
    rep.add("C1", snf.rank == g.r, f"kernel inclusion has rank {snf.rank} of {g.r}")
    generic = len(theta) == g.r and is_generic(g, theta)
    rep.add("generic", generic, "theta in an open chamber" if generic else "theta lies on a wall")
    full = frozenset(range(1, g.N + 1))
    rep.add("A1", len(theta) == g.r and angle_contains(g, full, theta), "[N] is an anticone")
    if generic:
        A = anticone_set(g, theta)
        bad = [sorted(d) for d in A.minimal if span_rank(g, d) < g.r]
        rep.add("A2", not bad, f"non-spanning minimal anticones: {bad}" if bad else "every minimal anticone spans")
    else:
        rep.add("A2", False, "not checked: theta is not generic")
    return rep


# wall crossing ---------------------------------------------------------------


def chamber_inequalities(data, A: AnticoneSet) -> list[tuple[int, ...]]:
    """Primitive normals h with closure(C) = {x : h·x ≥ 0 for all h}."""
    hs = set()
    for d in A.minimal:
        cols = [data.characters[i - 1] for i in sorted(d)]
        M = [[cols[j][k] for j in range(len(cols))] for k in range(data.r)]
        for row in ph.inverse(M):
            hs.add(ph.primitive(row))
    return sorted(hs)


@dataclass(frozen=True)
class WallCrossingData:
    git: GitData
    theta_plus: StabilityVector
    theta_minus: StabilityVector
    anticones_plus: AnticoneSet
    anticones_minus: AnticoneSet
    wall_basis: tuple[tuple[int, ...], ...]
    e: tuple[int, ...]
    M_plus: frozenset[int]
    M_minus: frozenset[int]
    M_zero: frozenset[int]
    theta_zero: StabilityVector
    facet_rays: tuple[tuple[int, ...], ...] = ()

    def pairing(self, i: int) -> int:
        return sum(a * b for a, b in zip(self.git.char(i), self.e))


def wall_crossing(g: GitData, theta_plus, theta_minus) -> WallCrossingData:
    tp, tm = as_theta(theta_plus), as_theta(theta_minus)
    Ap, Am = anticone_set(g, tp), anticone_set(g, tm)
    if set(Ap.minimal) == set(Am.minimal):
        raise SameChamber("both stability conditions lie in the same chamber")
    r = g.r
    hp, hm = chamber_inequalities(g, Ap), chamber_inequalities(g, Am)
    rays = ph.cone_rays(sorted(set(hp) | set(hm)), r)
    dim = ph.rank(rays)
    if dim != r - 1:
        raise NotAdjacent(f"shared boundary has dimension {dim}, need {r - 1}")
    if rays:
        normals = kernel_basis(IntMatrix.from_rows(rays, r)).columns()
    else:
        normals = [(1,)]
    if len(normals) != 1:
        raise NotAdjacent("shared boundary does not span a hyperplane")
    e = normals[0]
    if tp.pair_sign(e) < 0:
        e = tuple(-x for x in e)
    if not (tp.pair_sign(e) > 0 and tm.pair_sign(e) < 0):
        raise NotAdjacent("the wall does not separate the two stability conditions")
    wall = kernel_basis(IntMatrix.from_rows([e], r)).columns()
    if rays:
        theta0 = tuple(Fraction(sum(v[k] for v in rays), len(rays)) for k in range(r))
    else:
        theta0 = (Fraction(0),) * r
    pair = {i: sum(a * b for a, b in zip(g.char(i), e)) for i in range(1, g.N + 1)}
    return WallCrossingData(
        git=g,
        theta_plus=tp,
        theta_minus=tm,
        anticones_plus=Ap,
        anticones_minus=Am,
        wall_basis=tuple(wall),
        e=tuple(e),
        M_plus=frozenset(i for i, v in pair.items() if v > 0),
        M_minus=frozenset(i for i, v in pair.items() if v < 0),
        M_zero=frozenset(i for i, v in pair.items() if v == 0),
        theta_zero=StabilityVector(theta0),
        facet_rays=tuple(rays),
    )


@dataclass(frozen=True)
class TildeGitData:
    """Rank r+1 datum of the common blow-up: characters D̃_1..D̃_{N+1}."""

    base: GitData
    r: int
    characters: tuple[tuple[int, ...], ...]
    theta: StabilityVector
    theta_plus: StabilityVector
    theta_minus: StabilityVector

    @property
    def N(self) -> int:
        return len(self.characters)

    @property
    def m(self) -> int:
        return self.base.m

    def char(self, i: int) -> tuple[int, ...]:
        return self.characters[i - 1]

    def twist(self, i: int) -> tuple[int, ...]:
        if i == self.N:
            return (0,) * (self.base.m + 1)
        return self.base.twist(i)


def tilde_data(wc: WallCrossingData) -> TildeGitData:
    g = wc.git
    chars = []
    for i in range(1, g.N + 1):
        p = wc.pairing(i)
        chars.append(g.char(i) + ((-p,) if p > 0 else (0,)))
    chars.append((0,) * g.r + (1,))
    one = Fraction(1)
    return TildeGitData(
        base=g,
        r=g.r + 1,
        characters=tuple(chars),
        theta=StabilityVector(wc.theta_zero.value + (Fraction(0),), (Fraction(0),) * g.r + (-one,)),
        theta_plus=StabilityVector(wc.theta_plus.value + (one,)),
        theta_minus=StabilityVector(wc.theta_minus.value + (one,)),
    )
