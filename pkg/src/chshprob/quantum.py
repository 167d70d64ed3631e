"""Quantum pair, three- and four-probabilities over spin measurement axes.

The four-probability P(lam a1, mu a2, nu b1, tau b2) is half the trace of a
product of four projectors.  The raw product is order dependent and complex;
averaging over all 24 orderings gives a real, symmetric (and sometimes
negative) master distribution whose pair marginals are the ordinary quantum
pair probabilities 1/4 (1 +- a.b).

Conventions
-----------
* Slots are ordered ``(a1, a2, b1, b2)``; signs ``(lam, mu, nu, tau)``.
* The antisymmetric (singlet) case is the symmetric one with the signs of the
  two ``b`` slots reversed.
* Angles are radians.  Photon polarizer angles must be doubled by the caller.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ValidationError
from .pauli import Axis, check_sign, dot, projector, trace

SignQuadruple = tuple[int, int, int, int]

# canonical order: ++++, +++-, ++-+, ..., ----
SIGN_QUADRUPLES: tuple[SignQuadruple, ...] = tuple(itertools.product((1, -1), repeat=4))

SLOT_NAMES = ("a1", "a2", "b1", "b2")
_B_SLOTS = (2, 3)
_PERMUTATIONS_4 = tuple(itertools.permutations(range(4)))
_PERMUTATIONS_3 = tuple(itertools.permutations(range(3)))


class Symmetry(str, enum.Enum):
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"

    @classmethod
    def coerce(cls, value: "Symmetry | str") -> "Symmetry":
        try:
            return cls(value)
        except ValueError:
            raise ValidationError(
                f"symmetry must be 'symmetric' or 'antisymmetric', got {value!r}"
            ) from None


def format_signs(signs: Iterable[int]) -> str:
    return "".join("+" if s > 0 else "-" for s in signs)


def parse_signs(text: str) -> tuple[int, ...]:
    out = []
    for ch in text:
        if ch == "+":
            out.append(1)
        elif ch in "-−":
            out.append(-1)
        else:
            raise ValidationError(f"bad sign character {ch!r} in {text!r}")
    return tuple(out)


def _signs(s, n: int) -> tuple[int, ...]:
    if isinstance(s, str):
        s = parse_signs(s)
    s = tuple(check_sign(v) for v in s)
    if len(s) != n:
        raise ValidationError(f"expected {n} signs, got {len(s)}")
    return s


class AxisQuadruple(NamedTuple):
    a1: Axis
    a2: Axis
    b1: Axis
    b2: Axis

    @classmethod
    def of(cls, axes: Sequence[Axis]) -> "AxisQuadruple":
        if len(axes) != 4:
            raise ValidationError(f"need four axes, got {len(axes)}")
        for ax in axes:
            if not isinstance(ax, Axis):
                raise ValidationError(f"expected Axis, got {type(ax).__name__}")
        return cls(*axes)


def _as_quadruple(q) -> AxisQuadruple:
    return q if isinstance(q, AxisQuadruple) else AxisQuadruple.of(q)


def _slot_index(slot) -> int:
    if isinstance(slot, str):
        try:
            return SLOT_NAMES.index(slot)
        except ValueError:
            raise ValidationError(f"unknown slot {slot!r}; use one of {SLOT_NAMES}") from None
    if slot in (0, 1, 2, 3):
        return int(slot)
    raise ValidationError(f"slot index out of range: {slot!r}")


def _flip_b(signs: Sequence[int]) -> SignQuadruple:
    lam, mu, nu, tau = signs
    return (lam, mu, -nu, -tau)


# --------------------------------------------------------------------------
# pair probabilities


def pair_prob_trace(a: Axis, sa: int, b: Axis, sb: int) -> float:
    """1/2 Tr[Pi(sa a) Pi(sb b)], the symmetric pair probability via matrices."""
    return 0.5 * trace(projector(a, sa) @ projector(b, sb)).real


def pair_prob(a: Axis, sa: int, b: Axis, sb: int, symmetry="symmetric") -> float:
    """Joint probability of +-1 outcomes along ``a`` and ``b``.

    Symmetric: 1/4 (1 + sa sb a.b).  Antisymmetric (singlet): 1/4 (1 - sa sb a.b).
    """
    sa, sb = check_sign(sa), check_sign(sb)
    sym = Symmetry.coerce(symmetry)
    sign = 1.0 if sym is Symmetry.SYMMETRIC else -1.0
    return 0.25 * (1.0 + sign * sa * sb * a.dot(b))


# --------------------------------------------------------------------------
# four-probabilities


def delta(q) -> float:
    """1/3 [(a1.a2)(b1.b2) + (a1.b1)(a2.b2) + (a1.b2)(b1.a2)]."""
    a1, a2, b1, b2 = _as_quadruple(q)
    return (
        a1.dot(a2) * b1.dot(b2) + a1.dot(b1) * a2.dot(b2) + a1.dot(b2) * b1.dot(a2)
    ) / 3.0


def _effective_signs(s, symmetry) -> SignQuadruple:
    s = _signs(s, 4)
    if Symmetry.coerce(symmetry) is Symmetry.ANTISYMMETRIC:
        s = _flip_b(s)
    return s


def four_prob_complex(q, s, symmetry="symmetric", order: Sequence[int] = (0, 1, 2, 3)) -> complex:
    """1/2 Tr of the four projectors multiplied in ``order`` (default a1 a2 b1 b2).

    Each sign travels with its axis when ``order`` permutes the factors.
    """
    q = _as_quadruple(q)
    s = _effective_signs(s, symmetry)
    p = [projector(q[k], s[k]) for k in order]
    return 0.5 * trace(p[0] @ p[1] @ p[2] @ p[3])


def four_prob_complex_closed(q, s, symmetry="symmetric") -> complex:
    """Closed form of the ordered (a1 a2 b1 b2) four-probability.

    (1/16){1 + sum_{i<j} s_i s_j v_i.v_j
           + i [lam mu nu (a1 x a2).b1 + lam mu tau (a1 x a2).b2
                + lam nu tau (b1 x b2).a1 + mu nu tau (b1 x b2).a2]
           + lam mu nu tau [(a1.a2)(b1.b2) - (a1 x a2).(b1 x b2)]}
    """
    a1, a2, b1, b2 = _as_quadruple(q)
    lam, mu, nu, tau = _effective_signs(s, symmetry)
    real = (
        1.0
        + lam * mu * a1.dot(a2)
        + lam * nu * a1.dot(b1)
        + lam * tau * a1.dot(b2)
        + mu * nu * a2.dot(b1)
        + mu * tau * a2.dot(b2)
        + nu * tau * b1.dot(b2)
        + lam * mu * nu * tau * (a1.dot(a2) * b1.dot(b2) - dot(a1.cross(a2), b1.cross(b2)))
    )
    a12 = a1.cross(a2)
    b12 = b1.cross(b2)
    imag = (
        lam * mu * nu * dot(a12, b1)
        + lam * mu * tau * dot(a12, b2)
        + lam * nu * tau * dot(b12, a1)
        + mu * nu * tau * dot(b12, a2)
    )
    return complex(real, imag) / 16.0


def four_prob_symmetrized_trace(q, s, symmetry="symmetric") -> complex:
    """Average of :func:`four_prob_complex` over all 24 factor orderings."""
    q = _as_quadruple(q)
    s = _effective_signs(s, symmetry)
    p = [projector(q[k], s[k]) for k in range(4)]
    total = 0j
    for i, j, k, l in _PERMUTATIONS_4:
        total += trace(p[i] @ p[j] @ p[k] @ p[l])
    return 0.5 * total / 24.0


def four_prob_symmetrized(q, s, symmetry="symmetric") -> float:
    """Real symmetrized four-probability.

    (1/16){1 + lam mu a1.a2 + lam nu a1.b1 + lam tau a1.b2
           + mu nu a2.b1 + mu tau a2.b2 + nu tau b1.b2 + lam mu nu tau Delta}
    """
    q = _as_quadruple(q)
    a1, a2, b1, b2 = q
    lam, mu, nu, tau = _effective_signs(s, symmetry)
    return (
        1.0
        + lam * mu * a1.dot(a2)
        + lam * nu * a1.dot(b1)
        + lam * tau * a1.dot(b2)
        + mu * nu * a2.dot(b1)
        + mu * tau * a2.dot(b2)
        + nu * tau * b1.dot(b2)
        + lam * mu * nu * tau * delta(q)
    ) / 16.0


@dataclass(frozen=True)
class FourProbTable:
    """Signed master distribution over the 16 sign quadruples.

    Entries are plain signed reals; negative values are kept as they are.
    ``axes`` is ``None`` for tables built by hand.
    """

    entries: Mapping[SignQuadruple, float]
    symmetry: Symmetry = Symmetry.SYMMETRIC
    axes: AxisQuadruple | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        entries = dict(self.entries)
        if len(entries) != 16:
            raise ValidationError(f"table needs exactly 16 entries, got {len(entries)}")
        norm = {}
        for key, value in entries.items():
            signs = _signs(key, 4)
            value = float(value)
            if not math.isfinite(value):
                raise ValidationError(f"table entry {format_signs(signs)} is not finite")
            norm[signs] = value
        if set(norm) != set(SIGN_QUADRUPLES):
            raise ValidationError("table keys must cover all 16 sign quadruples")
        object.__setattr__(self, "entries", {k: norm[k] for k in SIGN_QUADRUPLES})
        object.__setattr__(self, "symmetry", Symmetry.coerce(self.symmetry))

    @classmethod
    def uniform(cls, symmetry="symmetric") -> "FourProbTable":
        return cls({k: 1.0 / 16.0 for k in SIGN_QUADRUPLES}, symmetry)

    def __getitem__(self, signs) -> float:
        return self.entries[_signs(signs, 4)]

    def items(self):
        return self.entries.items()

    def values(self) -> list[float]:
        return list(self.entries.values())

    def total(self) -> float:
        return math.fsum(self.entries.values())

    def flipped_b(self) -> "FourProbTable":
        """The table of the other symmetry: entry(q) <- entry(q with b signs reversed)."""
        other = (
            Symmetry.ANTISYMMETRIC
            if self.symmetry is Symmetry.SYMMETRIC
            else Symmetry.SYMMETRIC
        )
        return FourProbTable(
            {k: self.entries[_flip_b(k)] for k in SIGN_QUADRUPLES}, other, self.axes
        )

    def min_entry(self) -> tuple[SignQuadruple, float]:
        key = min(self.entries, key=self.entries.__getitem__)
        return key, self.entries[key]


def table2(q, symmetry="symmetric") -> FourProbTable:
    """All 16 symmetrized four-probabilities for an axis quadruple."""
    q = _as_quadruple(q)
    sym = Symmetry.coerce(symmetry)
    return FourProbTable(
        {s: four_prob_symmetrized(q, s, sym) for s in SIGN_QUADRUPLES}, sym, q
    )


def complex_table(q, symmetry="symmetric") -> dict[SignQuadruple, complex]:
    """Unsymmetrized (ordered a1 a2 b1 b2) complex four-probabilities."""
    q = _as_quadruple(q)
    return {s: four_prob_complex(q, s, symmetry) for s in SIGN_QUADRUPLES}


def marginal_pair(t, keep: tuple, signs: tuple):
    """Sum the four entries of ``t`` whose kept slots carry ``signs``.

    ``t`` is a :class:`FourProbTable` or a 16-entry mapping (e.g. the complex
    table).  ``keep`` names two distinct slots, by name or index.
    """
    if isinstance(t, FourProbTable):
        entries = t.entries
    elif isinstance(t, Mapping):
        if len(t) != 16 or set(t) != set(SIGN_QUADRUPLES):
            raise ValidationError("malformed table: need the 16 sign quadruples as keys")
        entries = t
    else:
        raise ValidationError(f"malformed table of type {type(t).__name__}")
    if len(keep) != 2:
        raise ValidationError("keep must name exactly two slots")
    i, j = (_slot_index(k) for k in keep)
    if i == j:
        raise ValidationError("kept slots must differ")
    si, sj = _signs(signs, 2)
    return sum(v for k, v in entries.items() if k[i] == si and k[j] == sj)


def expected_marginal(q, keep: tuple, signs: tuple, symmetry="symmetric") -> float:
    """Pair probability a marginal must reproduce.

    The singlet sign reversal only applies to a pair straddling the two
    stations (one ``a`` slot and one ``b`` slot).
    """
    q = _as_quadruple(q)
    i, j = (_slot_index(k) for k in keep)
    si, sj = _signs(signs, 2)
    cross_station = (i in _B_SLOTS) != (j in _B_SLOTS)
    sym = Symmetry.coerce(symmetry) if cross_station else Symmetry.SYMMETRIC
    return pair_prob(q[i], si, q[j], sj, sym)


# --------------------------------------------------------------------------
# coplanar family and CHSH


def coplanar_axes(theta: float) -> AxisQuadruple:
    """Planar axes a1 = theta, a2 = -theta, b1 = 0, b2 = 2 theta (x-z plane).

    Gives a1.b1 = a1.b2 = a2.b1 = cos(theta) and a2.b2 = cos(3 theta).
    """
    return AxisQuadruple(
        Axis.in_plane(theta), Axis.in_plane(-theta), Axis.in_plane(0.0), Axis.in_plane(2 * theta)
    )


def chsh_closed_form(theta: float) -> float:
    return 3.0 * math.cos(theta) - math.cos(3.0 * theta)


def chsh_dot_form(q) -> float:
    """a1.b1 + a1.b2 + a2.b1 - a2.b2, each correlation assembled from pair probabilities.

    C(a, b) = sum_s [P_sym(a s, b s) - P_antisym(a s, b s)] = a.b
    """
    a1, a2, b1, b2 = _as_quadruple(q)

    def corr(a: Axis, b: Axis) -> float:
        return sum(
            pair_prob(a, s, b, s, Symmetry.SYMMETRIC) - pair_prob(a, s, b, s, Symmetry.ANTISYMMETRIC)
            for s in (1, -1)
        )

    return corr(a1, b1) + corr(a1, b2) + corr(a2, b1) - corr(a2, b2)


_CHSH_POSITIVE = tuple(
    parse_signs(t) for t in ("++++", "----", "+++-", "---+", "+-++", "-+--", "+--+", "-++-")
)
_CHSH_NEGATIVE = tuple(
    parse_signs(t) for t in ("++-+", "--+-", "-+++", "+---", "++--", "--++", "+-+-", "-+-+")
)


def chsh_from_master(t: FourProbTable) -> float:
    """2 {sum of the eight + entries - sum of the eight - entries} for one table.

    Equals sum_q gamma(q) P(q) with gamma = lam nu + lam tau + mu nu - mu tau.
    """
    if not isinstance(t, FourProbTable):
        raise ValidationError("expected a FourProbTable")
    plus = math.fsum(t.entries[k] for k in _CHSH_POSITIVE)
    minus = math.fsum(t.entries[k] for k in _CHSH_NEGATIVE)
    return 2.0 * (plus - minus)


def chsh_master_form(symmetric: FourProbTable, antisymmetric: FourProbTable | None = None) -> float:
    """CHSH value from the master tables, symmetric minus antisymmetric.

    Same-sign pair probabilities are taken from each table and subtracted,
    which works out to ``(chsh_from_master(sym) - chsh_from_master(antisym)) / 2``.
    ``antisymmetric`` defaults to the b-flipped symmetric table.
    """
    if not isinstance(symmetric, FourProbTable):
        raise ValidationError("expected a FourProbTable")
    if antisymmetric is None:
        antisymmetric = symmetric.flipped_b()
    elif not isinstance(antisymmetric, FourProbTable):
        raise ValidationError("expected a FourProbTable")
    if symmetric.symmetry is not Symmetry.SYMMETRIC or antisymmetric.symmetry is not Symmetry.ANTISYMMETRIC:
        raise ValidationError("table mismatch: need one symmetric and one antisymmetric table")
    if symmetric.axes is not None and antisymmetric.axes is not None:
        if tuple(symmetric.axes) != tuple(antisymmetric.axes):
            raise ValidationError("table mismatch: tables built on different axes")
    return 0.5 * (chsh_from_master(symmetric) - chsh_from_master(antisymmetric))


class ChshMaximum(NamedTuple):
    theta: float
    value: float


def chsh_maximum(thetas: np.ndarray | None = None) -> ChshMaximum:
    """Maximize 3 cos t - cos 3t on [0, pi]: grid scan, then bounded refinement."""
    if thetas is None:
        thetas = np.linspace(0.0, math.pi, 1801)
    thetas = np.asarray(thetas, dtype=float)
    values = 3.0 * np.cos(thetas) - np.cos(3.0 * thetas)
    k = int(np.argmax(values))
    lo = thetas[max(k - 1, 0)]
    hi = thetas[min(k + 1, len(thetas) - 1)]
    if hi <= lo:
        return ChshMaximum(float(thetas[k]), float(values[k]))
    res = minimize_scalar(
        lambda t: -chsh_closed_form(t), bounds=(lo, hi), method="bounded",
        options={"xatol": 1e-12},
    )
    if -res.fun >= values[k]:
        return ChshMaximum(float(res.x), float(-res.fun))
    return ChshMaximum(float(thetas[k]), float(values[k]))


def coplanar_curve(signs, thetas: Iterable[float], symmetry="symmetric") -> np.ndarray:
    """Four-probability ``signs`` along the coplanar family."""
    return np.array([four_prob_symmetrized(coplanar_axes(t), signs, symmetry) for t in thetas])


def negativity_intervals(signs, thetas: Sequence[float], symmetry="symmetric") -> list[tuple[float, float]]:
    """Maximal runs of grid points where the coplanar four-probability is negative.

    Returned as (first, last) grid angles of each run.
    """
    thetas = list(thetas)
    values = coplanar_curve(signs, thetas, symmetry)
    runs: list[tuple[float, float]] = []
    start = None
    for t, v in zip(thetas, values):
        if v < 0 and start is None:
            start = t
        elif v >= 0 and start is not None:
            runs.append((start, prev))
            start = None
        prev = t
    if start is not None:
        runs.append((start, thetas[-1]))
    return runs


# Trig-polynomial rows for the coplanar family, one per sign-flip pair.
# (constant, cos t, cos 2t, cos 3t, Delta) coefficients, all scaled by 1/16,
# and the same row written as a polynomial in C = cos t: (C^3, C^2, C, 1, Delta).
COPLANAR_ROWS: dict[str, tuple[tuple[int, ...], tuple[int, ...]]] = {
    "++++": ((1, 3, 2, 1, 1), (4, 4, 0, -1, 1)),
    "-+++": ((1, -1, 0, 1, -1), (4, 0, -4, 1, -1)),
    "+-++": ((1, 1, 0, -1, -1), (-4, 0, 4, 1, -1)),
    "++-+": ((1, -1, 0, 1, -1), (4, 0, -4, 1, -1)),
    "+++-": ((1, 1, 0, -1, -1), (-4, 0, 4, 1, -1)),
    "++--": ((1, -3, 2, -1, 1), (-4, 4, 0, -1, 1)),
    "+-+-": ((1, -1, -2, 1, 1), (4, -4, -4, 3, 1)),
    "+--+": ((1, 1, -2, -1, 1), (-4, -4, 4, 3, 1)),
}


def coplanar_delta(theta: float) -> float:
    """Delta on the coplanar family: (cos^2 t + cos^2 2t + cos t cos 3t) / 3."""
    c1, c2, c3 = math.cos(theta), math.cos(2 * theta), math.cos(3 * theta)
    return (c1 * c1 + c2 * c2 + c1 * c3) / 3.0


def _row_key(signs) -> str:
    s = _signs(signs, 4)
    key = format_signs(s)
    if key in COPLANAR_ROWS:
        return key
    return format_signs(tuple(-v for v in s))


def coplanar_row_trig(signs, theta: float) -> float:
    k, c1, c2, c3, d = COPLANAR_ROWS[_row_key(signs)][0]
    return (
        k + c1 * math.cos(theta) + c2 * math.cos(2 * theta) + c3 * math.cos(3 * theta)
        + d * coplanar_delta(theta)
    ) / 16.0


def coplanar_row_poly(signs, theta: float) -> float:
    p3, p2, p1, p0, d = COPLANAR_ROWS[_row_key(signs)][1]
    c = math.cos(theta)
    return (p3 * c**3 + p2 * c**2 + p1 * c + p0 + d * coplanar_delta(theta)) / 16.0


# --------------------------------------------------------------------------
# three axes: the original Bell inequality


def three_prob_trace(a: Axis, b: Axis, c: Axis, s, symmetry="symmetric") -> complex:
    """Average over the 6 orderings of 1/2 Tr[Pi Pi Pi]."""
    s = _three_signs(s, symmetry)
    p = [projector(ax, sg) for ax, sg in zip((a, b, c), s)]
    total = sum(trace(p[i] @ p[j] @ p[k]) for i, j, k in _PERMUTATIONS_3)
    return 0.5 * total / 6.0


def _three_signs(s, symmetry) -> tuple[int, int, int]:
    s = _signs(s, 3)
    # slot 1 is read at station A, slots 2 and 3 at station B
    if Symmetry.coerce(symmetry) is Symmetry.ANTISYMMETRIC:
        s = (s[0], -s[1], -s[2])
    return s


def three_prob(a: Axis, b: Axis, c: Axis, s, symmetry="symmetric") -> float:
    """(1/8)(1 + s1 s2 a.b + s1 s3 a.c + s2 s3 b.c), the symmetrized three-probability."""
    s1, s2, s3 = _three_signs(s, symmetry)
    return (1.0 + s1 * s2 * a.dot(b) + s1 * s3 * a.dot(c) + s2 * s3 * b.dot(c)) / 8.0


class BellCheck(NamedTuple):
    lhs: float
    rhs: float
    violated: bool


def bell_inequality_check(a: Axis, b: Axis, c: Axis) -> BellCheck:
    """Test P(a+, b+) <= P(a+, c+) + P(c+, b+) with singlet pair probabilities."""
    anti = Symmetry.ANTISYMMETRIC
    lhs = pair_prob(a, 1, b, 1, anti)
    rhs = pair_prob(a, 1, c, 1, anti) + pair_prob(c, 1, b, 1, anti)
    return BellCheck(lhs, rhs, lhs > rhs)


def bell_axes(angles: Iterable[float]) -> tuple[Axis, ...]:
    """In-plane axes at the given angles (radians)."""
    return tuple(Axis.in_plane(t) for t in angles)
