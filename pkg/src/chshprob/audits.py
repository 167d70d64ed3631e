"""Where positive weights enter published inequality proofs.

Each audit evaluates a proof's key inequality on a discrete, possibly
signed, weighting.  With nonnegative weights the bound holds; with signed
weights a witness configuration breaks it.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from . import rng
from .classical import FrequencyVector, chsh_from_frequencies
from .errors import ValidationError

SQRT2 = math.sqrt(2.0)
STAPP85_BOUND = (SQRT2 - 2.0) ** 2
TOL = 1e-12


@dataclass(frozen=True)
class AuditReport:
    name: str
    lhs: float
    rhs: float
    bound_respected: bool
    witness: Any = None
    details: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if (self.witness is None) != self.bound_respected:
            raise ValueError("a witness must be attached exactly when the bound fails")


# --------------------------------------------------------------------------
# Bell 1964


@dataclass(frozen=True)
class SignedDensity:
    """Finite hidden-variable support with signed weights.

    ``outcomes[label][k]`` is A(label, lambda_k) in {-1, +1}.
    """

    weights: tuple[float, ...]
    outcomes: Mapping[str, tuple[int, ...]]

    def __post_init__(self) -> None:
        w = tuple(float(v) for v in self.weights)
        if not w:
            raise ValidationError("density needs at least one support point")
        if not all(math.isfinite(v) for v in w):
            raise ValidationError("weights must be finite")
        if abs(math.fsum(w) - 1.0) > TOL:
            raise ValidationError(f"density is not normalized (sum = {math.fsum(w)!r})")
        out = {}
        for label, vals in self.outcomes.items():
            vals = tuple(int(v) for v in vals)
            if len(vals) != len(w):
                raise ValidationError(f"outcome row {label!r} has wrong length")
            if any(v not in (-1, 1) for v in vals):
                raise ValidationError(f"outcome row {label!r} must be +-1")
            out[label] = vals
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "outcomes", out)

    @property
    def nonnegative(self) -> bool:
        return min(self.weights) >= 0

    def correlation(self, x: str, y: str) -> float:
        """Bell's P(x, y) = -sum rho A(x) A(y) (perfect anticorrelation of B)."""
        ax, ay = self.outcomes[x], self.outcomes[y]
        return -math.fsum(w * p * q for w, p, q in zip(self.weights, ax, ay))


def bell64_audit(d: SignedDensity, a: str = "a", b: str = "b", c: str = "c") -> AuditReport:
    """|P(a,b) - P(a,c)| <= sum rho [1 - A(b) A(c)]  (= 1 + P(b,c)).

    The |rho|-weighted right side, which always bounds the left side, is
    reported in ``details``.
    """
    for label in (a, b, c):
        if label not in d.outcomes:
            raise ValidationError(f"density has no outcomes for axis {label!r}")
    lhs = abs(d.correlation(a, b) - d.correlation(a, c))
    ab, ac = d.outcomes[b], d.outcomes[c]
    rhs = math.fsum(w * (1 - p * q) for w, p, q in zip(d.weights, ab, ac))
    rhs_abs = math.fsum(abs(w) * (1 - p * q) for w, p, q in zip(d.weights, ab, ac))
    ok = lhs <= rhs + TOL
    return AuditReport(
        "bell64", lhs, rhs, ok, None if ok else d,
        {"rhs_abs_weights": rhs_abs, "nonnegative": d.nonnegative},
    )


def random_density(g: np.random.Generator, support: int = 4, signed: bool = False) -> SignedDensity:
    if signed:
        raw = g.normal(size=support)
        raw[0] = abs(raw[0]) + 1.0
    else:
        raw = g.random(support) + 1e-3
    w = raw / raw.sum()
    table = g.choice((-1, 1), size=(3, support))
    return SignedDensity(tuple(w), {k: tuple(row) for k, row in zip("abc", table)})


def bell64_find_witness(weights: Sequence[float] = (1.5, -0.5)) -> SignedDensity | None:
    """Search every +-1 outcome table on a fixed support for a violation."""
    n = len(weights)
    for rows in itertools.product(itertools.product((1, -1), repeat=n), repeat=3):
        d = SignedDensity(tuple(weights), dict(zip("abc", rows)))
        if not bell64_audit(d).bound_respected:
            return d
    return None


# --------------------------------------------------------------------------
# Stapp 1971


def stapp71_mean_from_pairs(pairs: Sequence[tuple[int, int]]) -> float:
    """(1/N) sum |n'' n' - 1| by direct summation."""
    if not pairs:
        raise ValidationError("need at least one pair")
    for p, q in pairs:
        if p not in (-1, 1) or q not in (-1, 1):
            raise ValidationError("pair entries must be +-1")
    return math.fsum(abs(p * q - 1) for p, q in pairs) / len(pairs)


def stapp71_frequencies(pairs: Sequence[tuple[int, int]]) -> tuple[int, int]:
    """(N1, N2): how often the summand is 0 and how often it is 2."""
    n1 = sum(1 for p, q in pairs if p * q == 1)
    return n1, len(pairs) - n1


def stapp71_audit(n1: float, n2: float) -> AuditReport:
    """Mean summand 2 (1 - N1/N); a +-1 ensemble confines it to [0, 2]."""
    n = n1 + n2
    if not (math.isfinite(n1) and math.isfinite(n2)) or n <= 0:
        raise ValidationError(f"N1 + N2 must be positive, got {n}")
    mean = 2.0 * (1.0 - n1 / n)
    ok = -TOL <= mean <= 2.0 + TOL
    return AuditReport(
        "stapp71", mean, 2.0, ok, None if ok else {"N1": n1, "N2": n2},
        {"direct": 2.0 * n2 / n, "range": (0.0, 2.0)},
    )


# --------------------------------------------------------------------------
# Stapp 1985


def stapp85_summands() -> list[tuple[tuple[int, int, int], float]]:
    """(sqrt2 r_A + r_B + r_B')^2 for all 8 sign triples."""
    return [
        ((ra, rb, rbp), (SQRT2 * ra + rb + rbp) ** 2)
        for ra, rb, rbp in itertools.product((1, -1), repeat=3)
    ]


STAPP85_VALUES = (2.0, (2.0 + SQRT2) ** 2, (2.0 - SQRT2) ** 2)


def stapp85_value_counts() -> dict[float, int]:
    """Multiplicity of each distinct summand value, keyed by the exact reference values."""
    counts: Counter = Counter()
    for _, v in stapp85_summands():
        match = [ref for ref in STAPP85_VALUES if abs(v - ref) <= 1e-12]
        if len(match) != 1:
            raise ValueError(f"unexpected summand value {v!r}")
        counts[match[0]] += 1
    return dict(counts)


def stapp85_mean(n1: float, n2: float, n3: float) -> float:
    """(1/n)[2 n1 + (2 + sqrt2)^2 n2 + (2 - sqrt2)^2 n3]."""
    n = n1 + n2 + n3
    return (2.0 * n1 + (2.0 + SQRT2) ** 2 * n2 + (2.0 - SQRT2) ** 2 * n3) / n


def stapp85_mean_regrouped(n1: float, n2: float, n3: float) -> float:
    """2 + (2 sqrt2 / n)[(2 + sqrt2) n2 - (2 - sqrt2) n3], algebraically equal to the mean."""
    n = n1 + n2 + n3
    return 2.0 + 2.0 * SQRT2 * ((2.0 + SQRT2) * n2 - (2.0 - SQRT2) * n3) / n


def stapp85_threshold(n: float, n3: float) -> float:
    """n2 below which the mean drops under (sqrt2 - 2)^2, with n and n3 held fixed."""
    # mean = 2 + 2 sqrt2 [(2 + sqrt2) n2 - (2 - sqrt2) n3] / n
    return ((STAPP85_BOUND - 2.0) * n / (2.0 * SQRT2) + (2.0 - SQRT2) * n3) / (2.0 + SQRT2)


def stapp85_audit(n1: float, n2: float, n3: float) -> AuditReport:
    n = n1 + n2 + n3
    if not all(math.isfinite(v) for v in (n1, n2, n3)) or n <= 0:
        raise ValidationError(f"n1 + n2 + n3 must be positive, got {n}")
    mean = stapp85_mean(n1, n2, n3)
    ok = mean > STAPP85_BOUND
    return AuditReport(
        "stapp85", mean, STAPP85_BOUND, ok, None if ok else {"n1": n1, "n2": n2, "n3": n3},
        {"regrouped": stapp85_mean_regrouped(n1, n2, n3), "n2_threshold": stapp85_threshold(n, n3)},
    )


# --------------------------------------------------------------------------
# Bell 1971


def gamma_real(a1, a2, b1, b2):
    """alpha1 (beta1 + beta2) + alpha2 (beta1 - beta2) on real (array) inputs."""
    return a1 * (b1 + b2) + a2 * (b1 - b2)


def bell71_audit(points: int = 21) -> AuditReport:
    """Grid search of |gamma| over [-1, 1]^4; the maximum stays 2."""
    if points < 2:
        raise ValidationError("grid needs at least 2 points per axis")
    grid = np.linspace(-1.0, 1.0, points)
    a1, a2, b1, b2 = np.meshgrid(grid, grid, grid, grid, indexing="ij")
    g = np.abs(gamma_real(a1, a2, b1, b2))
    gmax = float(g.max())
    corners = np.array(list(itertools.product((-1.0, 1.0), repeat=4)))
    vertex_max = float(np.abs(gamma_real(*corners.T)).max())
    ok = gmax <= 2.0 + TOL
    return AuditReport(
        "bell71", gmax, 2.0, ok, None if ok else "grid max exceeds 2",
        {"vertex_max": vertex_max, "argmax_count": int((g >= gmax - TOL).sum())},
    )


def check_unit_interval(*values: float) -> None:
    for v in values:
        if not (-1.0 <= v <= 1.0):
            raise ValidationError(f"value {v!r} outside [-1, 1]")


def gamma_bounded(a1: float, a2: float, b1: float, b2: float) -> float:
    check_unit_interval(a1, a2, b1, b2)
    return gamma_real(a1, a2, b1, b2)


# --------------------------------------------------------------------------
# CHSH / Peres: signed gamma frequencies


def chsh_signed_audit(n1: float, n2: float) -> AuditReport:
    c = chsh_from_frequencies(FrequencyVector(n1, n2))
    ok = abs(c) <= 2.0 + TOL
    return AuditReport("chsh-signed", c, 2.0, ok, None if ok else {"n1": n1, "n2": n2})


# --------------------------------------------------------------------------
# default paired instances


def _bell64_positive() -> SignedDensity:
    return SignedDensity(
        (0.25, 0.25, 0.25, 0.25),
        {"a": (1, 1, -1, -1), "b": (1, -1, 1, -1), "c": (1, 1, 1, -1)},
    )


def default_instances(name: str) -> list[tuple[str, AuditReport]]:
    """(case label, report) pairs: a nonnegative pass and a signed witness."""
    if name == "bell64":
        witness = bell64_find_witness()
        return [("positive", bell64_audit(_bell64_positive())), ("signed", bell64_audit(witness))]
    if name == "stapp71":
        return [("positive", stapp71_audit(50, 50)), ("signed", stapp71_audit(-50, 150))]
    if name == "stapp85":
        return [("positive", stapp85_audit(100, 0, 0)), ("signed", stapp85_audit(130, -30, 0))]
    if name == "bell71":
        return [("grid", bell71_audit())]
    if name == "chsh-signed":
        return [("positive", chsh_signed_audit(500, 500)), ("signed", chsh_signed_audit(1100, -100))]
    raise ValidationError(f"unknown audit {name!r}; choose from {', '.join(AUDIT_NAMES)}")


AUDIT_NAMES = ("bell64", "stapp71", "stapp85", "bell71", "chsh-signed")


def randomized_nonnegative(name: str, count: int, seed: int = 0) -> list[AuditReport]:
    """``count`` random nonnegative-weight instances of an audit."""
    out = []
    for k in range(count):
        g = rng.stream(seed, k)
        if name == "bell64":
            out.append(bell64_audit(random_density(g, support=int(g.integers(1, 9)))))
        elif name == "stapp71":
            n1, n2 = g.integers(0, 1000, size=2)
            if n1 + n2 == 0:
                n2 = 1
            out.append(stapp71_audit(float(n1), float(n2)))
        elif name == "stapp85":
            n = g.integers(0, 1000, size=3).astype(float)
            if n.sum() == 0:
                n[0] = 1
            out.append(stapp85_audit(*n))
        elif name == "chsh-signed":
            n1, n2 = g.integers(0, 1000, size=2)
            if n1 + n2 == 0:
                n1 = 1
            out.append(chsh_signed_audit(float(n1), float(n2)))
        elif name == "bell71":
            vals = g.uniform(-1.0, 1.0, size=4)
            gv = gamma_bounded(*vals)
            ok = abs(gv) <= 2.0 + TOL
            out.append(AuditReport("bell71", abs(gv), 2.0, ok, None if ok else tuple(vals)))
        else:
            raise ValidationError(f"unknown audit {name!r}")
    return out
