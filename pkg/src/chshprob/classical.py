"""Deterministic +-1 assignments and local hidden-variable statistics.

Physical LHV models (:class:`LhvStrategy`) carry nonnegative normalized
weights.  Signed frequency demonstrations live in separate types
(:class:`FrequencyVector`, :class:`BellPopulations`) so the two never mix.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import rng
from .errors import ValidationError
from .pauli import check_sign


class ClassicalAssignment(NamedTuple):
    """Outcomes (alpha1, alpha2, beta1, beta2) for all four knob settings."""

    alpha1: int
    alpha2: int
    beta1: int
    beta2: int

    @classmethod
    def of(cls, *signs) -> "ClassicalAssignment":
        if len(signs) == 1 and isinstance(signs[0], str):
            text = signs[0]
            signs = tuple(1 if ch == "+" else -1 if ch == "-" else ch for ch in text)
        if len(signs) != 4:
            raise ValidationError(f"assignment needs four signs, got {signs!r}")
        return cls(*(check_sign(s) for s in signs))

    def label(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self)


ASSIGNMENTS: tuple[ClassicalAssignment, ...] = tuple(
    ClassicalAssignment(*s) for s in itertools.product((1, -1), repeat=4)
)


def gamma(x: ClassicalAssignment) -> int:
    """alpha1 beta1 + alpha1 beta2 + alpha2 beta1 - alpha2 beta2."""
    a1, a2, b1, b2 = (check_sign(v) for v in x)
    return a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2


def gamma_regrouped(x: ClassicalAssignment) -> int:
    """Same quantity written alpha1 (beta1 + beta2) + alpha2 (beta1 - beta2)."""
    a1, a2, b1, b2 = (check_sign(v) for v in x)
    return a1 * (b1 + b2) + a2 * (b1 - b2)


def enumerate_assignments() -> list[tuple[ClassicalAssignment, int]]:
    return [(x, gamma(x)) for x in ASSIGNMENTS]


# --------------------------------------------------------------------------
# signed frequencies


@dataclass(frozen=True)
class FrequencyVector:
    """Counts of gamma = +2 (n1) and gamma = -2 (n2).  Either may be negative."""

    n1: float
    n2: float

    @property
    def total(self) -> float:
        return self.n1 + self.n2

    def __post_init__(self) -> None:
        if not (math.isfinite(self.n1) and math.isfinite(self.n2)):
            raise ValidationError("frequencies must be finite")
        if self.total <= 0:
            raise ValidationError(f"total count must be positive, got {self.total}")


def chsh_from_frequencies(f: FrequencyVector) -> float:
    """2 (n1 - n2) / N."""
    return 2.0 * (f.n1 - f.n2) / f.total


# --------------------------------------------------------------------------
# three-axis populations (Bell's original inequality)

# particle 1 spins along (a, b, c); particle 2 carries the opposite signs
POPULATION_ROWS: tuple[tuple[int, int, int], ...] = (
    (1, 1, 1),
    (1, 1, -1),
    (1, -1, 1),
    (-1, 1, 1),
    (1, -1, -1),
    (-1, 1, -1),
    (-1, -1, 1),
    (-1, -1, -1),
)
_AXIS_INDEX = {"a": 0, "b": 1, "c": 2}


@dataclass(frozen=True)
class BellPopulations:
    """Signed populations N1..N8, one per population row."""

    counts: tuple[float, ...]

    def __post_init__(self) -> None:
        counts = tuple(float(c) for c in self.counts)
        if len(counts) != 8:
            raise ValidationError(f"need 8 populations, got {len(counts)}")
        if not all(math.isfinite(c) for c in counts):
            raise ValidationError("populations must be finite")
        if sum(counts) <= 0:
            raise ValidationError("total population must be positive")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> float:
        return math.fsum(self.counts)


def pair_rows(first: str, second: str) -> tuple[int, ...]:
    """Population rows (0-based) where particle 1 is + along ``first`` and particle 2 + along ``second``.

    Particle 2's sign on an axis is minus particle 1's, so this selects rows
    with particle 1 reading + on ``first`` and - on ``second``.
    """
    i, j = _AXIS_INDEX[first], _AXIS_INDEX[second]
    return tuple(k for k, row in enumerate(POPULATION_ROWS) if row[i] == 1 and -row[j] == 1)


class BellPairwise(NamedTuple):
    p_ab: float
    p_ac: float
    p_cb: float
    holds: bool

    @property
    def lhs(self) -> float:
        return self.p_ab

    @property
    def rhs(self) -> float:
        return self.p_ac + self.p_cb


def bell_pairwise_from_populations(p: BellPopulations) -> BellPairwise:
    """P(a+, b+), P(a+, c+), P(c+, b+) from counts, and whether the triangle bound holds.

    With this row ordering these are (N3 + N5)/N, (N2 + N5)/N and (N3 + N7)/N.
    """
    n = p.total

    def prob(first: str, second: str) -> float:
        return math.fsum(p.counts[k] for k in pair_rows(first, second)) / n

    p_ab, p_ac, p_cb = prob("a", "b"), prob("a", "c"), prob("c", "b")
    return BellPairwise(p_ab, p_ac, p_cb, p_ab <= p_ac + p_cb + 1e-12)


# --------------------------------------------------------------------------
# LHV strategies


@dataclass(frozen=True)
class LhvStrategy:
    """Nonnegative normalized weights over the 16 assignments (``ASSIGNMENTS`` order)."""

    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        w = tuple(float(v) for v in self.weights)
        if len(w) != 16:
            raise ValidationError(f"strategy needs 16 weights, got {len(w)}")
        if not all(math.isfinite(v) for v in w):
            raise ValidationError("strategy weights must be finite")
        if min(w) < 0:
            raise ValidationError("strategy weights must be nonnegative")
        if abs(math.fsum(w) - 1.0) > 1e-12:
            raise ValidationError(f"strategy weights must sum to 1, got {math.fsum(w)!r}")
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls) -> "LhvStrategy":
        return cls((1.0 / 16.0,) * 16)

    @classmethod
    def point_mass(cls, x: ClassicalAssignment) -> "LhvStrategy":
        x = ClassicalAssignment.of(*x)
        return cls(tuple(1.0 if a == x else 0.0 for a in ASSIGNMENTS))

    @classmethod
    def from_unnormalized(cls, raw: Sequence[float]) -> "LhvStrategy":
        raw = [float(v) for v in raw]
        total = math.fsum(raw)
        if total <= 0:
            raise ValidationError("weights must have a positive sum")
        return cls(tuple(v / total for v in raw))


class Correlations(NamedTuple):
    c11: float
    c12: float
    c21: float
    c22: float

    @property
    def chsh(self) -> float:
        return self.c11 + self.c12 + self.c21 - self.c22


def correlations_from_strategy(s: LhvStrategy) -> Correlations:
    """Exact <alpha_i beta_j> under the strategy."""
    if not isinstance(s, LhvStrategy):
        raise ValidationError("expected an LhvStrategy")

    def corr(i: int, j: int) -> float:
        return math.fsum(w * x[i] * x[2 + j] for w, x in zip(s.weights, ASSIGNMENTS))

    return Correlations(corr(0, 0), corr(0, 1), corr(1, 0), corr(1, 1))


@dataclass(frozen=True)
class SimulationResult:
    trials: int
    seed: int
    # per cell (setting i, setting j): number of trials and sum of alpha_i beta_j
    counts: tuple[int, int, int, int]
    sums: tuple[int, int, int, int]

    @property
    def estimates(self) -> Correlations:
        return Correlations(*(s / n if n else float("nan") for s, n in zip(self.sums, self.counts)))

    @property
    def stderr(self) -> Correlations:
        # plug-in binomial: Var(product) = 1 - C^2 for +-1 products
        out = []
        for s, n in zip(self.sums, self.counts):
            if n == 0:
                out.append(float("nan"))
                continue
            c = s / n
            out.append(math.sqrt(max(1.0 - c * c, 0.0) / n))
        return Correlations(*out)

    @property
    def chsh(self) -> float:
        return self.estimates.chsh

    @property
    def chsh_stderr(self) -> float:
        return math.sqrt(sum(e * e for e in self.stderr))


_ALPHA = np.array([[x.alpha1, x.alpha2] for x in ASSIGNMENTS], dtype=np.int64)
_BETA = np.array([[x.beta1, x.beta2] for x in ASSIGNMENTS], dtype=np.int64)


def _simulate_block(cdf: np.ndarray, seed: int, block: int, n: int) -> np.ndarray:
    g = rng.block_generator(seed, block)
    u = g.random(n)
    idx = np.minimum(np.searchsorted(cdf, u, side="right"), 15)
    # settings are drawn independently at each station
    i = g.integers(0, 2, size=n)
    j = g.integers(0, 2, size=n)
    prod = _ALPHA[idx, i] * _BETA[idx, j]
    cell = 2 * i + j
    counts = np.bincount(cell, minlength=4)
    sums = np.bincount(cell, weights=prod, minlength=4)
    return np.stack([counts, np.rint(sums).astype(np.int64)])


def simulate_lhv(s: LhvStrategy, trials: int, seed: int, workers: int = 1) -> SimulationResult:
    """Monte-Carlo run of the knob experiment: one setting pair and one product per trial.

    Results are identical for any ``workers`` value: every block has its own
    counter-keyed stream and the reduction adds integer counts.
    """
    if not isinstance(s, LhvStrategy):
        raise ValidationError("expected an LhvStrategy")
    if int(trials) != trials or trials < 1:
        raise ValidationError(f"trials must be a positive integer, got {trials!r}")
    if int(seed) != seed or seed < 0:
        raise ValidationError(f"seed must be a non-negative integer, got {seed!r}")
    if workers < 1:
        raise ValidationError("workers must be >= 1")
    trials, seed = int(trials), int(seed)
    cdf = np.cumsum(np.asarray(s.weights))
    jobs = rng.blocks(trials)

    def run(job):
        k, start, stop = job
        return _simulate_block(cdf, seed, k, stop - start)

    if workers == 1:
        parts = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, jobs))
    total = np.sum(parts, axis=0, dtype=np.int64)
    return SimulationResult(
        trials, seed, tuple(int(v) for v in total[0]), tuple(int(v) for v in total[1])
    )
