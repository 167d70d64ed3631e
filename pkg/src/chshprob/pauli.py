"""Complex 2x2 operators, Pauli vectors and spin-1/2 projectors.

Everything here lives in a fixed 2x2 space, so operators are stored as four
Python ``complex`` entries rather than arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import ValidationError

AXIS_TOL = 1e-12
AXIS_NORMALIZE_TOL = 1e-6


def check_sign(s: int) -> int:
    """Return ``s`` as an int if it is exactly +1 or -1."""
    if s == 1 or s == -1:
        return int(s)
    raise ValidationError(f"spin sign must be +1 or -1, got {s!r}")


@dataclass(frozen=True, slots=True)
class Axis:
    """Unit 3-vector giving a measurement direction.

    Inputs within 1e-6 of unit norm are renormalized; anything further off
    is rejected.
    """

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        comps = (float(self.x), float(self.y), float(self.z))
        if not all(math.isfinite(c) for c in comps):
            raise ValidationError(f"axis components must be finite, got {comps}")
        norm = math.sqrt(comps[0] ** 2 + comps[1] ** 2 + comps[2] ** 2)
        if abs(norm - 1.0) > AXIS_NORMALIZE_TOL:
            raise ValidationError(f"axis {comps} is not unit norm (|a| = {norm!r})")
        if abs(norm * norm - 1.0) > AXIS_TOL:
            comps = tuple(c / norm for c in comps)
        object.__setattr__(self, "x", comps[0])
        object.__setattr__(self, "y", comps[1])
        object.__setattr__(self, "z", comps[2])

    @classmethod
    def in_plane(cls, angle: float) -> "Axis":
        """Axis at ``angle`` radians from +z towards +x (the x-z plane)."""
        return cls(math.sin(angle), 0.0, math.cos(angle))

    @classmethod
    def parse(cls, text: str) -> "Axis":
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != 3:
            raise ValidationError(f"axis literal must be 'x,y,z', got {text!r}")
        try:
            return cls(*(float(p) for p in parts))
        except ValueError as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"axis literal must be numeric, got {text!r}") from exc

    def __neg__(self) -> "Axis":
        return Axis(-self.x, -self.y, -self.z)

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def dot(self, other: "Axis") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Axis") -> tuple[float, float, float]:
        # not an Axis: the cross product is generally not unit length
        return cross(tuple(self), tuple(other))


def cross(u: Iterable[float], v: Iterable[float]) -> tuple[float, float, float]:
    ux, uy, uz = u
    vx, vy, vz = v
    return (uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx)


def dot(u: Iterable[float], v: Iterable[float]) -> float:
    return sum(p * q for p, q in zip(u, v))


@dataclass(frozen=True, slots=True)
class Operator2:
    """Complex 2x2 matrix ``[[a, b], [c, d]]``."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self) -> None:
        for z in (self.a, self.b, self.c, self.d):
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValidationError("operator entries must be finite")

    @classmethod
    def from_rows(cls, rows) -> "Operator2":
        (a, b), (c, d) = rows
        return cls(complex(a), complex(b), complex(c), complex(d))

    def rows(self) -> tuple[tuple[complex, complex], tuple[complex, complex]]:
        return ((self.a, self.b), (self.c, self.d))

    def entries(self) -> tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    def __add__(self, other: "Operator2") -> "Operator2":
        return Operator2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Operator2") -> "Operator2":
        return Operator2(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __mul__(self, k: complex) -> "Operator2":
        return Operator2(self.a * k, self.b * k, self.c * k, self.d * k)

    __rmul__ = __mul__

    def __matmul__(self, o: "Operator2") -> "Operator2":
        return Operator2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def dagger(self) -> "Operator2":
        return Operator2(
            self.a.conjugate(), self.c.conjugate(), self.b.conjugate(), self.d.conjugate()
        )

    def max_abs_diff(self, other: "Operator2") -> float:
        return max(abs(p - q) for p, q in zip(self.entries(), other.entries()))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.max_abs_diff(self.dagger()) <= tol

    def is_idempotent(self, tol: float = 1e-12) -> bool:
        return self.max_abs_diff(self @ self) <= tol


IDENTITY = Operator2(1, 0, 0, 1)
SIGMA_X = Operator2(0, 1, 1, 0)
SIGMA_Y = Operator2(0, -1j, 1j, 0)
SIGMA_Z = Operator2(1, 0, 0, -1)

# maximally mixed single-particle state
RHO_UNPOLARIZED = Operator2(0.5, 0, 0, 0.5)


def trace(m: Operator2) -> complex:
    return m.a + m.d


def sigma_dot(v: Iterable[float]) -> Operator2:
    """sigma . v for an arbitrary real 3-vector (no unit-norm requirement)."""
    x, y, z = v
    return Operator2(complex(z), complex(x, -y), complex(x, y), complex(-z))


def pauli_dot(a: Axis) -> Operator2:
    """sigma_x a_x + sigma_y a_y + sigma_z a_z for a unit axis."""
    if not isinstance(a, Axis):
        raise ValidationError(f"expected an Axis, got {type(a).__name__}")
    return sigma_dot(a)


def projector(a: Axis, s: int) -> Operator2:
    """Spin projector (1 + s sigma.a) / 2 onto the s = +-1 eigenstate along ``a``."""
    s = check_sign(s)
    p = pauli_dot(a)
    h = 0.5 * s
    return Operator2(0.5 + h * p.a, h * p.b, h * p.c, 0.5 + h * p.d)


def product_identity_check(a: Axis, b: Axis) -> tuple[Operator2, Operator2]:
    """Both sides of (sigma.a)(sigma.b) = (a.b) 1 + i sigma.(a x b)."""
    lhs = pauli_dot(a) @ pauli_dot(b)
    rhs = IDENTITY * a.dot(b) + sigma_dot(a.cross(b)) * 1j
    return lhs, rhs


def expectation(rho: Operator2, op: Operator2) -> complex:
    """Tr(rho op)."""
    return trace(rho @ op)
