"""
Weierstrass models over Q.

Provides:
- `WeierstrassModel` : the five a-invariants of a curve, validated nonsingular.
- `Invariants` : b2, b4, b6, b8, c4, c6 and the discriminant.
- `Transformation` : a change of coordinates (u, r, s, t).
- `minimal_model` / `quadratic_twist` : global minimal models and twists.
- `signature` : the p-adic signature (v(c4), v(c6), v(disc)) of the minimal model.

Example:
    from watkins.curves import WeierstrassModel, quadratic_twist, signature

    E = WeierstrassModel.parse("0,0,0,-1,0")
    E2 = quadratic_twist(E, 2)          # minimal model of y^2 = x^3 - 4x
    print(signature(E, 2))              # (4, inf, 6)
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple, Union

from sympy import isprime

from watkins.arith import (
    INF,
    Valuation,
    divisors,
    factorize,
    format_valuation,
    is_squarefree,
    nu,
    valuation,
)
from watkins.errors import ArithmeticDomainError, SingularCurveError

__all__ = [
    "WeierstrassModel",
    "Invariants",
    "Signature",
    "Transformation",
    "invariants",
    "minimal_model",
    "is_minimal",
    "quadratic_twist",
    "has_rational_two_torsion",
    "two_torsion_points",
    "signature",
    "j_invariant",
]

Rational = Union[int, Fraction]

_LITERAL_RE = re.compile(r"^\[?\s*(-?\d+(?:\s*,\s*-?\d+){4})\s*\]?$")


def _as_int(value: Rational, what: str) -> int:
    if isinstance(value, Fraction):
        if value.denominator != 1:
            raise ArithmeticDomainError(f"{what} is not integral: {value}")
        return int(value.numerator)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ArithmeticDomainError(f"{what} must be an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class Invariants:
    """Standard invariants of a Weierstrass model."""

    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    disc: int

    def __post_init__(self) -> None:
        if self.disc == 0:
            raise SingularCurveError("Discriminant is zero")
        if 4 * self.b8 != self.b2 * self.b6 - self.b4**2:
            raise ArithmeticDomainError("4*b8 != b2*b6 - b4^2")
        if 1728 * self.disc != self.c4**3 - self.c6**2:
            raise ArithmeticDomainError("1728*disc != c4^3 - c6^2")


def _compute_invariants(a1: int, a2: int, a3: int, a4: int, a6: int) -> Invariants:
    b2 = a1 * a1 + 4 * a2
    b4 = a1 * a3 + 2 * a4
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return Invariants(b2=b2, b4=b4, b6=b6, b8=b8, c4=c4, c6=c6, disc=disc)


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6 with integer coefficients.

    Construction fails with :class:`SingularCurveError` when the discriminant
    vanishes.
    """

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    _inv: Invariants = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        coeffs = [_as_int(getattr(self, n), n) for n in ("a1", "a2", "a3", "a4", "a6")]
        for name, value in zip(("a1", "a2", "a3", "a4", "a6"), coeffs):
            object.__setattr__(self, name, value)
        object.__setattr__(self, "_inv", _compute_invariants(*coeffs))

    @classmethod
    def parse(cls, literal: str) -> "WeierstrassModel":
        """Parse ``a1,a2,a3,a4,a6`` (brackets optional, unicode minus accepted)."""
        text = literal.strip().replace("−", "-")
        m = _LITERAL_RE.match(text)
        if m is None:
            raise ArithmeticDomainError(
                f"Malformed curve literal {literal!r}; expected a1,a2,a3,a4,a6"
            )
        values = [int(v) for v in m.group(1).split(",")]
        return cls(*values)

    @classmethod
    def short(cls, A: int, B: int) -> "WeierstrassModel":
        """y^2 = x^3 + A*x + B."""
        return cls(0, 0, 0, A, B)

    @classmethod
    def from_AB(cls, A: int, B: int) -> "WeierstrassModel":
        """y^2 = x^3 + A*x^2 + B*x."""
        return cls(0, A, 0, B, 0)

    @classmethod
    def from_c4c6(cls, c4: int, c6: int) -> "WeierstrassModel":
        """Reduced model with the given (c4, c6).

        b2 is the representative of ``-c6 mod 12`` in ``(-6, 6]``, which makes
        a1, a3 in {0, 1} and a2 in {-1, 0, 1}.
        """
        b2 = (-c6) % 12
        if b2 > 6:
            b2 -= 12
        b4, r4 = divmod(b2 * b2 - c4, 24)
        b6, r6 = divmod(-(b2**3) + 36 * b2 * b4 - c6, 216)
        if r4 or r6:
            raise ArithmeticDomainError(f"(c4, c6) = ({c4}, {c6}) has no integral model")
        a1 = b2 % 2
        a3 = b6 % 2
        a2, r2 = divmod(b2 - a1, 4)
        a4, r4 = divmod(b4 - a1 * a3, 2)
        a6, r6 = divmod(b6 - a3, 4)
        if r2 or r4 or r6:
            raise ArithmeticDomainError(f"(c4, c6) = ({c4}, {c6}) has no integral model")
        return cls(a1, a2, a3, a4, a6)

    @property
    def ainvs(self) -> Tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def literal(self) -> str:
        return ",".join(str(a) for a in self.ainvs)

    def __str__(self) -> str:
        return f"[{self.literal}]"


def invariants(model: WeierstrassModel) -> Invariants:
    """b- and c-invariants and discriminant of *model*."""
    return model._inv


@dataclass(frozen=True)
class Transformation:
    """Coordinate change x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""

    u: Fraction
    r: Fraction = Fraction(0)
    s: Fraction = Fraction(0)
    t: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        for name in ("u", "r", "s", "t"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.u == 0:
            raise ArithmeticDomainError("Transformation with u = 0")

    @classmethod
    def identity(cls) -> "Transformation":
        return cls(Fraction(1))

    def apply(self, model: WeierstrassModel) -> WeierstrassModel:
        """Return the model in the new coordinates; fails if it is not integral."""
        u, r, s, t = self.u, self.r, self.s, self.t
        a1, a2, a3, a4, a6 = (Fraction(a) for a in model.ainvs)
        n1 = (a1 + 2 * s) / u
        n2 = (a2 - s * a1 + 3 * r - s * s) / u**2
        n3 = (a3 + r * a1 + 2 * t) / u**3
        n4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4
        n6 = (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6
        return WeierstrassModel(n1, n2, n3, n4, n6)

    def compose(self, other: "Transformation") -> "Transformation":
        """The transformation equal to applying ``self`` first, then *other*."""
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = other.u, other.r, other.s, other.t
        return Transformation(
            u=u1 * u2,
            r=r1 + u1 * u1 * r2,
            s=s1 + u1 * s2,
            t=t1 + u1**3 * t2 + s1 * u1 * u1 * r2,
        )

    def inverse(self) -> "Transformation":
        u, r, s, t = self.u, self.r, self.s, self.t
        return Transformation(u=1 / u, r=-r / u**2, s=-s / u, t=(r * s - t) / u**3)

    def as_tuple(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.u, self.r, self.s, self.t)


def _solve_transformation(
    source: WeierstrassModel, target: WeierstrassModel, u: int
) -> Transformation:
    """(u, r, s, t) carrying *source* to *target*, given the scaling factor."""
    a1, a2, a3 = (Fraction(a) for a in source.ainvs[:3])
    s = (u * target.a1 - a1) / 2
    r = (u * u * target.a2 - a2 + s * a1 + s * s) / 3
    t = (u**3 * target.a3 - a3 - r * a1) / 2
    return Transformation(Fraction(u), r, s, t)


def _minimal_scaling(c4: int, c6: int, disc: int) -> int:
    """Largest u such that (c4/u^4, c6/u^6) comes from an integral model."""
    u = 1
    g = math.gcd(c6 * c6, disc)
    for p, e in factorize(g).factors:
        d = e // 12
        if d == 0:
            continue
        if p == 2:
            a = (c4 // 2 ** (4 * d)) % 16
            b = (c6 // 2 ** (6 * d)) % 32
            if b % 4 != 3 and not (a == 0 and b in (0, 8)):
                d -= 1
        elif p == 3:
            if c6 != 0 and nu(3, c6) == 6 * d + 2:
                d -= 1
        u *= p**d
    return u


@lru_cache(maxsize=4096)
def minimal_model(model: WeierstrassModel) -> Tuple[WeierstrassModel, Transformation]:
    """Reduced global minimal model and the transformation reaching it.

    Uses the Laska-Kraus-Connell reduction on (c4, c6); the result has
    a1, a3 in {0, 1} and a2 in {-1, 0, 1}, so isomorphic curves share it.
    """
    inv = invariants(model)
    u = _minimal_scaling(inv.c4, inv.c6, inv.disc)
    reduced = WeierstrassModel.from_c4c6(inv.c4 // u**4, inv.c6 // u**6)
    return reduced, _solve_transformation(model, reduced, u)


def is_minimal(model: WeierstrassModel) -> bool:
    return abs(invariants(minimal_model(model)[0]).disc) == abs(invariants(model).disc)


def quadratic_twist(model: WeierstrassModel, D: int) -> WeierstrassModel:
    """Minimal model of the quadratic twist by the squarefree integer *D*.

    Goes through y^2 = x^3 - 27 D^2 c4 x - 54 D^3 c6.
    """
    if not is_squarefree(D):
        raise ArithmeticDomainError(f"Twist parameter {D} is not squarefree")
    inv = invariants(model)
    twisted = WeierstrassModel.short(-27 * D * D * inv.c4, -54 * D**3 * inv.c6)
    return minimal_model(twisted)[0]


def two_torsion_points(model: WeierstrassModel) -> List[Fraction]:
    """x-coordinates of the rational points of order 2, ascending.

    Integer roots of x0^3 + b2 x0^2 + 8 b4 x0 + 16 b6, mapped back by x = x0 / 4.
    """
    inv = invariants(model)
    b2, b4, b6 = inv.b2, inv.b4, inv.b6

    def cubic(x0: int) -> int:
        return x0**3 + b2 * x0 * x0 + 8 * b4 * x0 + 16 * b6

    constant = 16 * b6
    if constant == 0:
        candidates = {0}
        # Remaining roots solve x0^2 + b2 x0 + 8 b4 = 0.
        disc = b2 * b2 - 32 * b4
        if disc >= 0:
            root = math.isqrt(disc)
            if root * root == disc:
                candidates.update({(-b2 + root) // 2, (-b2 - root) // 2})
    else:
        candidates = set()
        for d in divisors(abs(constant)):
            candidates.update((d, -d))
    roots = sorted(x0 for x0 in candidates if cubic(x0) == 0)
    return [Fraction(x0, 4) for x0 in roots]


def has_rational_two_torsion(model: WeierstrassModel) -> bool:
    if invariants(model).b6 == 0:
        return True
    return bool(two_torsion_points(model))


@dataclass(frozen=True)
class Signature:
    """(v_p(c4), v_p(c6), v_p(disc)) of the minimal model; INF marks a zero invariant."""

    p: int
    v_c4: Valuation
    v_c6: Valuation
    v_disc: int
    minimized: bool = False

    def __post_init__(self) -> None:
        if self.v_disc == INF:
            raise SingularCurveError("Signature of a singular model")

    def as_tuple(self) -> Tuple[Valuation, Valuation, int]:
        return (self.v_c4, self.v_c6, self.v_disc)

    def __str__(self) -> str:
        parts = ", ".join(format_valuation(v) for v in self.as_tuple())
        return f"({parts})"


def signature(model: WeierstrassModel, p: int) -> Signature:
    """p-adic signature, computed on the minimal model.

    ``minimized`` records whether *model* had to be replaced by its minimal model.
    """
    if not isprime(p):
        raise ArithmeticDomainError(f"{p} is not a prime")
    minimal, _ = minimal_model(model)
    inv = invariants(minimal)
    return Signature(
        p=p,
        v_c4=valuation(p, inv.c4),
        v_c6=valuation(p, inv.c6),
        v_disc=nu(p, inv.disc),
        minimized=minimal != model,
    )


def j_invariant(model: WeierstrassModel) -> Fraction:
    inv = invariants(model)
    return Fraction(inv.c4**3, inv.disc)
