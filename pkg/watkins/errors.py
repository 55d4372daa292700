"""
Exception hierarchy for the watkins toolkit.

Every error raised on purpose by the library derives from :class:`WatkinsError`.
Each class also inherits the builtin exception a caller would naturally expect
(``ValueError`` for bad numeric input, ``KeyError`` for an unknown label), so
``except ValueError`` keeps working for code that does not know about this
module.
"""

from __future__ import annotations

from typing import Optional

__all__ = [
    "WatkinsError",
    "ArithmeticDomainError",
    "SingularCurveError",
    "HasseBoundError",
    "EnumerationCeilingError",
    "OutsideClassificationError",
    "UnknownLabelError",
    "BundleError",
    "ConfigError",
]


class WatkinsError(Exception):
    """Base class for all errors raised by this package."""


class ArithmeticDomainError(WatkinsError, ValueError):
    """An integer argument is outside the domain of the operation (zero, not squarefree, ...)."""


class SingularCurveError(WatkinsError, ValueError):
    """A Weierstrass model has zero discriminant."""


class HasseBoundError(WatkinsError, ValueError):
    """A Frobenius trace violates |a_q| <= 2*sqrt(q)."""


class EnumerationCeilingError(WatkinsError, ValueError):
    """A prime exceeds the configured point-counting ceiling."""


class OutsideClassificationError(WatkinsError, ValueError):
    """The curve/twist pair is not covered by the classified families."""


class UnknownLabelError(WatkinsError, KeyError):
    """A curve label is neither in the bundle nor a valid Setzer label."""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep plain messages for the CLI.
        return str(self.args[0]) if self.args else ""


class BundleError(WatkinsError, ValueError):
    """A curve bundle row failed to parse or to validate."""

    def __init__(
        self, message: str, *, line: Optional[int] = None, label: Optional[str] = None
    ) -> None:
        self.line = line
        self.label = label
        where = []
        if line is not None:
            where.append(f"line {line}")
        if label is not None:
            where.append(f"label {label}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}")


class ConfigError(WatkinsError, ValueError):
    """Invalid configuration (YAML campaign file, environment or CLI bounds)."""
