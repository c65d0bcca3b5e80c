"""Log-space complex scalars.

The weighted comparisons in this package routinely involve magnitudes like
e^{(pi/2)|z|^2}, which overflows 64-bit floats once |z| exceeds about 21.
Everything growth-related is therefore carried as (log-magnitude, argument)
pairs, with an explicit sentinel for exact zeros.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = ["LogComplex", "LOG_ZERO"]


def _wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    a = math.fmod(a, 2.0 * math.pi)
    if a > math.pi:
        a -= 2.0 * math.pi
    elif a <= -math.pi:
        a += 2.0 * math.pi
    return a


@dataclass(frozen=True)
class LogComplex:
    """A complex number stored as log|w| and arg(w).

    ``log_mag = -inf`` is the zero sentinel; its argument is fixed at 0 so
    zeros compare equal.
    """

    log_mag: float
    arg: float = 0.0

    def __post_init__(self):
        if math.isnan(self.log_mag):
            raise ValueError("log_mag must not be NaN")
        if self.is_zero:
            object.__setattr__(self, "arg", 0.0)
        else:
            if not math.isfinite(self.arg):
                raise ValueError("finite log_mag requires finite arg")
            object.__setattr__(self, "arg", _wrap_angle(self.arg))

    @property
    def is_zero(self) -> bool:
        return self.log_mag == -math.inf

    @classmethod
    def zero(cls) -> "LogComplex":
        return cls(-math.inf, 0.0)

    @classmethod
    def from_complex(cls, w: complex) -> "LogComplex":
        w = complex(w)
        if w == 0:
            return cls.zero()
        # math.atan2, not cmath.phase: the latter raises OverflowError when a
        # component is subnormal (errno leakage in the C library call)
        return cls(math.log(abs(w)), math.atan2(w.imag, w.real))

    def to_complex(self) -> complex:
        """Exponentiate; raises OverflowError if the magnitude is too large."""
        if self.is_zero:
            return 0.0 + 0.0j
        return cmath.rect(math.exp(self.log_mag), self.arg)

    def __mul__(self, other: "LogComplex") -> "LogComplex":
        if self.is_zero or other.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_mag + other.log_mag, self.arg + other.arg)

    def __truediv__(self, other: "LogComplex") -> "LogComplex":
        if other.is_zero:
            raise ZeroDivisionError("division by LogComplex zero")
        if self.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_mag - other.log_mag, self.arg - other.arg)

    def __pow__(self, n: int) -> "LogComplex":
        if self.is_zero:
            if n < 0:
                raise ZeroDivisionError("negative power of LogComplex zero")
            return LogComplex.zero() if n > 0 else LogComplex(0.0, 0.0)
        return LogComplex(n * self.log_mag, n * self.arg)

    def abs_log(self) -> float:
        return self.log_mag


LOG_ZERO = LogComplex.zero()
