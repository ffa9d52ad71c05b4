"""Logarithmic integrals, prime-number-theorem error magnitudes, and
mean-value enclosures for integrals of 1/log t.

All logarithms are natural.  The error magnitudes carry no implied
constant; callers multiply by their own K.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

EULER_GAMMA = 0.57721566490153286

# de la Vallee Poussin exponent constant; configurable on ErrorModel.
DEFAULT_C0 = 0.2018


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class ErrorKind(enum.Enum):
    UNCOND_PI = "uncond_pi"
    RH_PI = "rh_pi"
    UNCOND_THETA = "uncond_theta"
    RH_THETA = "rh_theta"


@dataclass(frozen=True)
class ErrorModel:
    """Magnitude of a PNT-style error term, without its implied constant.

    uncond kinds: x * exp(-c0 * sqrt(log x))
    rh_pi:        sqrt(x) * log(x)
    rh_theta:     sqrt(x) * log(x)^2
    """

    kind: ErrorKind
    c0: float = DEFAULT_C0

    def __post_init__(self):
        if self.c0 <= 0:
            raise ValueError(f"c0 must be positive, got {self.c0}")

    def __call__(self, x: float) -> float:
        return error_term(self, x)


def error_term(model: ErrorModel, x: float) -> float:
    """Evaluate the bare error magnitude at x >= 3."""
    if x < 3:
        raise DomainError(f"error_term requires x >= 3, got {x}")
    lx = math.log(x)
    if model.kind in (ErrorKind.UNCOND_PI, ErrorKind.UNCOND_THETA):
        return x * math.exp(-model.c0 * math.sqrt(lx))
    if model.kind is ErrorKind.RH_PI:
        return math.sqrt(x) * lx
    return math.sqrt(x) * lx * lx


@dataclass(frozen=True)
class MeanValueBracket:
    """Enclosure of integral_a^b dt/log t from monotonicity of 1/log t."""

    lo: float
    hi: float
    a: float
    b: float

    def contains(self, value: float) -> bool:
        return self.lo <= value <= self.hi


def mean_value_bracket(a: float, b: float) -> MeanValueBracket:
    """((b-a)/log b, (b-a)/log a), valid for 2 <= a < b."""
    if a < 2:
        raise DomainError(f"bracket requires a >= 2, got a={a}")
    if a >= b:
        raise DomainError(f"bracket requires a < b, got a={a}, b={b}")
    return MeanValueBracket(lo=(b - a) / math.log(b), hi=(b - a) / math.log(a), a=a, b=b)


def _adaptive_simpson(f, a: float, b: float, tol: float, max_depth: int = 60) -> float:
    """Adaptive Simpson with Richardson error estimate, iterative stack.

    Panel contributions are accumulated with math.fsum so the only error
    left is the truncation error the subdivision controls.
    """
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    pieces: list[float] = []
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        a0, b0, f0, f1, f2, s0, t0, depth = stack.pop()
        m0 = 0.5 * (a0 + b0)
        lm = 0.5 * (a0 + m0)
        rm = 0.5 * (m0 + b0)
        flm, frm = f(lm), f(rm)
        sl = (m0 - a0) / 6.0 * (f0 + 4.0 * flm + f1)
        sr = (b0 - m0) / 6.0 * (f1 + 4.0 * frm + f2)
        err = (sl + sr - s0) / 15.0
        if depth >= max_depth or abs(err) <= t0:
            pieces.append(sl + sr + err)  # Richardson-corrected
            continue
        stack.append((a0, m0, f0, flm, f1, sl, 0.5 * t0, depth + 1))
        stack.append((m0, b0, f1, frm, f2, sr, 0.5 * t0, depth + 1))
    return math.fsum(pieces)


def _integrate_log_power(x: float, k: int, tol: float) -> float:
    """integral_2^x dt / log^k t, split geometrically then adapted."""
    if x == 2.0:
        return 0.0

    def f(t: float) -> float:
        return math.log(t) ** (-k)

    # doubling subintervals keep each panel well-scaled on huge ranges
    cuts = [2.0]
    while cuts[-1] * 2.0 < x:
        cuts.append(cuts[-1] * 2.0)
    cuts.append(x)
    sub_tol = tol / len(cuts)
    return math.fsum(
        _adaptive_simpson(f, lo, hi, sub_tol) for lo, hi in zip(cuts, cuts[1:])
    )


def li(x: float, tol: float = 1e-9) -> float:
    """Offset logarithmic integral integral_2^x dt/log t.

    Absolute truncation error <= tol; for very large x the achievable
    accuracy is additionally floored by float64 rounding of the result.
    """
    return li_k(x, 1, tol)


def li_k(x: float, k: int, tol: float = 1e-9) -> float:
    """integral_2^x dt/log^k t for k >= 1; li_1 is li."""
    if x < 2:
        raise DomainError(f"li_k requires x >= 2, got {x}")
    if k < 1:
        raise DomainError(f"li_k requires k >= 1, got {k}")
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    return _integrate_log_power(float(x), int(k), float(tol))
