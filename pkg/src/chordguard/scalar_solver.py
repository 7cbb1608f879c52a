"""One-dimensional numerical routines: golden-section search, bisection,
and a central finite-difference second derivative.

These back the derivation of the pursuit constants (optimal zig-zag
rotation angle, vertical progress floor, horizontal threshold).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


class SolverError(Exception):
    pass


class InvalidBracket(SolverError):
    pass


class NoSignChange(SolverError):
    pass


@dataclass(frozen=True)
class UnimodalMaximizationResult:
    argmax: float
    max_value: float
    iterations: int


def maximize_unimodal(f: Callable[[float], float], lo: float, hi: float,
                      tol: float = 1e-10) -> UnimodalMaximizationResult:
    """Golden-section search for the maximizer of a unimodal function.

    The caller guarantees unimodality on [lo, hi]; the bracket shrinks to
    width <= tol before the midpoint is reported.
    """
    if lo >= hi:
        raise InvalidBracket(f"need lo < hi, got [{lo}, {hi}]")
    a, b = lo, hi
    h = b - a
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    fc, fd = f(c), f(d)
    iterations = 0
    while h > tol:
        iterations += 1
        h *= _INV_PHI
        if fc > fd:
            b, d, fd = d, c, fc
            c = a + _INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * h
            fd = f(d)
    x = 0.5 * (a + b)
    fx = f(x)
    # boundary maxima (e.g. non-positive objectives peaking at lo) beat the
    # interior estimate when the function is flat or decreasing inward
    for cand, fcand in ((lo, f(lo)), (hi, f(hi))):
        if fcand > fx:
            x, fx = cand, fcand
    return UnimodalMaximizationResult(argmax=x, max_value=fx, iterations=iterations)


def second_derivative_at(f: Callable[[float], float], x: float,
                         h: float = 1e-4) -> float:
    """Central finite difference (f(x+h) - 2 f(x) + f(x-h)) / h^2."""
    if h <= 0:
        raise ValueError("step h must be positive")
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)


def find_root_monotone(g: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-10) -> float:
    """Bisection root of a continuous monotone function with a sign change."""
    if lo >= hi:
        raise InvalidBracket(f"need lo < hi, got [{lo}, {hi}]")
    glo, ghi = g(lo), g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if glo * ghi > 0.0:
        raise NoSignChange(f"g({lo})={glo:.6g} and g({hi})={ghi:.6g} share a sign")
    a, b = lo, hi
    while b - a > tol:
        mid = 0.5 * (a + b)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if glo * gm < 0.0:
            b = mid
        else:
            a, glo = mid, gm
    return 0.5 * (a + b)
