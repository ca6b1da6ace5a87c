"""Tensor-product Gauss-Legendre quadrature over a square, with panel doubling.

The integrand must broadcast over numpy arrays: it is called as f(U, V) with
U of shape (b, 1) and V of shape (1, k).  Evaluation is chunked along the
first axis so refined grids never materialize more than a few million nodes
at once.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = ["QuadratureError", "integrate_square"]

_CHUNK = 1 << 21


class QuadratureError(RuntimeError):
    """Panel doubling stopped before successive estimates agreed to tolerance."""


@lru_cache(maxsize=32)
def _base_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _panel_rule(size: float, panels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite rule for [0, size] split into equal panels."""
    base_x, base_w = _base_rule(order)
    h = size / panels
    offsets = h * np.arange(panels)[:, None]
    x = (offsets + 0.5 * h * (base_x + 1.0)[None, :]).ravel()
    w = np.tile(0.5 * h * base_w, panels)
    return x, w


def _tensor_value(f, x: np.ndarray, w: np.ndarray) -> float:
    rows = max(1, _CHUNK // x.size)
    parts = []
    for start in range(0, x.size, rows):
        stop = min(start + rows, x.size)
        block = f(x[start:stop, None], x[None, :])
        parts.append(float(w[start:stop] @ block @ w))
    return math.fsum(parts)


def integrate_square(
    f,
    size: float,
    tol: float,
    order: int = 16,
    max_doublings: int = 8,
) -> float:
    """Integrate f over [0, size]^2 to the requested absolute tolerance.

    Starts from a single panel per axis with `order` Gauss-Legendre nodes and
    doubles the panel count until two successive estimates differ by at most
    tol.  Raises QuadratureError if agreement is not reached.
    """
    if size <= 0.0:
        raise ValueError(f"integration size {size} must be positive")
    previous = None
    for level in range(max_doublings + 1):
        x, w = _panel_rule(size, 2**level, order)
        value = _tensor_value(f, x, w)
        if previous is not None and abs(value - previous) <= tol:
            return value
        previous = value
    raise QuadratureError(
        f"no {tol:g} agreement after {max_doublings} panel doublings "
        f"(last estimates {previous:.12g})"
    )
