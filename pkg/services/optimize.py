"""One-dimensional searches shared by the exponent and measurement services."""
from typing import Callable, Tuple
import math
import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2  # 1/phi
INV_PHI_SQ = (3 - math.sqrt(5)) / 2  # 1/phi^2


def golden_section_max(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    check_endpoints: bool = True,
) -> Tuple[float, float]:
    """Maximize a unimodal function on [a, b]; returns (argmax, max)"""
    dist = b - a
    if dist <= tol:
        x = (a + b) / 2
        return x, f(x)

    n = int(math.ceil(math.log(tol / dist) / math.log(INV_PHI)))
    c = a + INV_PHI_SQ * dist
    d = a + INV_PHI * dist
    yc = f(c)
    yd = f(d)
    for _ in range(max(n - 1, 0)):
        if yc > yd:
            b = d
            d = c
            yd = yc
            dist = INV_PHI * dist
            c = a + INV_PHI_SQ * dist
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            dist = INV_PHI * dist
            d = a + INV_PHI * dist
            yd = f(d)

    best_x, best_y = (c, yc) if yc > yd else (d, yd)
    if check_endpoints:
        for x in (a, b):
            y = f(x)
            if y > best_y:
                best_x, best_y = x, y
    return best_x, best_y


def golden_section_min(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    check_endpoints: bool = True,
) -> Tuple[float, float]:
    x, y = golden_section_max(lambda t: -f(t), a, b, tol, check_endpoints)
    return x, -y


def grid_then_golden_max(
    f: Callable[[float], float],
    a: float,
    b: float,
    points: int,
    tol: float = 1e-10,
) -> Tuple[float, float]:
    """Grid argmax followed by golden-section refinement on the neighbouring cells"""
    grid = np.linspace(a, b, points)
    values = np.array([f(float(t)) for t in grid])
    k = int(np.argmax(values))
    lo = float(grid[max(k - 1, 0)])
    hi = float(grid[min(k + 1, points - 1)])
    x, y = golden_section_max(f, lo, hi, tol)
    if values[k] > y:
        return float(grid[k]), float(values[k])
    return x, y
