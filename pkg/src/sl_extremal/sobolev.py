"""Sobolev-space metrics: the W^1_2 norm, the duality pairing, and a discrete
negative-order norm.

A signed measure here is a signed step function plus finitely many signed
point masses -- exactly the differences that arise between two admissible
potentials or between a potential and its singular limit.  The negative norm
is computed by Riesz representation inside the space of continuous piecewise
linear functions on a uniform grid: one symmetric tridiagonal solve replaces
the supremum over the unit ball, and the value increases toward the true norm
as the grid is refined.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from scipy.linalg import solveh_banded

from .potentials import Potential, StepPotential, _as_float_array

__all__ = [
    "SignedMeasure",
    "SampledFunction",
    "w1_norm",
    "pairing",
    "wminus1_norm",
    "wminus1_dist",
    "as_signed_measure",
]


@dataclass(frozen=True, eq=False)
class SignedMeasure:
    """Signed step function on [0,1] plus signed point masses."""

    breakpoints: np.ndarray
    heights: np.ndarray
    deltas: tuple[tuple[float, float], ...] = ()

    def __init__(self, breakpoints, heights, deltas=()):
        bp = _as_float_array(breakpoints, "breakpoints")
        h = np.asarray(heights, dtype=float).copy()
        if bp.size < 2 or bp[0] != 0.0 or bp[-1] != 1.0 or not np.all(np.diff(bp) > 0):
            raise ValueError("breakpoints must increase strictly from 0 to 1")
        if h.size != bp.size - 1 or not np.all(np.isfinite(h)):
            raise ValueError("need one finite height per cell")
        h.flags.writeable = False
        merged: dict[float, float] = {}
        for site, w in deltas:
            site = float(site)
            w = float(w)
            if not (0.0 <= site <= 1.0) or not math.isfinite(w):
                raise ValueError("delta sites must lie in [0,1] with finite weight")
            merged[site] = merged.get(site, 0.0) + w
        out = tuple((s, w) for s, w in sorted(merged.items()) if w != 0.0)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "heights", h)
        object.__setattr__(self, "deltas", out)

    @classmethod
    def zero(cls) -> "SignedMeasure":
        return cls([0.0, 1.0], [0.0])

    @classmethod
    def from_step(cls, step: StepPotential) -> "SignedMeasure":
        return cls(step.breakpoints, step.heights)

    @classmethod
    def from_potential(cls, pot: Potential) -> "SignedMeasure":
        return cls(
            pot.step.breakpoints,
            pot.step.heights,
            tuple((d.site, d.weight) for d in pot.deltas),
        )

    def scaled(self, factor: float) -> "SignedMeasure":
        return SignedMeasure(
            self.breakpoints,
            self.heights * factor,
            tuple((s, w * factor) for s, w in self.deltas),
        )

    def __sub__(self, other: "SignedMeasure") -> "SignedMeasure":
        other = as_signed_measure(other)
        grid = np.union1d(self.breakpoints, other.breakpoints)
        mids = 0.5 * (grid[:-1] + grid[1:])

        def sample(m: "SignedMeasure") -> np.ndarray:
            idx = np.clip(
                np.searchsorted(m.breakpoints, mids, side="right") - 1,
                0,
                m.heights.size - 1,
            )
            return m.heights[idx]

        deltas = list(self.deltas) + [(s, -w) for s, w in other.deltas]
        return SignedMeasure(grid, sample(self) - sample(other), tuple(deltas))

    def __add__(self, other: "SignedMeasure") -> "SignedMeasure":
        return self - as_signed_measure(other).scaled(-1.0)

    def to_dict(self) -> dict:
        return {
            "breakpoints": [float(x) for x in self.breakpoints],
            "heights": [float(h) for h in self.heights],
            "deltas": [{"site": s, "weight": w} for s, w in self.deltas],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SignedMeasure":
        return cls(
            data["breakpoints"],
            data["heights"],
            tuple((d["site"], d["weight"]) for d in data.get("deltas", [])),
        )


def as_signed_measure(f) -> SignedMeasure:
    if isinstance(f, SignedMeasure):
        return f
    if isinstance(f, Potential):
        return SignedMeasure.from_potential(f)
    if isinstance(f, StepPotential):
        return SignedMeasure.from_step(f)
    raise TypeError(f"cannot interpret {type(f).__name__} as a signed measure")


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values of a test function on the uniform grid i/N, i = 0..N (N >= 2).

    All norm and pairing computations treat the function as its continuous
    piecewise-linear interpolant, for which the integrals are exact.
    """

    values: np.ndarray

    def __init__(self, values):
        v = _as_float_array(values, "values")
        if v.size < 3:
            raise ValueError("need at least 3 grid values (N >= 2 intervals)")
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, c: float, n: int = 2) -> "SampledFunction":
        return cls(np.full(n + 1, float(c)))

    @classmethod
    def from_callable(cls, fn, n: int) -> "SampledFunction":
        x = np.linspace(0.0, 1.0, n + 1)
        return cls(np.array([fn(t) for t in x], dtype=float))

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.values.size)


def w1_norm(z: SampledFunction) -> float:
    """sqrt(int z'^2 + int z^2) of the piecewise-linear interpolant (exact)."""
    v = z.values
    h = 1.0 / (v.size - 1)
    dv = np.diff(v)
    grad2 = float(np.sum(dv * dv)) / h
    mass = float(np.sum(v[:-1] ** 2 + v[:-1] * v[1:] + v[1:] ** 2)) * h / 3.0
    return math.sqrt(grad2 + mass)


def pairing(f, z: SampledFunction) -> float:
    """Duality pairing <f, z>: exact step integral plus point evaluations."""
    f = as_signed_measure(f)
    xz = z.grid
    pts = np.union1d(xz, f.breakpoints)
    zv = np.interp(pts, xz, z.values)
    a = pts[:-1]
    b = pts[1:]
    mids = 0.5 * (a + b)
    idx = np.clip(
        np.searchsorted(f.breakpoints, mids, side="right") - 1,
        0,
        f.heights.size - 1,
    )
    # z is linear on each subinterval, so the trapezoid value is exact
    total = float(np.sum(f.heights[idx] * 0.5 * (zv[:-1] + zv[1:]) * (b - a)))
    for site, w in f.deltas:
        total += w * float(np.interp(site, xz, z.values))
    return total


def _hat_loads(f: SignedMeasure, grid: np.ndarray) -> np.ndarray:
    """<f, phi_i> for every hat function phi_i on the uniform grid."""
    n = grid.size
    h = grid[1] - grid[0]
    b = np.zeros(n)
    pts = np.union1d(grid, f.breakpoints)
    a = pts[:-1]
    bb = pts[1:]
    mids = 0.5 * (a + bb)
    elem = np.clip(np.searchsorted(grid, mids, side="right") - 1, 0, n - 2)
    sidx = np.clip(
        np.searchsorted(f.breakpoints, mids, side="right") - 1,
        0,
        f.heights.size - 1,
    )
    sval = f.heights[sidx]
    ta = (a - grid[elem]) / h
    tb = (bb - grid[elem]) / h
    load_left = sval * h * ((tb - ta) - 0.5 * (tb**2 - ta**2))
    load_right = sval * h * 0.5 * (tb**2 - ta**2)
    np.add.at(b, elem, load_left)
    np.add.at(b, elem + 1, load_right)
    for site, w in f.deltas:
        j = min(int(np.searchsorted(grid, site, side="right")) - 1, n - 2)
        j = max(j, 0)
        t = (site - grid[j]) / h
        b[j] += w * (1.0 - t)
        b[j + 1] += w * t
    return b


def wminus1_norm(f, grid_n: int) -> float:
    """Discrete negative-order Sobolev norm by Riesz representation.

    Solves (u, v)_{W^1_2} = <f, v> for all piecewise-linear v on a uniform
    grid with grid_n intervals (natural boundary conditions, one tridiagonal
    solve) and returns sqrt(<f, u>).  This equals the supremum of <f, z> over
    the unit ball of the discrete space, hence approximates the true norm
    from below as grid_n grows.
    """
    f = as_signed_measure(f)
    if grid_n < 64:
        raise ValueError("grid_n must be >= 64")
    n = int(grid_n) + 1
    grid = np.linspace(0.0, 1.0, n)
    h = 1.0 / grid_n

    diag = np.full(n, 2.0 / h + 2.0 * h / 3.0)
    diag[0] = diag[-1] = 1.0 / h + h / 3.0
    off = np.full(n - 1, -1.0 / h + h / 6.0)

    b = _hat_loads(f, grid)
    ab = np.zeros((2, n))
    ab[0, 1:] = off
    ab[1, :] = diag
    u = solveh_banded(ab, b)
    val = float(np.dot(b, u))
    return math.sqrt(val) if val > 0.0 else 0.0


def wminus1_dist(f, g, grid_n: int) -> float:
    """Negative-norm distance ||f - g|| with exact measure subtraction."""
    return wminus1_norm(as_signed_measure(f) - as_signed_measure(g), grid_n)
