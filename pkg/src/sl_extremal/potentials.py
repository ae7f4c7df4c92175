"""Step + delta potentials on [0,1] and the extended L^p norm family.

Potentials are piecewise-constant nonnegative functions (optionally carrying
positive Dirac masses), so every integral used by the norm and normalization
routines is a closed-form sum over cells -- there is no quadrature error
anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

__all__ = [
    "StepPotential",
    "DeltaComponent",
    "Potential",
    "NonPositiveExponentOnVanishingFunction",
    "ZeroPotential",
    "NegativeResult",
    "pnorm",
    "normalize_gamma",
    "shift",
    "refine_common",
]


class NonPositiveExponentOnVanishingFunction(ValueError):
    """p <= 0 requires a strictly positive function (1/y must stay bounded)."""


class ZeroPotential(ValueError):
    """Normalization is undefined when the gamma-norm vanishes or diverges."""


class NegativeResult(ValueError):
    """A shift drove some height below zero, leaving the admissible class."""


def _as_float_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class StepPotential:
    """Piecewise-constant nonnegative function on [0,1].

    ``breakpoints`` is the strictly increasing grid 0 = x0 < ... < xK = 1 and
    ``heights[i]`` is the value on the open cell (x_i, x_{i+1}).
    """

    breakpoints: np.ndarray
    heights: np.ndarray

    def __init__(self, breakpoints, heights):
        bp = _as_float_array(breakpoints, "breakpoints")
        h = _as_float_array(heights, "heights")
        if bp.size < 2:
            raise ValueError("need at least one cell")
        if bp[0] != 0.0 or bp[-1] != 1.0:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if not np.all(np.diff(bp) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        if h.size != bp.size - 1:
            raise ValueError("need exactly one height per cell")
        if np.any(h < 0):
            raise ValueError("heights must be nonnegative")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "heights", h)

    @classmethod
    def constant(cls, height: float) -> "StepPotential":
        return cls([0.0, 1.0], [height])

    @classmethod
    def from_uniform_cells(cls, heights) -> "StepPotential":
        h = np.asarray(heights, dtype=float)
        return cls(np.linspace(0.0, 1.0, h.size + 1), h)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def value_at(self, x: float) -> float:
        """Cell value at x (cells are taken half-open to the right)."""
        i = int(np.searchsorted(self.breakpoints, x, side="right")) - 1
        i = min(max(i, 0), self.heights.size - 1)
        return float(self.heights[i])

    def scaled(self, factor: float) -> "StepPotential":
        return StepPotential(self.breakpoints, self.heights * factor)

    def max_height(self) -> float:
        return float(self.heights.max())

    def to_dict(self) -> dict:
        return {
            "breakpoints": [float(x) for x in self.breakpoints],
            "heights": [float(h) for h in self.heights],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StepPotential":
        return cls(data["breakpoints"], data["heights"])

    def equals(self, other: "StepPotential") -> bool:
        return np.array_equal(self.breakpoints, other.breakpoints) and np.array_equal(
            self.heights, other.heights
        )


@dataclass(frozen=True)
class DeltaComponent:
    """Dirac mass weight * delta(x - site) with site in [0,1], weight > 0."""

    site: float
    weight: float

    def __post_init__(self):
        if not (0.0 <= self.site <= 1.0):
            raise ValueError("delta site must lie in [0,1]")
        if not (self.weight > 0.0 and math.isfinite(self.weight)):
            raise ValueError("delta weight must be positive and finite")


@dataclass(frozen=True)
class Potential:
    """A step potential plus finitely many positive point masses.

    Deltas at the same site are merged by adding weights; the stored tuple is
    sorted by site.
    """

    step: StepPotential
    deltas: tuple[DeltaComponent, ...] = field(default=())

    def __init__(self, step: StepPotential, deltas=()):
        merged: dict[float, float] = {}
        for d in deltas:
            if not isinstance(d, DeltaComponent):
                d = DeltaComponent(*d)
            merged[d.site] = merged.get(d.site, 0.0) + d.weight
        out = tuple(DeltaComponent(s, w) for s, w in sorted(merged.items()))
        object.__setattr__(self, "step", step)
        object.__setattr__(self, "deltas", out)

    @classmethod
    def from_step(cls, step: StepPotential) -> "Potential":
        return cls(step, ())

    @classmethod
    def pure_delta(cls, site: float, weight: float) -> "Potential":
        return cls(StepPotential.constant(0.0), (DeltaComponent(site, weight),))

    @property
    def total_delta_weight(self) -> float:
        return float(sum(d.weight for d in self.deltas))

    def to_dict(self) -> dict:
        out = self.step.to_dict()
        out["deltas"] = [
            {"site": float(d.site), "weight": float(d.weight)} for d in self.deltas
        ]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Potential":
        step = StepPotential.from_dict(data)
        deltas = tuple(
            DeltaComponent(float(d["site"]), float(d["weight"]))
            for d in data.get("deltas", [])
        )
        return cls(step, deltas)


def as_step(q) -> StepPotential:
    """Coerce to a StepPotential; a Potential must carry no deltas."""
    if isinstance(q, StepPotential):
        return q
    if isinstance(q, Potential):
        if q.deltas:
            raise ValueError("operation is defined for L^p functions only; "
                             "this potential carries delta components")
        return q.step
    raise TypeError(f"expected StepPotential or Potential, got {type(q).__name__}")


def as_potential(q) -> Potential:
    if isinstance(q, Potential):
        return q
    if isinstance(q, StepPotential):
        return Potential.from_step(q)
    raise TypeError(f"expected StepPotential or Potential, got {type(q).__name__}")


def pnorm(y, p: float) -> float:
    """Extended L^p norm of a step function for any real exponent.

    For p != 0 returns (sum_i h_i^p dx_i)^(1/p); at p = 0 returns the
    geometric mean exp(sum_i ln(h_i) dx_i), which is the limit of the p != 0
    formula.  Zero heights are allowed for p > 0 (0^p = 0) and rejected for
    p <= 0.  The sum is evaluated through expm1/log1p so the result stays
    accurate uniformly in p, including p within rounding distance of 0.
    """
    y = as_step(y)
    if not math.isfinite(p):
        raise ValueError("exponent must be finite")
    h = y.heights
    w = y.widths
    positive = h > 0
    if p <= 0 and not positive.all():
        raise NonPositiveExponentOnVanishingFunction(
            "p <= 0 requires strictly positive heights"
        )
    if p == 0.0:
        return float(math.exp(np.dot(w, np.log(h))))
    wp = w[positive]
    logs = np.log(h[positive])
    # S - 1 with S = integral of h^p; exact -sum(w) contribution from zero cells.
    s_minus_1 = float(np.dot(wp, np.expm1(p * logs)) - w[~positive].sum())
    if s_minus_1 <= -1.0:
        return 0.0 if p > 0 else math.inf
    if abs(s_minus_1) <= 0.5:
        log_s = math.log1p(s_minus_1)
    else:
        log_s = float(np.log(np.dot(wp, np.exp(p * logs))))
    return float(math.exp(log_s / p))


def normalize_gamma(f, gamma: float) -> tuple[StepPotential, float]:
    """Scale f onto the constraint manifold ||q||_gamma = 1.

    Returns (f / kappa, kappa) with kappa = pnorm(f, gamma).  Raises
    ZeroPotential when the gamma-norm vanishes, diverges, or is undefined
    because f vanishes somewhere while gamma < 0.
    """
    f = as_step(f)
    if gamma == 0.0:
        raise ValueError("gamma must be nonzero")
    try:
        kappa = pnorm(f, gamma)
    except NonPositiveExponentOnVanishingFunction as exc:
        raise ZeroPotential("gamma-norm undefined for this potential") from exc
    if not (kappa > 0.0 and math.isfinite(kappa)):
        raise ZeroPotential(f"gamma-norm is {kappa}; cannot normalize")
    return StepPotential(f.breakpoints, f.heights / kappa), kappa


def shift(q, c: float) -> StepPotential:
    """Add the constant c to every height, keeping the result admissible."""
    q = as_step(q)
    new_heights = q.heights + c
    if np.any(new_heights < 0):
        raise NegativeResult(
            f"shift by {c} makes some height negative (min would be "
            f"{float(new_heights.min())})"
        )
    return StepPotential(q.breakpoints, new_heights)


def refine_common(a, b) -> tuple[StepPotential, StepPotential]:
    """Re-express both step functions on the union of their breakpoints."""
    a = as_step(a)
    b = as_step(b)
    grid = np.union1d(a.breakpoints, b.breakpoints)
    mids = 0.5 * (grid[:-1] + grid[1:])

    def resample(q: StepPotential) -> StepPotential:
        idx = np.clip(
            np.searchsorted(q.breakpoints, mids, side="right") - 1,
            0,
            q.heights.size - 1,
        )
        return StepPotential(grid, q.heights[idx])

    return resample(a), resample(b)
