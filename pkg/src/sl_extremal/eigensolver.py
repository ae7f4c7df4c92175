"""First eigenvalue of y'' + q y + lambda y = 0 with third-type boundary conditions.

The boundary conditions are y'(0) = k0^2 y(0) and y'(1) = -k1^2 y(1).  The
primary solver is phase-angle (Prufer) shooting: with y = rho sin(theta),
y' = rho cos(theta), the angle obeys

    theta' = cos(theta)^2 + (lambda + q(x)) sin(theta)^2,

theta(0) = arccot(k0^2), and lambda_1 is the unique lambda at which theta(1)
first reaches pi - arccot(k1^2); theta(1; lambda) is strictly increasing in
lambda.  A point mass w * delta(x - site) integrates to the jump
cot(theta+) = cot(theta-) - w taken inside the same pi-period.

An independent P1 finite-element discretization of the associated quadratic
form (``lambda1_fd``) serves as a cross-check, and ``lambda1_zero`` evaluates
the zero-potential eigenvalue from its characteristic equation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .potentials import Potential, StepPotential, as_potential

__all__ = [
    "RobinBC",
    "SolverConfig",
    "EigenResult",
    "BracketNotFound",
    "ZeroFunction",
    "theta_end",
    "lambda1",
    "lambda1_fd",
    "lambda1_zero",
    "rayleigh",
    "DEFAULT_CONFIG",
]


class BracketNotFound(RuntimeError):
    """Bracket expansion exhausted without enclosing the eigenvalue."""


class ZeroFunction(ValueError):
    """Rayleigh quotient of the zero function is undefined."""


def _arccot(x: float) -> float:
    """arccot on [0, inf) with values in (0, pi/2]."""
    return math.atan2(1.0, x)


@dataclass(frozen=True)
class RobinBC:
    """Boundary coefficients (k0^2, k1^2); both are squares, hence >= 0."""

    k0sq: float
    k1sq: float

    def __post_init__(self):
        if not (self.k0sq >= 0.0 and math.isfinite(self.k0sq)):
            raise ValueError("k0sq must be finite and >= 0")
        if not (self.k1sq >= 0.0 and math.isfinite(self.k1sq)):
            raise ValueError("k1sq must be finite and >= 0")

    @property
    def theta_start(self) -> float:
        return _arccot(self.k0sq)

    @property
    def theta_target(self) -> float:
        return math.pi - _arccot(self.k1sq)


@dataclass(frozen=True)
class SolverConfig:
    ode_steps_per_cell: int = 48
    theta_tolerance: float = 1e-10
    max_bracket_expansions: int = 60

    def __post_init__(self):
        if self.ode_steps_per_cell < 16:
            raise ValueError("ode_steps_per_cell must be >= 16")
        if not (self.theta_tolerance > 0):
            raise ValueError("theta_tolerance must be positive")
        if self.max_bracket_expansions < 1:
            raise ValueError("max_bracket_expansions must be >= 1")


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class EigenResult:
    lambda1: float
    residual: float
    bracket: tuple[float, float]
    iterations: int
    eigenfunction_samples: tuple[tuple[float, float], ...] | None = field(default=None)

    def to_dict(self, include_samples: bool = True) -> dict:
        out = {
            "lambda1": float(self.lambda1),
            "residual": float(self.residual),
            "bracket": [float(self.bracket[0]), float(self.bracket[1])],
            "iterations": int(self.iterations),
        }
        if include_samples and self.eigenfunction_samples is not None:
            out["eigenfunction_samples"] = [
                [float(x), float(y)] for x, y in self.eigenfunction_samples
            ]
        return out


# --- phase integration -----------------------------------------------------

def _segments(pot: Potential) -> tuple[list[tuple[float, float]], dict[float, float]]:
    """Split [0,1] at step breakpoints and delta sites.

    Returns (cells, jumps): cells is a list of (length, height) in order and
    jumps maps a boundary coordinate to the total point mass sitting there.
    """
    step = pot.step
    bounds = set(float(x) for x in step.breakpoints)
    jumps: dict[float, float] = {}
    for d in pot.deltas:
        bounds.add(float(d.site))
        jumps[float(d.site)] = jumps.get(float(d.site), 0.0) + d.weight
    grid = sorted(bounds)
    cells = []
    for a, b in zip(grid[:-1], grid[1:]):
        cells.append((b - a, step.value_at(0.5 * (a + b))))
    return list(zip(grid[1:], cells)), jumps


def _segment_steps(length: float, c: float, floor: int) -> int:
    # Resolution scales with the local frequency sqrt(|c|); the |c| term keeps
    # fixed-step RK4 inside its stability region on stiff (very negative or
    # very tall) cells.
    rate = 2.0 + 12.0 * math.sqrt(abs(c)) + 0.45 * abs(c)
    need = int(math.ceil(length * rate))
    return need if need > floor else floor


def _rk4_theta(theta: float, c: float, length: float, nsteps: int) -> float:
    h = length / nsteps
    h2 = 0.5 * h
    h6 = h / 6.0
    sin = math.sin
    cos = math.cos
    for _ in range(nsteps):
        s = sin(theta)
        co = cos(theta)
        k1 = co * co + c * s * s
        t = theta + h2 * k1
        s = sin(t)
        co = cos(t)
        k2 = co * co + c * s * s
        t = theta + h2 * k2
        s = sin(t)
        co = cos(t)
        k3 = co * co + c * s * s
        t = theta + h * k3
        s = sin(t)
        co = cos(t)
        k4 = co * co + c * s * s
        theta += h6 * (k1 + 2.0 * (k2 + k3) + k4)
    return theta


def _delta_jump(theta: float, w: float) -> float:
    """Apply cot(theta+) = cot(theta-) - w within the same pi-period."""
    k = math.floor(theta / math.pi)
    phi = theta - k * math.pi
    s = math.sin(phi)
    if s == 0.0:
        return theta  # the eigenfunction vanishes here; the mass acts on nothing
    co = math.cos(phi)
    phi_new = math.atan2(s, co - w * s)
    if phi_new < 0.0:
        phi_new += math.pi
    return k * math.pi + phi_new


def _theta_end_prepared(cells, jumps, theta0, lam, cfg) -> float:
    theta = theta0
    w0 = jumps.get(0.0)
    if w0 is not None:
        theta = _delta_jump(theta, w0)
    floor = cfg.ode_steps_per_cell
    for right, (length, height) in cells:
        c = lam + height
        theta = _rk4_theta(theta, c, length, _segment_steps(length, c, floor))
        w = jumps.get(right)
        if w is not None:
            theta = _delta_jump(theta, w)
    return theta


def theta_end(q, bc: RobinBC, lam: float, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """Prufer angle theta(1; lambda) for the shooting problem.

    Integrates theta' = cos^2(theta) + (lambda + q) sin^2(theta) from
    theta(0) = arccot(k0^2) with classical fixed-step RK4 on each constant
    cell (at least cfg.ode_steps_per_cell steps per cell) and the cotangent
    jump rule at point masses.
    """
    pot = as_potential(q)
    cells, jumps = _segments(pot)
    return _theta_end_prepared(cells, jumps, bc.theta_start, lam, cfg)


# --- eigenvalue via bracketed bisection ------------------------------------

def lambda1(
    q,
    bc: RobinBC,
    cfg: SolverConfig = DEFAULT_CONFIG,
    *,
    eigenfunction_samples: int | None = None,
    bracket_hint: tuple[float, float] | None = None,
) -> EigenResult:
    """First eigenvalue of the problem, found by shooting.

    theta(1; lambda) is strictly increasing in lambda, so the equation
    theta(1; lambda) = pi - arccot(k1^2) has exactly one solution; it is
    enclosed by doubling the bracket outward from [-1, 1] (or from
    ``bracket_hint``) and then bisected.  Raises BracketNotFound after
    cfg.max_bracket_expansions doublings.
    """
    pot = as_potential(q)
    cells, jumps = _segments(pot)
    theta0 = bc.theta_start
    target = bc.theta_target

    def f(lam: float) -> float:
        return _theta_end_prepared(cells, jumps, theta0, lam, cfg) - target

    if bracket_hint is not None:
        lo, hi = float(bracket_hint[0]), float(bracket_hint[1])
        if not lo < hi:
            raise ValueError("bracket_hint must satisfy lo < hi")
    else:
        lo, hi = -1.0, 1.0

    f_lo = f(lo)
    f_hi = f(hi)
    expansions = 0
    while f_lo >= 0.0:
        if expansions >= cfg.max_bracket_expansions:
            raise BracketNotFound(
                f"no lower bracket endpoint after {expansions} expansions"
            )
        lo -= hi - lo
        f_lo = f(lo)
        expansions += 1
    while f_hi <= 0.0:
        if expansions >= cfg.max_bracket_expansions:
            raise BracketNotFound(
                f"no upper bracket endpoint after {expansions} expansions"
            )
        hi += hi - lo
        f_hi = f(hi)
        expansions += 1

    iterations = expansions
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = f(mid)
        iterations += 1
        if fm < 0.0:
            lo = mid
        else:
            hi = mid
        lam_tol = 1e-13 * max(1.0, abs(lo), abs(hi))
        if (hi - lo) <= lam_tol and abs(fm) <= cfg.theta_tolerance:
            break

    lam = 0.5 * (lo + hi)
    residual = abs(f(lam))

    samples = None
    if eigenfunction_samples is not None:
        samples = _eigenfunction(pot, bc, lam, cfg, eigenfunction_samples)

    return EigenResult(
        lambda1=lam,
        residual=residual,
        bracket=(lo, hi),
        iterations=iterations,
        eigenfunction_samples=samples,
    )


def _rk4_theta_logrho(theta, logrho, c, length, nsteps):
    h = length / nsteps
    h2 = 0.5 * h
    h6 = h / 6.0
    sin = math.sin
    cos = math.cos
    onemc = 1.0 - c
    for _ in range(nsteps):
        s = sin(theta)
        co = cos(theta)
        k1 = co * co + c * s * s
        g1 = onemc * s * co
        t = theta + h2 * k1
        s = sin(t)
        co = cos(t)
        k2 = co * co + c * s * s
        g2 = onemc * s * co
        t = theta + h2 * k2
        s = sin(t)
        co = cos(t)
        k3 = co * co + c * s * s
        g3 = onemc * s * co
        t = theta + h * k3
        s = sin(t)
        co = cos(t)
        k4 = co * co + c * s * s
        g4 = onemc * s * co
        theta += h6 * (k1 + 2.0 * (k2 + k3) + k4)
        logrho += h6 * (g1 + 2.0 * (g2 + g3) + g4)
    return theta, logrho


def _eigenfunction(pot, bc, lam, cfg, n_samples):
    """Sample y on the uniform grid j/n_samples at the converged eigenvalue."""
    if n_samples < 2:
        raise ValueError("need at least 2 sample intervals")
    cells, jumps = _segments(pot)
    sample_xs = [j / n_samples for j in range(n_samples + 1)]
    cuts = sorted(set(x for x, _ in cells) | set(sample_xs))
    wanted = set(sample_xs)

    theta = bc.theta_start
    logrho = 0.0
    w0 = jumps.get(0.0)
    if w0 is not None:
        theta = _delta_jump(theta, w0)
    out = [(0.0, math.sin(theta))]

    cell_iter = iter(cells)
    right, (length, height) = next(cell_iter)
    floor = cfg.ode_steps_per_cell
    prev = 0.0
    for x in cuts:
        if x == 0.0:
            continue
        seg = x - prev
        c = lam + height
        frac = seg / length if length > 0 else 1.0
        nsteps = max(2, int(math.ceil(_segment_steps(length, c, floor) * frac)))
        theta, logrho = _rk4_theta_logrho(theta, logrho, c, seg, nsteps)
        prev = x
        if x == right:
            w = jumps.get(right)
            if w is not None:
                s_before = math.sin(theta)
                theta = _delta_jump(theta, w)
                s_after = math.sin(theta)
                if s_before != 0.0 and s_after != 0.0:
                    logrho += math.log(abs(s_before / s_after))
            nxt = next(cell_iter, None)
            if nxt is not None:
                right, (length, height) = nxt
        if x in wanted:
            out.append((x, math.exp(logrho) * math.sin(theta)))

    peak = max(abs(y) for _, y in out)
    if peak == 0.0:
        peak = 1.0
    return tuple((x, y / peak) for x, y in out)


# --- zero-potential eigenvalue from the characteristic equation ------------

def lambda1_zero(bc: RobinBC) -> float:
    """lambda_1 for q = 0: the smallest root of the characteristic equation.

    For omega^2 = lambda > 0 the eigencondition reads
    tan(omega) (omega^2 - k0^2 k1^2) = omega (k0^2 + k1^2); multiplying by
    cos(omega) removes the pole at omega = pi/2, and the single root in
    (0, pi) is found by bisection.  The Neumann case returns exactly 0.
    """
    a = bc.k0sq * bc.k1sq
    b = bc.k0sq + bc.k1sq
    if b == 0.0:
        return 0.0

    def chi(w: float) -> float:
        return math.sin(w) * (w * w - a) - b * w * math.cos(w)

    lo, hi = 1e-12, math.pi
    # chi < 0 near 0 (expansion -omega (a + b)), chi(pi) = pi b > 0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if chi(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    w = 0.5 * (lo + hi)
    return w * w


# --- finite-element oracle --------------------------------------------------

def lambda1_fd(q, bc: RobinBC, n_nodes: int) -> float:
    """Smallest eigenvalue of the P1 finite-element discretization.

    Assembles the quadratic form int y'^2 + k0^2 y(0)^2 + k1^2 y(1)^2
    - int q y^2 - sum w y(site)^2 against the consistent mass matrix on a
    uniform grid; step-potential cells are integrated exactly against the
    hat-function products, and point masses are snapped to the nearest node
    so the pencil stays tridiagonal.  The smallest generalized eigenvalue is
    located by bisection on the Sturm count (signs of the LDL^T pivots of
    K - lambda M).
    """
    if n_nodes < 32:
        raise ValueError("n_nodes must be >= 32")
    pot = as_potential(q)
    step = pot.step
    n = int(n_nodes)
    h = 1.0 / (n - 1)
    grid = np.linspace(0.0, 1.0, n)

    kd = np.full(n, 2.0 / h)
    kd[0] = kd[-1] = 1.0 / h
    ke = np.full(n - 1, -1.0 / h)
    md = np.full(n, 2.0 * h / 3.0)
    md[0] = md[-1] = h / 3.0
    me = np.full(n - 1, h / 6.0)

    kd[0] += bc.k0sq
    kd[-1] += bc.k1sq

    # exact assembly of -int q phi_i phi_j over each constant-q piece
    pts = np.union1d(grid, step.breakpoints)
    a = pts[:-1]
    b = pts[1:]
    mids = 0.5 * (a + b)
    elem = np.clip(np.searchsorted(grid, mids, side="right") - 1, 0, n - 2)
    sidx = np.clip(
        np.searchsorted(step.breakpoints, mids, side="right") - 1,
        0,
        step.heights.size - 1,
    )
    sval = step.heights[sidx]
    ta = (a - grid[elem]) / h
    tb = (b - grid[elem]) / h
    i_ll = h * ((1.0 - ta) ** 3 - (1.0 - tb) ** 3) / 3.0
    i_rr = h * (tb**3 - ta**3) / 3.0
    i_lr = h * ((tb**2 - ta**2) / 2.0 - (tb**3 - ta**3) / 3.0)
    np.add.at(kd, elem, -sval * i_ll)
    np.add.at(kd, elem + 1, -sval * i_rr)
    np.add.at(ke, elem, -sval * i_lr)

    for d in pot.deltas:
        j = int(round(d.site * (n - 1)))
        kd[j] -= d.weight

    pivmin = 1e-280

    def count_below(lams: np.ndarray) -> np.ndarray:
        """Number of generalized eigenvalues strictly below each lambda."""
        dpiv = kd[0] - lams * md[0]
        dpiv = np.where(np.abs(dpiv) < pivmin, -pivmin, dpiv)
        cnt = (dpiv < 0).astype(np.int64)
        for i in range(1, n):
            e = ke[i - 1] - lams * me[i - 1]
            dpiv = (kd[i] - lams * md[i]) - e * e / dpiv
            dpiv = np.where(np.abs(dpiv) < pivmin, -pivmin, dpiv)
            cnt += dpiv < 0
        return cnt

    lo, hi = -1.0, 1.0
    for _ in range(200):
        if count_below(np.array([hi]))[0] >= 1:
            break
        hi += hi - lo
    else:
        raise BracketNotFound("finite-element upper bracket not found")
    for _ in range(200):
        if count_below(np.array([lo]))[0] == 0:
            break
        lo -= hi - lo
    else:
        raise BracketNotFound("finite-element lower bracket not found")

    nprobe = 63
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        while hi - lo > 1e-12 * max(1.0, abs(lo), abs(hi)):
            probes = np.linspace(lo, hi, nprobe + 2)[1:-1]
            cnts = count_below(probes)
            above = np.nonzero(cnts >= 1)[0]
            if above.size == 0:
                lo = probes[-1]
                continue
            first = above[0]
            if first > 0:
                lo = probes[first - 1]
            hi = probes[first]
    return float(0.5 * (lo + hi))


# --- variational upper bound ------------------------------------------------

def rayleigh(q, bc: RobinBC, y_samples) -> float:
    """Rayleigh quotient of a sampled trial function.

    ``y_samples`` is a sequence of (x, y) pairs on a grid covering [0,1].
    Derivative and potential terms use the piecewise-linear interpolant
    (trapezoidal quadrature for the integrals, exact evaluation at point
    masses), so the value is an upper bound for lambda_1 up to the
    quadrature error of the sampling grid.
    """
    pot = as_potential(q)
    arr = np.asarray(y_samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 2:
        raise ValueError("y_samples must be a sequence of (x, y) pairs")
    order = np.argsort(arr[:, 0])
    xs = arr[order, 0]
    ys = arr[order, 1]
    if abs(xs[0]) > 1e-12 or abs(xs[-1] - 1.0) > 1e-12:
        raise ValueError("samples must cover [0, 1]")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("sample abscissae must be distinct")

    dx = np.diff(xs)
    dy = np.diff(ys)
    num = float(np.sum(dy * dy / dx))
    num += bc.k0sq * ys[0] ** 2 + bc.k1sq * ys[-1] ** 2

    step = pot.step
    pts = np.union1d(xs, step.breakpoints)
    yv = np.interp(pts, xs, ys)
    a = pts[:-1]
    b = pts[1:]
    mids = 0.5 * (a + b)
    sidx = np.clip(
        np.searchsorted(step.breakpoints, mids, side="right") - 1,
        0,
        step.heights.size - 1,
    )
    sval = step.heights[sidx]
    num -= float(np.sum(sval * 0.5 * (yv[:-1] ** 2 + yv[1:] ** 2) * (b - a)))

    for d in pot.deltas:
        num -= d.weight * float(np.interp(d.site, xs, ys)) ** 2

    den = float(np.sum(0.5 * (ys[:-1] ** 2 + ys[1:] ** 2) * dx))
    if den == 0.0:
        raise ZeroFunction("trial function is identically zero")
    return num / den
