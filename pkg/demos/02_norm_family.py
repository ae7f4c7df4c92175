#!/usr/bin/env python3
"""The extended L^p norm family and the constraint set A_gamma.

For a step function the norm (int |y|^p)^(1/p) is a finite sum for every
real p; the p = 0 member is the geometric mean exp(int ln|y|) and the family
is nondecreasing in p.  Potentials are placed on the constraint manifold
int q^gamma = 1 by a single exact rescaling.
"""

import numpy as np

from sl_extremal import StepPotential, normalize_gamma, pnorm

y = StepPotential([0.0, 0.25, 0.6, 1.0], [4.0, 0.5, 1.5])

print("== the norm family of a fixed step function ==")
for p in (-3.0, -1.0, -0.1, 0.0, 0.1, 0.5, 1.0, 2.0, 3.0):
    print(f"  p = {p:+.1f}: {pnorm(y, p):.10f}")
print("values increase with p; p -> 0 approaches the geometric mean smoothly:")
for eps in (1e-2, 1e-4, 1e-6):
    print(f"  p = {eps:.0e}: {pnorm(y, eps):.12f}  (p = 0: {pnorm(y, 0.0):.12f})")

print("\n== normalizing onto A_gamma ==")
for gamma in (-1.0, 0.5, 2.0):
    q, kappa = normalize_gamma(y, gamma)
    print(f"  gamma = {gamma:+.1f}: kappa = {kappa:.8f}, "
          f"check int q^gamma = {pnorm(q, gamma):.15f}")

print("\n== zero cells are fine for p > 0 and rejected for p <= 0 ==")
spiky = StepPotential([0.0, 0.25, 0.5, 1.0], [0.0, 4.0, 0.0])
print(f"  ||spike||_(1/2) = {pnorm(spiky, 0.5)}  (closed form: 4^(-1) = 0.25)")
try:
    pnorm(spiky, -1.0)
except ValueError as exc:
    print(f"  p = -1 raises: {exc}")

rng = np.random.default_rng(0)
print("\n== monotonicity spot check on random positive steps ==")
violations = 0
for _ in range(500):
    k = int(rng.integers(2, 8))
    yy = StepPotential(np.concatenate(([0.0], np.sort(rng.uniform(0.1, 0.9, k - 1)), [1.0])),
                       rng.uniform(0.2, 5.0, k))
    p, r = sorted(rng.uniform(-3, 3, 2))
    if pnorm(yy, p) > pnorm(yy, r) * (1 + 1e-12):
        violations += 1
print(f"  violations in 500 draws: {violations}")
