import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from sl_extremal import (
    BracketNotFound,
    Potential,
    RobinBC,
    SolverConfig,
    StepPotential,
    ZeroFunction,
    lambda1,
    lambda1_fd,
    lambda1_zero,
    rayleigh,
    refine_common,
    shift,
    theta_end,
)

from conftest import random_step

BC00 = RobinBC(0.0, 0.0)
BC11 = RobinBC(1.0, 1.0)
HIRES = SolverConfig(ode_steps_per_cell=512)


def theta_reference(pot: Potential, bc: RobinBC, lam: float) -> float:
    """Independent phase integration: adaptive high-order ODE solver per cell
    plus the cotangent relation written directly at each point mass."""
    step = pot.step
    cuts = sorted(set(step.breakpoints) | {d.site for d in pot.deltas})
    jumps = {d.site: d.weight for d in pot.deltas}
    theta = math.atan2(1.0, bc.k0sq)

    def apply_jump(th, w):
        k = math.floor(th / math.pi)
        phi = th - k * math.pi
        if math.sin(phi) == 0.0:
            return th
        cot_new = math.cos(phi) / math.sin(phi) - w
        return k * math.pi + math.atan2(1.0, cot_new)

    if 0.0 in jumps:
        theta = apply_jump(theta, jumps[0.0])
    for a, b in zip(cuts[:-1], cuts[1:]):
        c = lam + step.value_at(0.5 * (a + b))
        sol = solve_ivp(
            lambda x, th: math.cos(th[0]) ** 2 + c * math.sin(th[0]) ** 2,
            (a, b),
            [theta],
            rtol=1e-12,
            atol=1e-12,
            method="DOP853",
        )
        theta = float(sol.y[0, -1])
        if b in jumps:
            theta = apply_jump(theta, jumps[b])
    return theta


class TestThetaEnd:
    def test_stationary_at_neumann_zero(self):
        assert theta_end(StepPotential.constant(0.0), BC00, 0.0) == pytest.approx(
            math.pi / 2, abs=1e-12
        )

    def test_second_neumann_eigenvalue_boundary_angle(self):
        got = theta_end(StepPotential.constant(0.0), BC00, math.pi**2, HIRES)
        ref = theta_reference(
            Potential.from_step(StepPotential.constant(0.0)), BC00, math.pi**2
        )
        assert ref == pytest.approx(1.5 * math.pi, abs=1e-9)
        assert got == pytest.approx(ref, abs=1e-7)

    def test_delta_jump_closed_form(self):
        # theta sits at pi/2 until x = 1/2, jumps to 3pi/4, then follows
        # theta' = cos^2: tan theta(1) = tan(3pi/4) + 1/2
        pot = Potential.pure_delta(0.5, 1.0)
        expected = math.pi - math.atan(0.5)
        assert theta_end(pot, BC00, 0.0, HIRES) == pytest.approx(expected, abs=1e-10)
        assert theta_reference(pot, BC00, 0.0) == pytest.approx(expected, abs=1e-10)

    def test_matches_reference_on_random_potentials(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            q = random_step(rng, max_height=20.0, max_cells=5)
            pot = Potential(q, [(0.37, 1.5)])
            lam = float(rng.uniform(-20.0, 10.0))
            assert theta_end(pot, BC11, lam, HIRES) == pytest.approx(
                theta_reference(pot, BC11, lam), abs=1e-6
            )

    def test_strictly_increasing_in_lambda(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            q = random_step(rng, max_height=30.0, max_cells=6)
            la, lb = sorted(rng.uniform(-40.0, 15.0, size=2))
            if la == lb:
                continue
            assert theta_end(q, BC11, la) < theta_end(q, BC11, lb)

    def test_start_angle_range(self):
        assert RobinBC(0.0, 0.0).theta_start == pytest.approx(math.pi / 2)
        assert RobinBC(1e9, 0.0).theta_start < 1e-8
        assert RobinBC(0.0, 0.0).theta_target == pytest.approx(math.pi / 2)


class TestLambda1Zero:
    def test_neumann_is_exactly_zero(self):
        assert lambda1_zero(BC00) == 0.0

    def test_one_sided_robin_against_root_finder(self):
        # characteristic equation reduces to tan(w) = 1/w
        w = brentq(lambda t: t * math.sin(t) - math.cos(t), 0.1, math.pi / 2 - 1e-12,
                   xtol=1e-15)
        assert lambda1_zero(RobinBC(1.0, 0.0)) == pytest.approx(w * w, abs=1e-12)

    def test_symmetric_robin_against_root_finder(self):
        w = brentq(lambda t: math.sin(t) * (t * t - 1.0) - 2.0 * t * math.cos(t),
                   1e-9, math.pi - 1e-9, xtol=1e-15)
        assert lambda1_zero(BC11) == pytest.approx(w * w, abs=1e-12)

    def test_agrees_with_shooting(self):
        for bc in (BC00, RobinBC(1, 0), BC11, RobinBC(4, 9)):
            got = lambda1(StepPotential.constant(0.0), bc, HIRES).lambda1
            assert got == pytest.approx(lambda1_zero(bc), abs=1e-8)

    def test_below_dirichlet_value(self):
        for bc in (RobinBC(0.5, 2.0), RobinBC(10, 10), RobinBC(100, 3)):
            assert 0.0 < lambda1_zero(bc) < math.pi**2


class TestLambda1:
    def test_neumann_zero_potential(self):
        res = lambda1(StepPotential.constant(0.0), BC00)
        assert abs(res.lambda1) <= 1e-10
        assert res.residual <= 1e-10
        assert res.bracket[0] <= res.lambda1 <= res.bracket[1]

    def test_constant_potential_is_a_pure_shift(self):
        for c in (0.5, 5.0, 40.0):
            res = lambda1(StepPotential.constant(c), BC11, HIRES)
            assert res.lambda1 == pytest.approx(lambda1_zero(BC11) - c, abs=1e-8)

    def test_spectral_shift_identity(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            q = random_step(rng, max_height=30.0)
            base = lambda1(q, BC11).lambda1
            for c in (1.0, 10.0):
                shifted = lambda1(shift(q, c), BC11).lambda1
                assert shifted == pytest.approx(base - c, abs=1e-8)

    def test_monotone_in_the_potential(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            q1 = random_step(rng, max_height=20.0)
            bump = random_step(rng, max_height=3.0, min_height=0.3)
            r1, rb = refine_common(q1, bump)
            q2 = StepPotential(r1.breakpoints, r1.heights + rb.heights)
            assert lambda1(q2, BC11).lambda1 <= lambda1(q1, BC11).lambda1 + 1e-8

    def test_extra_delta_weight_lowers_lambda(self):
        q = StepPotential.constant(1.0)
        small = Potential(q, [(0.4, 0.5)])
        large = Potential(q, [(0.4, 1.5)])
        assert lambda1(large, BC11).lambda1 < lambda1(small, BC11).lambda1

    def test_bracket_not_found_when_expansion_capped(self):
        cfg = SolverConfig(max_bracket_expansions=3)
        with pytest.raises(BracketNotFound):
            lambda1(StepPotential.constant(500.0), BC00, cfg)

    def test_bracket_hint_converges_to_same_value(self):
        q = StepPotential.from_uniform_cells([3.0, 0.5, 7.0, 1.0])
        plain = lambda1(q, BC11).lambda1
        hinted = lambda1(q, BC11, bracket_hint=(plain - 0.5, plain + 0.5)).lambda1
        assert hinted == pytest.approx(plain, abs=1e-11)
        # a hint that misses the eigenvalue must recover by expansion
        far = lambda1(q, BC11, bracket_hint=(50.0, 51.0)).lambda1
        assert far == pytest.approx(plain, abs=1e-9)

    def test_result_serialization(self):
        res = lambda1(StepPotential.constant(2.0), BC11, eigenfunction_samples=16)
        data = res.to_dict()
        assert set(data) == {
            "lambda1", "residual", "bracket", "iterations", "eigenfunction_samples"
        }
        assert len(data["eigenfunction_samples"]) == 17
        assert res.to_dict(include_samples=False).get("eigenfunction_samples") is None


class TestEigenfunction:
    def test_samples_cover_grid_and_are_normalized(self):
        res = lambda1(StepPotential.constant(1.0), BC11, eigenfunction_samples=64)
        xs = [x for x, _ in res.eigenfunction_samples]
        ys = [y for _, y in res.eigenfunction_samples]
        assert xs[0] == 0.0 and xs[-1] == 1.0 and len(xs) == 65
        assert max(abs(y) for y in ys) == pytest.approx(1.0, abs=1e-12)
        assert all(y > 0 for y in ys)  # ground state has no interior zeros

    def test_neumann_zero_potential_eigenfunction_is_constant(self):
        res = lambda1(StepPotential.constant(0.0), BC00, eigenfunction_samples=16)
        ys = np.array([y for _, y in res.eigenfunction_samples])
        assert np.allclose(ys, 1.0, atol=1e-9)

    def test_delta_kink_is_where_the_mass_sits(self):
        pot = Potential.pure_delta(0.5, 3.0)
        res = lambda1(pot, BC00, HIRES, eigenfunction_samples=256)
        xs = np.array([x for x, _ in res.eigenfunction_samples])
        ys = np.array([y for _, y in res.eigenfunction_samples])
        slopes = np.diff(ys) / np.diff(xs)
        kink = np.argmax(np.abs(np.diff(slopes)))
        assert abs(xs[kink + 1] - 0.5) < 0.01


class TestFiniteElementOracle:
    def test_zero_potential_neumann(self):
        assert abs(lambda1_fd(StepPotential.constant(0.0), BC00, 64)) <= 1e-10

    def test_constant_one_is_an_exact_shift(self):
        assert lambda1_fd(StepPotential.constant(1.0), BC00, 64) == pytest.approx(
            -1.0, abs=1e-10
        )

    def test_cross_validates_shooting(self):
        rng = np.random.default_rng(9)
        q = random_step(rng, max_height=50.0)
        bc = RobinBC(1.0, 4.0)
        assert lambda1_fd(q, bc, 4096) == pytest.approx(
            lambda1(q, bc).lambda1, abs=1e-4
        )

    def test_snapped_delta_close_to_shooting(self):
        pot = Potential(StepPotential.constant(1.0), [(0.3333, 2.0)])
        fd = lambda1_fd(pot, BC11, 4096)
        sh = lambda1(pot, BC11).lambda1
        assert fd == pytest.approx(sh, abs=5e-3)

    def test_minimum_resolution_enforced(self):
        with pytest.raises(ValueError):
            lambda1_fd(StepPotential.constant(0.0), BC00, 16)


class TestRayleigh:
    def test_constant_trial_zero_potential(self):
        samples = [(x, 1.0) for x in np.linspace(0, 1, 9)]
        assert rayleigh(StepPotential.constant(0.0), BC00, samples) == pytest.approx(0.0, abs=1e-14)

    def test_constant_trial_constant_potential(self):
        samples = [(x, 1.0) for x in np.linspace(0, 1, 9)]
        for c in (0.5, 3.0):
            assert rayleigh(StepPotential.constant(c), BC00, samples) == pytest.approx(
                -c, abs=1e-12
            )

    def test_eigenfunction_gives_back_lambda1(self):
        rng = np.random.default_rng(10)
        q = random_step(rng, max_height=10.0, max_cells=4)
        res = lambda1(q, BC11, eigenfunction_samples=4096)
        quot = rayleigh(q, BC11, res.eigenfunction_samples)
        assert quot == pytest.approx(res.lambda1, abs=1e-3)

    def test_upper_bound_property(self):
        rng = np.random.default_rng(14)
        q = random_step(rng, max_height=10.0, max_cells=4)
        lam = lambda1(q, BC11).lambda1
        xs = np.linspace(0, 1, 513)
        for freq in (0.5, 1.0, 2.0):
            trial = list(zip(xs, np.cos(freq * xs) + 1.2))
            assert rayleigh(q, BC11, trial) >= lam - 1e-3

    def test_zero_function_rejected(self):
        samples = [(x, 0.0) for x in np.linspace(0, 1, 9)]
        with pytest.raises(ZeroFunction):
            rayleigh(StepPotential.constant(0.0), BC00, samples)

    def test_delta_term_enters_exactly(self):
        pot = Potential(StepPotential.constant(0.0), [(0.5, 2.0)])
        samples = [(x, 1.0) for x in np.linspace(0, 1, 9)]
        assert rayleigh(pot, BC00, samples) == pytest.approx(-2.0, abs=1e-12)


class TestConfigValidation:
    def test_step_floor(self):
        with pytest.raises(ValueError):
            SolverConfig(ode_steps_per_cell=8)

    def test_bc_validation(self):
        with pytest.raises(ValueError):
            RobinBC(-1.0, 0.0)
        with pytest.raises(ValueError):
            RobinBC(0.0, math.nan)
