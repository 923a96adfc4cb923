import numpy as np
import pytest

from phasesim import (PhaseField, ValidationError, brute_force_sine_bracket,
                      gaussian_state, integrate, make_grid, poisson_bracket,
                      sine_bracket, star_product, weyl_position_kernel,
                      wigner_of_position_kernel, windowed_observable,
                      interior_mask, taper_profile)
from phasesim.duality import inner_product

from conftest import band_limited_field, random_field


@pytest.fixture(scope="module")
def windowed_grid():
    # dense enough that the cutoff's spectral ringing sits below 1e-8
    return make_grid(512, 512, -10, 10, -10, 10)


class TestPoissonBracket:
    def test_canonical_pair(self, windowed_grid):
        g = windowed_grid
        q_field = windowed_observable(g, lambda q, p: q)
        p_field = windowed_observable(g, lambda q, p: p)
        pb = poisson_bracket(q_field, p_field)
        mask = interior_mask(g, 0.8)
        assert np.max(np.abs(pb.values[mask] - 1.0)) <= 1e-8

    def test_self_bracket_zero(self, grid64):
        rng = np.random.default_rng(31)
        f = band_limited_field(grid64, rng)
        assert np.max(np.abs(poisson_bracket(f, f).values)) < 1e-12

    def test_polynomial_oracle(self, windowed_grid):
        # {q^2, p} = 2q on the interior (symbolic differentiation)
        g = windowed_grid
        q2 = windowed_observable(g, lambda q, p: q ** 2)
        p_field = windowed_observable(g, lambda q, p: p)
        pb = poisson_bracket(q2, p_field)
        qq, _ = g.meshgrid()
        mask = interior_mask(g, 0.8)
        assert np.max(np.abs(pb.values[mask] - 2 * qq[mask])) <= 1e-8

    def test_antisymmetry(self, grid64):
        rng = np.random.default_rng(32)
        f = band_limited_field(grid64, rng)
        h = band_limited_field(grid64, rng)
        assert np.max(np.abs(poisson_bracket(f, h).values
                             + poisson_bracket(h, f).values)) < 1e-11


class TestSineBracket:
    def test_cosine_pair_analytic(self):
        g = make_grid(32, 32, -8, 8, -8, 8)
        qq, pp = g.meshgrid()
        a = 2 * np.pi * 2 / g.q_extent
        b = 2 * np.pi * 3 / g.p_extent
        f = PhaseField(g, np.cos(a * qq))
        h = PhaseField(g, np.cos(b * pp))
        for k in (0.5, 1.0, 2.0):
            out = sine_bracket(f, h, k)
            oracle = -np.sin(k * a * b / 2) * np.sin(a * qq) * np.sin(b * pp)
            assert np.max(np.abs(out.values - oracle)) <= 1e-10

    def test_self_and_constant(self, grid16):
        rng = np.random.default_rng(33)
        f = random_field(grid16, rng)
        c = PhaseField(grid16, np.full((16, 16), 3.7))
        assert np.max(np.abs(sine_bracket(f, f, 1.0).values)) <= 1e-12
        assert np.max(np.abs(sine_bracket(f, c, 1.0).values)) <= 1e-12

    def test_antisymmetry(self, grid16):
        rng = np.random.default_rng(34)
        f = random_field(grid16, rng)
        h = random_field(grid16, rng)
        out = sine_bracket(f, h, 1.3).values + sine_bracket(h, f, 1.3).values
        assert np.max(np.abs(out)) <= 1e-12

    def test_conservation(self, grid16):
        rng = np.random.default_rng(35)
        f = random_field(grid16, rng)
        h = random_field(grid16, rng)
        assert abs(integrate(sine_bracket(f, h, 0.8))) <= 1e-10

    def test_skew_adjointness(self, grid16):
        rng = np.random.default_rng(36)
        f = random_field(grid16, rng)
        g = random_field(grid16, rng)
        h = random_field(grid16, rng)
        lhs = inner_product(sine_bracket(f, g, 1.0), h)
        rhs = -inner_product(f, sine_bracket(h, g, 1.0))
        assert abs(lhs - rhs) <= 1e-10

    def test_negative_k_rejected(self, grid16):
        rng = np.random.default_rng(37)
        f = random_field(grid16, rng)
        with pytest.raises(ValidationError):
            sine_bracket(f, f, -1.0)

    def test_classical_limit_order(self, grid64):
        # || (2/k) sine - f Lambda g ||_inf = O(k^2)
        qq, pp = grid64.meshgrid()
        f = PhaseField(grid64, np.exp(-((qq - 1) ** 2 + pp ** 2) / 2))
        g = PhaseField(grid64, np.exp(-(qq ** 2 + (pp - 1) ** 2) / 3))
        flg = -poisson_bracket(f, g).values
        errs = []
        for k in (0.2, 0.1, 0.05):
            dev = (2.0 / k) * sine_bracket(f, g, k).values - flg
            errs.append(np.max(np.abs(dev)))
        assert 3.5 <= errs[0] / errs[1] <= 4.5
        assert 3.5 <= errs[1] / errs[2] <= 4.5

    def test_quadratic_source_is_exact(self):
        # Moyal equals Poisson for a quadratic Hamiltonian, any k
        from phasesim.dynamics import DynamicsKernel, SeparableHamiltonian, \
            generator_apply
        g = make_grid(128, 128, -12, 12, -12, 12)
        sep = SeparableHamiltonian.harmonic(g)
        f = gaussian_state(g, 1.5, 0.0, 1.0, 1.0)
        classical = generator_apply(f, sep, DynamicsKernel.classical())
        mask = interior_mask(g, 0.8)
        for k in (0.5, 1.0, 2.0):
            kern = DynamicsKernel.from_nodes([(k, 2.0 / k)])
            quad = generator_apply(f, sep, kern)
            dev = np.abs(quad.values - classical.values)[mask]
            assert np.max(dev) <= 1e-8


class TestBruteForceOracle:
    def test_matches_fast_path(self, grid16):
        rng = np.random.default_rng(38)
        for k in (0.5, 1.0, 2.0):
            f = random_field(grid16, rng)
            g = random_field(grid16, rng)
            fast = sine_bracket(f, g, k)
            slow = brute_force_sine_bracket(f, g, k)
            assert np.max(np.abs(fast.values - slow.values)) <= 1e-10

    def test_antisymmetry_exact(self, grid16):
        rng = np.random.default_rng(39)
        f = random_field(grid16, rng)
        g = random_field(grid16, rng)
        out = brute_force_sine_bracket(f, g, 1.0).values \
            + brute_force_sine_bracket(g, f, 1.0).values
        assert np.max(np.abs(out)) <= 1e-12

    def test_zero_action(self, grid16):
        rng = np.random.default_rng(40)
        f = random_field(grid16, rng)
        g = random_field(grid16, rng)
        assert np.max(np.abs(brute_force_sine_bracket(f, g, 0.0).values)) == 0.0

    def test_large_grid_rejected(self, grid128):
        f = PhaseField(grid128, np.zeros((128, 128)))
        with pytest.raises(ValidationError):
            brute_force_sine_bracket(f, f, 1.0)


class TestStarProduct:
    def test_zero_action_pointwise(self):
        g = make_grid(64, 64, -8, 8, -8, 8)
        qq, pp = g.meshgrid()
        f = PhaseField(g, np.exp(-(qq ** 2 + pp ** 2) / 2))
        h = PhaseField(g, np.exp(-((qq - 1) ** 2 + (pp + 0.5) ** 2) / 1.5))
        st = star_product(f, h, 0.0)
        assert np.max(np.abs(st - f.values * h.values)) <= 1e-13

    def test_projector_idempotence(self, ho_states):
        # operator side: rho^2 = rho, so W * W = W / h
        w0 = ho_states[0]
        st = star_product(w0, w0, 1.0)
        assert np.max(np.abs(st - w0.values / (2 * np.pi))) <= 1e-8

    def test_operator_side_oracle(self, grid128, ho_states):
        # weyl kernel of the star product equals the matrix product of kernels
        w0, w1 = ho_states[0], ho_states[1]
        mixed = star_product(w0, w1, 1.0)
        a0 = weyl_position_kernel(w0, 1.0)
        a1 = weyl_position_kernel(w1, 1.0)
        matrix_side = (a0 @ a1) * grid128.dq
        back = wigner_of_position_kernel(matrix_side, grid128, 1.0)
        # both represent Wigner{rho0 rho1} / (2 pi hbar)
        assert np.max(np.abs(mixed - back / (2 * np.pi))) <= 1e-8

    def test_imaginary_part_is_sine_bracket(self, grid16):
        rng = np.random.default_rng(41)
        f = band_limited_field(grid16, rng)
        g = band_limited_field(grid16, rng)
        st = star_product(g, f, 0.7)
        sb = sine_bracket(f, g, 0.7)
        assert np.max(np.abs(st.imag - sb.values)) <= 1e-11

    def test_associativity_band_limited(self):
        g = make_grid(64, 64, -8, 8, -8, 8)
        rng = np.random.default_rng(42)
        f1 = band_limited_field(g, rng, keep=0.15)
        f2 = band_limited_field(g, rng, keep=0.15)
        f3 = band_limited_field(g, rng, keep=0.15)
        k = 1.0
        left = star_product(PhaseField(g, star_product(f1, f2, k).real), f3, k) \
            + 1j * star_product(PhaseField(g, star_product(f1, f2, k).imag), f3, k)
        right = star_product(f1, PhaseField(g, star_product(f2, f3, k).real), k) \
            + 1j * star_product(f1, PhaseField(g, star_product(f2, f3, k).imag), k)
        assert np.max(np.abs(left - right)) <= 1e-9


class TestWindows:
    def test_taper_profile_shape(self):
        w = taper_profile(100, 0.1)
        assert w[0] == 0.0
        assert np.all(w[10:90] == 1.0)
        assert np.all(np.diff(w[:10]) > 0)

    def test_interior_mask(self, grid64):
        mask = interior_mask(grid64, 0.8)
        assert mask.sum() == pytest.approx(0.64 * grid64.size, rel=0.1)
        assert not mask[0, :].any() and not mask[:, 0].any()
