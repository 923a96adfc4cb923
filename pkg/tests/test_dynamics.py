import numpy as np
import pytest

from phasesim import (DynamicsKernel, EigenstateEntry, EigenstateSet,
                      InstabilityError, PhaseField, SeparableHamiltonian,
                      ValidationError, assemble_liouvillian, evolve,
                      gaussian_state, generator_apply, ho_wigner_closed_form,
                      integrate, j_condition_checks, make_grid, ring_state,
                      stationarity_residual)
from phasesim.duality import inner_product

QUANTUM = DynamicsKernel.quantum(1.0)
CLASSICAL = DynamicsKernel.classical()


@pytest.fixture(scope="module")
def ho_set_128(grid128, ho_states):
    return EigenstateSet([EigenstateEntry(w, n + 0.5, 2 * np.pi)
                          for n, w in enumerate(ho_states[:6])])


@pytest.fixture(scope="module")
def grid32():
    return make_grid(32, 32, -8, 8, -8, 8)


@pytest.fixture(scope="module")
def ho_set_32(grid32):
    entries = []
    for n in range(4):
        w = ho_wigner_closed_form(n, grid32, 1.0)
        w = PhaseField(grid32, w.values / integrate(w), role="density")
        entries.append(EigenstateEntry(w, n + 0.5, 2 * np.pi))
    with pytest.warns(UserWarning):
        # coarse sampling shifts the measured volumes; declared h is kept
        return EigenstateSet(entries)


class TestKernels:
    def test_quantum_preset(self):
        k = DynamicsKernel.quantum(0.5)
        assert k.nodes == ((0.5, 4.0),)

    def test_validation(self):
        with pytest.raises(ValidationError):
            DynamicsKernel.from_nodes([(1.0, 1.0), (1.0, 2.0)])
        with pytest.raises(ValidationError):
            DynamicsKernel.from_nodes([(-1.0, 1.0)])
        with pytest.raises(ValidationError):
            DynamicsKernel.from_nodes([])
        with pytest.raises(ValidationError):
            DynamicsKernel("quadrature")

    def test_gauss_legendre_integrates_kernel(self):
        # nodes integrate smooth functions of k against the kernel density
        kern = DynamicsKernel.gauss_legendre(lambda k: k ** 2, 0.5, 2.0, 12)
        total = sum(w * k for k, w in kern.nodes)        # integral k^3 dk
        assert total == pytest.approx((2.0 ** 4 - 0.5 ** 4) / 4.0, rel=1e-12)


class TestEigenstateSet:
    def test_rejects_unnormalized(self, grid128, ho_states):
        bad = PhaseField(grid128, ho_states[0].values * 2.0, "density")
        with pytest.raises(ValidationError):
            EigenstateSet([EigenstateEntry(bad, 0.5, 2 * np.pi)])

    def test_warns_on_volume_mismatch(self, ho_states):
        with pytest.warns(UserWarning):
            EigenstateSet([EigenstateEntry(ho_states[0], 0.5, 7.0)])

    def test_rejects_empty(self):
        with pytest.raises(ValidationError):
            EigenstateSet([])

    def test_combined_field(self, ho_set_128):
        combined = ho_set_128.combined_field()
        oracle = sum(e.energy * e.volume * e.g.values
                     for e in ho_set_128.entries)
        assert np.max(np.abs(combined.values - oracle)) < 1e-12


class TestGeneratorApply:
    def test_quadratic_interior_matches_classical(self):
        grid = make_grid(128, 128, -12, 12, -12, 12)
        sep = SeparableHamiltonian.harmonic(grid)
        f = gaussian_state(grid, 2.0, 0.0, 2 ** -0.5, 2 ** -0.5)
        from phasesim import interior_mask
        quantum = generator_apply(f, sep, QUANTUM)
        classical = generator_apply(f, sep, CLASSICAL)
        mask = interior_mask(grid, 0.8)
        assert np.max(np.abs(quantum.values - classical.values)[mask]) <= 1e-8

    def test_eigenstate_stationarity(self, ho_set_128):
        for entry in ho_set_128.entries[:4]:
            res = stationarity_residual(entry.g, ho_set_128, QUANTUM)
            assert res <= 1e-6

    def test_rotation_invariant_state_classical(self, grid128, ho_states):
        sep = SeparableHamiltonian.harmonic(grid128)
        rate = generator_apply(ho_states[0], sep, CLASSICAL)
        assert np.max(np.abs(rate.values)) <= 1e-10

    def test_integral_conserved(self, grid64):
        sep = SeparableHamiltonian.quartic(grid64)
        f = gaussian_state(grid64, 1.0, 0.5, 1.0, 1.0)
        for kern in (QUANTUM, CLASSICAL):
            assert abs(integrate(generator_apply(f, sep, kern))) <= 1e-10

    def test_kernel_linearity(self, grid64):
        sep = SeparableHamiltonian.quartic(grid64)
        f = gaussian_state(grid64, 1.0, 0.0, 1.0, 1.0)
        k1 = DynamicsKernel.from_nodes([(1.0, 0.7)])
        k2 = DynamicsKernel.from_nodes([(0.5, 1.1)])
        both = DynamicsKernel.from_nodes([(1.0, 0.7), (0.5, 1.1)])
        lhs = generator_apply(f, sep, both).values
        rhs = generator_apply(f, sep, k1).values + generator_apply(f, sep, k2).values
        assert np.max(np.abs(lhs - rhs)) <= 1e-12

    def test_grid_mismatch(self, grid64, grid128, ho_states):
        sep = SeparableHamiltonian.harmonic(grid64)
        with pytest.raises(ValidationError):
            generator_apply(ho_states[0], sep, QUANTUM)

    def test_displaced_gaussian_not_stationary(self, grid128, ho_set_128):
        moved = gaussian_state(grid128, 2.0, 0.0, 2 ** -0.5, 2 ** -0.5)
        assert stationarity_residual(moved, ho_set_128, QUANTUM) >= 1e-2

    def test_ring_state_classical_stationary(self):
        grid = make_grid(192, 192, -8, 8, -8, 8)
        qq, pp = grid.meshgrid()
        h0 = PhaseField(grid, (qq ** 2 + pp ** 2) / 2)
        ring = ring_state(grid, 2.0, 0.5, h0)
        sep = SeparableHamiltonian.harmonic(grid)
        assert stationarity_residual(ring, sep, CLASSICAL) <= 1e-6


class TestLiouvillian:
    def test_zero_source_zero_matrix(self, grid32):
        zero = PhaseField(grid32, np.zeros((32, 32)))
        op = assemble_liouvillian(zero, QUANTUM, grid32, probe_check=False)
        assert np.max(np.abs(op.matrix)) == 0.0

    def test_probe_consistency_runs(self, ho_set_32, grid32):
        # assembly itself validates 10 random probes at 1e-10
        assemble_liouvillian(ho_set_32, QUANTUM, grid32)

    @pytest.mark.parametrize("kernel", [
        QUANTUM, CLASSICAL, DynamicsKernel.from_nodes([(1.0, 1.0), (0.5, 2.0)])
    ], ids=["quantum", "classical", "two-node"])
    def test_antisymmetry(self, ho_set_32, grid32, kernel):
        op = assemble_liouvillian(ho_set_32, kernel, grid32)
        defect, scale = op.antisymmetry_defect()
        assert defect <= 1e-10 * scale

    def test_separable_source_assembly(self, grid32):
        sep = SeparableHamiltonian.harmonic(grid32)
        op = assemble_liouvillian(sep, QUANTUM, grid32)
        defect, scale = op.antisymmetry_defect()
        assert defect <= 1e-10 * scale
        f = gaussian_state(grid32, 1.0, 0.0, 1.0, 1.0)
        direct = generator_apply(f, sep, QUANTUM)
        via = op.apply(f)
        assert np.max(np.abs(direct.values - via.values)) <= 1e-10

    def test_size_cap(self, grid128, ho_states):
        with pytest.raises(ValidationError):
            assemble_liouvillian(ho_states[0], QUANTUM, grid128)


class TestJConditions:
    def test_sine_antisymmetry_residual(self, ho_set_32, grid32):
        op = assemble_liouvillian(ho_set_32, QUANTUM, grid32)
        checks = j_condition_checks(op)
        assert checks["antisymmetry"] <= 1e-10 * checks["max_j"]

    def test_cosine_control_breaks_antisymmetry(self, ho_set_32, grid32):
        op = assemble_liouvillian(ho_set_32, QUANTUM, grid32,
                                  bracket="cosine-control", probe_check=False)
        checks = j_condition_checks(op)
        assert checks["antisymmetry"] > 0.1 * checks["max_j"]

    def test_zero_source_all_zero(self, grid32):
        zero = PhaseField(grid32, np.zeros((32, 32)))
        op = assemble_liouvillian(zero, QUANTUM, grid32, probe_check=False)
        checks = j_condition_checks(op)
        assert checks["antisymmetry"] == 0.0
        assert checks["oddness"] == 0.0
        assert checks["translation_periodicity"] == 0.0


class TestEvolve:
    def test_zero_source_identity(self, grid32):
        zero = PhaseField(grid32, np.zeros((32, 32)))
        f0 = gaussian_state(grid32, 1.0, 0.0, 1.0, 1.0)
        traj = evolve(f0, zero, QUANTUM, 0.1, 0.01, snapshot_stride=5)
        for snap in traj.fields:
            assert np.array_equal(snap.values, f0.values)

    def test_classical_rotation_oracle(self, grid128):
        # method of characteristics: clockwise rigid rotation
        sep = SeparableHamiltonian.harmonic(grid128)
        f0 = gaussian_state(grid128, 2.0, 0.0, 2 ** -0.5, 2 ** -0.5)
        traj = evolve(f0, sep, CLASSICAL, np.pi / 2, 1e-3, snapshot_stride=500)
        final = traj.fields[-1]
        qq, pp = grid128.meshgrid()
        cq = integrate(PhaseField(grid128, final.values * qq))
        cp = integrate(PhaseField(grid128, final.values * pp))
        assert abs(cq - 0.0) <= grid128.dq
        assert abs(cp - (-2.0)) <= grid128.dp
        rotated = gaussian_state(grid128, 0.0, -2.0, 2 ** -0.5, 2 ** -0.5)
        l2 = np.sqrt(grid128.cell_area
                     * np.sum((final.values - rotated.values) ** 2))
        assert l2 <= 1e-3

    def test_inner_product_conserved(self, grid64):
        sep = SeparableHamiltonian.quartic(grid64)
        f1 = gaussian_state(grid64, 1.5, 0.0, 0.9, 0.9)
        f2 = gaussian_state(grid64, -1.0, 0.5, 1.1, 0.8)
        base = inner_product(f1, f2)
        t1 = evolve(f1, sep, QUANTUM, 0.5, 1e-3, snapshot_stride=500)
        t2 = evolve(f2, sep, QUANTUM, 0.5, 1e-3, snapshot_stride=500)
        drift = abs(inner_product(t1.fields[-1], t2.fields[-1]) - base)
        assert drift <= 1e-6

    def test_norm_conserved(self, grid64):
        sep = SeparableHamiltonian.quartic(grid64)
        f0 = gaussian_state(grid64, 1.5, 0.0, 0.9, 0.9)
        traj = evolve(f0, sep, QUANTUM, 0.5, 1e-3, snapshot_stride=100)
        for snap in traj.fields:
            assert abs(integrate(snap) - 1.0) <= 1e-6

    def test_exact_matches_rk4(self, grid32):
        sep = SeparableHamiltonian.harmonic(grid32)
        f0 = gaussian_state(grid32, 1.0, 0.5, 1.0, 1.0)
        rk = evolve(f0, sep, QUANTUM, 1.0, 1e-4, snapshot_stride=10000)
        ex = evolve(f0, sep, QUANTUM, 1.0, 0.5, integrator="exact",
                    snapshot_stride=2)
        l2 = np.sqrt(grid32.cell_area * np.sum(
            (rk.fields[-1].values - ex.fields[-1].values) ** 2))
        assert l2 <= 1e-6

    def test_instability_detected(self, grid32):
        sep = SeparableHamiltonian.harmonic(grid32)
        f0 = gaussian_state(grid32, 1.0, 0.0, 1.0, 1.0)
        with pytest.raises(InstabilityError):
            evolve(f0, sep, QUANTUM, 40.0, 0.5)

    def test_time_grid_validation(self, grid32):
        sep = SeparableHamiltonian.harmonic(grid32)
        f0 = gaussian_state(grid32, 1.0, 0.0, 1.0, 1.0)
        with pytest.raises(ValidationError):
            evolve(f0, sep, QUANTUM, 1.0, -0.1)
        with pytest.raises(ValidationError):
            evolve(f0, sep, QUANTUM, 1.0, 0.1, integrator="verlet")
        with pytest.raises(ValidationError):
            evolve(f0, sep, QUANTUM, 0.004, 0.01)    # below half a step
