"""Hamiltonian as an observable: assembly from generalized eigenstates,
energy expectations, and the eps / E / V bookkeeping.

H = sum_i E_i V_i g_i over the discrete spectrum, plus sum_mu E_mu dV_mu g_mu
for continuously labelled families (classical ring states carry the measure
dV = 2*pi*dI0 of the action label).
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .duality import inner_product
from .dynamics import EigenstateEntry, EigenstateSet
from .errors import ValidationError
from .grid import PhaseField, PhaseGrid
from .states import ho_wavefunction, ho_wigner_closed_form, ring_state, \
    wigner_of_wavefunction

ContinuumEntry = tuple[PhaseField, float, float]      # (g_mu, E_mu, dV_mu)


def eigenvalue_from_coefficient(eps: float, volume: float) -> float:
    """E = eps / V; the dynamical coefficient divided by the state volume."""
    if volume <= 0:
        raise ValidationError("state volume must be positive")
    return eps / volume


def assemble_hamiltonian(eigenstates: EigenstateSet | None = None,
                         continuum: Sequence[ContinuumEntry] | None = None
                         ) -> PhaseField:
    """Energy observable from discrete and/or continuum eigenstate data."""
    if eigenstates is None and not continuum:
        raise ValidationError("no eigenstates to assemble from")
    grid: PhaseGrid | None = None
    vals = None
    if eigenstates is not None:
        grid = eigenstates.grid
        vals = np.zeros((grid.nq, grid.np_))
        for e in eigenstates.entries:
            vals += e.energy * e.volume * e.g.values
    if continuum:
        for g, energy, dv in continuum:
            if grid is None:
                grid = g.grid
                vals = np.zeros((grid.nq, grid.np_))
            elif not g.grid.same_as(grid):
                raise ValidationError("continuum entries on mismatched grids")
            vals += energy * dv * g.values
    return PhaseField(grid, vals, role="observable")


def energy_expectation(h: PhaseField, f: PhaseField) -> float:
    """<E> = integral H f dq dp."""
    return inner_product(h, f)


def ho_eigenstate_set(grid: PhaseGrid, n_max: int, hbar: float,
                      mass: float = 1.0, omega: float = 1.0,
                      closed_form: bool = False) -> EigenstateSet:
    """Oscillator eigenstates W_0..W_n_max with E_n = hbar*omega*(n + 1/2).

    All pure-state volumes are the exact 2*pi*hbar.  closed_form=True
    samples the Laguerre expressions instead of Wigner-transforming the
    wavefunctions (useful on grids too coarse for the transform).
    """
    if n_max < 0:
        raise ValidationError("n_max must be nonnegative")
    entries = []
    for n in range(n_max + 1):
        if closed_form:
            w = ho_wigner_closed_form(n, grid, hbar, mass, omega)
            from .grid import integrate
            w = PhaseField(grid, w.values / integrate(w), role="density")
        else:
            w = wigner_of_wavefunction(ho_wavefunction(n, grid, hbar, mass, omega))
        entries.append(EigenstateEntry(w, hbar * omega * (n + 0.5),
                                       2.0 * np.pi * hbar))
    return EigenstateSet(entries)


def classical_ring_family(grid: PhaseGrid, h0: PhaseField,
                          i0_values: np.ndarray,
                          energy_of_action: Callable[[float], float],
                          width: float) -> list[ContinuumEntry]:
    """Regularized ring states over a uniform action mesh.

    Each entry carries the volume measure dV = 2*pi*dI0 of its mesh cell, so
    assemble_hamiltonian turns the family into the Riemann sum approximating
    the continuum spectrum integral.
    """
    i0 = np.asarray(i0_values, dtype=float)
    if i0.size < 2:
        raise ValidationError("ring family needs at least two mesh points")
    steps = np.diff(i0)
    if np.any(steps <= 0) or np.max(np.abs(steps - steps[0])) > 1e-9 * steps[0]:
        raise ValidationError("action mesh must be uniform and increasing")
    dv = 2.0 * np.pi * steps[0]
    out: list[ContinuumEntry] = []
    for i0_m in i0:
        energy = float(energy_of_action(i0_m))
        ring = ring_state(grid, energy, width, h0)
        out.append((ring, energy, dv))
    return out
