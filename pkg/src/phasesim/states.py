"""Constructors of physical fields: Wigner transforms, oscillator eigenstates,
Gaussian/coherent states, classical ring states, and mixtures.

The Wigner transform of a wavefunction follows

    W(q, p) = (1/2*pi*hbar) * integral dx e^{i p x / hbar} psi(q - x/2) psi*(q + x/2)

evaluated per q-column as a correlation on an auxiliary x-grid of spacing
2*dq (so the half-shifts land on grid points), followed by explicit Fourier
quadrature onto the target p-axis.  The quadrature is exact for states that
decay on the grid, for any p-axis below the x-sampling Nyquist bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .grid import PhaseField, PhaseGrid, integrate, require_same_grid

WAVEFUNCTION_NORM_TOL = 1e-10
# Loose enough to admit every oscillator state the dense acceptance grids
# carry (n = 3 on a +-8 extent has a true edge amplitude near 4e-11).
TAIL_AMPLITUDE_TOL = 1e-9


@dataclass(frozen=True)
class Wavefunction:
    """Complex amplitudes on the q-axis of a phase grid."""

    grid: PhaseGrid
    values: np.ndarray = field(repr=False)
    hbar: float = 1.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.nq,):
            raise ValidationError(
                f"wavefunction needs {self.grid.nq} amplitudes, got {vals.shape}")
        if self.hbar <= 0:
            raise ValidationError("hbar must be positive")
        norm = float(np.sum(np.abs(vals) ** 2) * self.grid.dq)
        if abs(norm - 1.0) > WAVEFUNCTION_NORM_TOL:
            raise ValidationError(
                f"wavefunction norm {norm} deviates from 1 beyond tolerance")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


def _hermite_functions(xi: np.ndarray, n_max: int) -> np.ndarray:
    """Normalized Hermite functions phi_0..phi_n_max by stable recurrence."""
    out = np.empty((n_max + 1, xi.size))
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * xi ** 2)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * xi * out[0]
    for n in range(2, n_max + 1):
        out[n] = np.sqrt(2.0 / n) * xi * out[n - 1] - np.sqrt((n - 1) / n) * out[n - 2]
    return out


def ho_wavefunction(n: int, grid: PhaseGrid, hbar: float,
                    mass: float = 1.0, omega: float = 1.0,
                    tail_tol: float = TAIL_AMPLITUDE_TOL) -> Wavefunction:
    """n-th harmonic-oscillator eigenfunction, checked to decay on the grid."""
    if n < 0:
        raise ValidationError("quantum number n must be nonnegative")
    if hbar <= 0 or mass <= 0 or omega <= 0:
        raise ValidationError("hbar, mass, omega must be positive")
    q = grid.q_values()
    xi = q * np.sqrt(mass * omega / hbar)
    phi = _hermite_functions(xi, n)[n] * (mass * omega / hbar) ** 0.25
    tail = max(np.max(np.abs(phi[:2])), np.max(np.abs(phi[-2:])))
    if tail > tail_tol:
        raise ValidationError(
            f"oscillator state n={n} does not decay on the grid "
            f"(tail amplitude {tail:.2e})")
    norm = np.sqrt(np.sum(phi ** 2) * grid.dq)
    return Wavefunction(grid, phi / norm, hbar)


def _wigner_quadrature(correlation: np.ndarray, grid: PhaseGrid,
                       hbar: float) -> np.ndarray:
    """Fourier quadrature of C(q, x) over x onto the grid's p-axis."""
    nq = grid.nq
    dx = 2.0 * grid.dq
    shifts = np.arange(nq) - nq // 2           # x_m = 2 * dq * shift
    x = dx * shifts
    p = grid.p_values()
    if np.max(np.abs(p)) / hbar >= np.pi / dx:
        raise ValidationError(
            "p-axis exceeds the Nyquist bound pi*hbar/(2*dq) of the "
            "Wigner quadrature; refine the q-axis or shrink the p-extent")
    kernel = np.exp(1j * np.outer(x, p) / hbar) * (dx / (2.0 * np.pi * hbar))
    return correlation @ kernel


def _correlation_of_kernel(matrix: np.ndarray, nq: int) -> np.ndarray:
    """C[i, m] = A[i - s_m, i + s_m], zero where a shift leaves the grid.

    Zero extension (not wrap-around) is correct for decaying states; the
    tail check on construction keeps the truncation below 1e-24.
    """
    shifts = np.arange(nq) - nq // 2
    idx = np.arange(nq)
    minus = idx[:, None] - shifts[None, :]
    plus = idx[:, None] + shifts[None, :]
    valid = (minus >= 0) & (minus < nq) & (plus >= 0) & (plus < nq)
    out = np.zeros((nq, nq), dtype=matrix.dtype)
    out[valid] = matrix[minus[valid], plus[valid]]
    return out


def wigner_of_wavefunction(psi: Wavefunction) -> PhaseField:
    """Quasi-probability density of a pure state; integrates to 1."""
    grid = psi.grid
    rho = np.outer(psi.values, np.conj(psi.values))
    corr = _correlation_of_kernel(rho, grid.nq)
    w = _wigner_quadrature(corr, grid, psi.hbar)
    residue = np.max(np.abs(w.imag))
    if residue > 1e-10:
        raise ValidationError(f"Wigner transform imaginary residue {residue:.2e}")
    out = PhaseField(grid, w.real, role="density")
    total = integrate(out)
    if abs(total - 1.0) > 1e-8:
        raise ValidationError(f"Wigner function integrates to {total}, not 1")
    return out


def wigner_of_position_kernel(matrix: np.ndarray, grid: PhaseGrid,
                              hbar: float) -> np.ndarray:
    """Phase-space function of an operator given by its position kernel.

    Inverse of weyl_position_kernel; returns the (possibly complex) samples.
    """
    a = np.asarray(matrix, dtype=complex)
    if a.shape != (grid.nq, grid.nq):
        raise ValidationError("position kernel must be nq x nq")
    corr = _correlation_of_kernel(a, grid.nq)
    return _wigner_quadrature(corr, grid, hbar)


def weyl_position_kernel(f: PhaseField, hbar: float) -> np.ndarray:
    """Position kernel A(x, x') = integral f((x+x')/2, p) e^{i p (x-x')/hbar} dp.

    For f the Wigner function of a density operator this returns the position
    matrix <x|rho|x'> directly (the 2*pi*hbar factors cancel).  Hermitian for
    real f.  Midpoints between grid nodes are reached by exact band-limited
    interpolation of f along q (zero-padded modes).
    """
    grid = f.grid
    nq = grid.nq
    if hbar <= 0:
        raise ValidationError("hbar must be positive")
    # f on the doubled q-axis (spacing dq/2), p-axis untouched
    modes = np.fft.fft(f.values, axis=0)
    pad = np.zeros((2 * nq, grid.np_), dtype=complex)
    half = nq // 2
    pad[:half, :] = modes[:half, :]
    pad[-half:, :] = modes[-half:, :]
    if nq % 2 == 0:
        # split the Nyquist row to keep the fine samples real
        pad[half, :] = 0.5 * modes[half, :]
        pad[-half, :] += 0.5 * modes[half, :]
    f_fine = np.fft.ifft(pad, axis=0).real * 2.0

    # G[a, d] = integral f(q_a, p) e^{i p d dq / hbar} dp over separations d
    d = np.arange(-(nq - 1), nq)
    p = grid.p_values()
    kernel = np.exp(1j * np.outer(p, d) * grid.dq / hbar) * grid.dp
    g = f_fine @ kernel                          # (2nq, 2nq-1)

    i = np.arange(nq)
    mid = i[:, None] + i[None, :]                # fine-grid index of (x+x')/2
    sep = i[:, None] - i[None, :] + (nq - 1)     # column of x - x'
    return g[mid, sep]


def ho_wigner_closed_form(n: int, grid: PhaseGrid, hbar: float,
                          mass: float = 1.0, omega: float = 1.0) -> PhaseField:
    """Oscillator eigenstate Wigner function from its Laguerre closed form.

    W_n = ((-1)^n / (pi hbar)) e^{-2H/(hbar omega)} L_n(4H/(hbar omega)),
    H = p^2/2m + m omega^2 q^2 / 2.  Useful on grids too coarse for the
    transform route and as an independent cross-check of it.
    """
    from scipy.special import eval_laguerre
    if n < 0:
        raise ValidationError("quantum number n must be nonnegative")
    qq, pp = grid.meshgrid()
    h = pp ** 2 / (2.0 * mass) + 0.5 * mass * omega ** 2 * qq ** 2
    z = 2.0 * h / (hbar * omega)
    vals = ((-1.0) ** n / (np.pi * hbar)) * np.exp(-z) * eval_laguerre(n, 2.0 * z)
    return PhaseField(grid, vals, role="density")


def gaussian_state(grid: PhaseGrid, q0: float, p0: float,
                   sigma_q: float, sigma_p: float) -> PhaseField:
    """Normalized Gaussian density centered at (q0, p0)."""
    if sigma_q <= 0 or sigma_p <= 0:
        raise ValidationError("Gaussian widths must be positive")
    if not (grid.q_min <= q0 - 3 * sigma_q and q0 + 3 * sigma_q <= grid.q_max):
        raise ValidationError("Gaussian extends beyond the q-extent (3 sigma)")
    if not (grid.p_min <= p0 - 3 * sigma_p and p0 + 3 * sigma_p <= grid.p_max):
        raise ValidationError("Gaussian extends beyond the p-extent (3 sigma)")
    qq, pp = grid.meshgrid()
    vals = np.exp(-((qq - q0) ** 2) / (2 * sigma_q ** 2)
                  - ((pp - p0) ** 2) / (2 * sigma_p ** 2))
    vals /= np.sum(vals) * grid.cell_area
    return PhaseField(grid, vals, role="density")


def coherent_state(grid: PhaseGrid, q0: float, p0: float, hbar: float,
                   mass: float = 1.0, omega: float = 1.0) -> PhaseField:
    """Displaced oscillator ground state (minimum-uncertainty Gaussian)."""
    return gaussian_state(grid, q0, p0,
                          np.sqrt(hbar / (2.0 * mass * omega)),
                          np.sqrt(hbar * mass * omega / 2.0))


def ring_state(grid: PhaseGrid, e0: float, width: float,
               h0: PhaseField) -> PhaseField:
    """Regularized uniform distribution on the orbit H0 = E0.

    N * exp(-(H0 - E0)^2 / (2 w^2)); the ideal orbit-delta is recovered
    weakly as w -> 0 (its state volume shrinks like O(w)).  The width w is
    an explicit experiment parameter; it must stay resolvable on the grid.
    """
    if width <= 0:
        raise ValidationError("ring width must be positive")
    if not h0.grid.same_as(grid):
        raise ValidationError("H0 field must live on the target grid")
    vals = np.exp(-((h0.values - e0) ** 2) / (2.0 * width ** 2))
    peak = np.max(vals)
    edge = max(vals[0, :].max(), vals[-1, :].max(),
               vals[:, 0].max(), vals[:, -1].max())
    if edge > 1e-12 * peak:
        raise ValidationError("orbit clipped by the grid boundary")
    vals = vals / (np.sum(vals) * grid.cell_area)
    return PhaseField(grid, vals, role="density")


def mixture(states: list[PhaseField], weights: list[float]) -> PhaseField:
    """Convex combination of densities."""
    if not states:
        raise ValidationError("mixture of nothing")
    if len(states) != len(weights):
        raise ValidationError("one weight per state required")
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise ValidationError("weights must be nonnegative and sum to 1")
    for s in states[1:]:
        require_same_grid(states[0], s)
    vals = sum(wi * s.values for wi, s in zip(w, states))
    return PhaseField(states[0].grid, vals, role="density")
