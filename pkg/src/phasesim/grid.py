"""Phase-space grid, sampled fields, quadrature, and symmetry transforms.

The (q, p) plane is discretized on a uniform periodic grid with the
half-open convention: samples q_i = q_min + i*dq for i in [0, nq), so
q_max itself is not a sample.  All spectral machinery (mode transforms,
spectral translation) lives here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatchError, ValidationError

VALID_ROLES = ("density", "effect", "observable")


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform periodic discretization of the (q, p) plane."""

    nq: int
    np_: int
    q_min: float
    q_max: float
    p_min: float
    p_max: float

    @property
    def dq(self) -> float:
        return (self.q_max - self.q_min) / self.nq

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / self.np_

    @property
    def q_extent(self) -> float:
        return self.q_max - self.q_min

    @property
    def p_extent(self) -> float:
        return self.p_max - self.p_min

    @property
    def cell_area(self) -> float:
        return self.dq * self.dp

    @property
    def size(self) -> int:
        return self.nq * self.np_

    def q_values(self) -> np.ndarray:
        return self.q_min + self.dq * np.arange(self.nq)

    def p_values(self) -> np.ndarray:
        return self.p_min + self.dp * np.arange(self.np_)

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        """(nq, np) coordinate arrays, q varying along axis 0."""
        return np.meshgrid(self.q_values(), self.p_values(), indexing="ij")

    def u_values(self) -> np.ndarray:
        """Signed q-mode wavevectors u_m = 2*pi*m'/(q_max - q_min)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.nq, d=self.dq)

    def v_values(self) -> np.ndarray:
        """Signed p-mode wavevectors."""
        return 2.0 * np.pi * np.fft.fftfreq(self.np_, d=self.dp)

    def same_as(self, other: "PhaseGrid") -> bool:
        return (
            self.nq == other.nq
            and self.np_ == other.np_
            and np.isclose(self.q_min, other.q_min, rtol=1e-12, atol=1e-12)
            and np.isclose(self.q_max, other.q_max, rtol=1e-12, atol=1e-12)
            and np.isclose(self.p_min, other.p_min, rtol=1e-12, atol=1e-12)
            and np.isclose(self.p_max, other.p_max, rtol=1e-12, atol=1e-12)
        )


def make_grid(nq: int, np_: int, q_min: float, q_max: float,
              p_min: float, p_max: float) -> PhaseGrid:
    """Validated PhaseGrid constructor."""
    if nq < 4 or np_ < 4:
        raise ValidationError(f"grid needs at least 4 samples per axis, got {nq}x{np_}")
    if not (q_max > q_min):
        raise ValidationError(f"q extent must be positive: [{q_min}, {q_max}]")
    if not (p_max > p_min):
        raise ValidationError(f"p extent must be positive: [{p_min}, {p_max}]")
    return PhaseGrid(int(nq), int(np_), float(q_min), float(q_max),
                     float(p_min), float(p_max))


@dataclass(frozen=True)
class PhaseField:
    """Real function sampled on a PhaseGrid (state, effect, or observable)."""

    grid: PhaseGrid
    values: np.ndarray = field(repr=False)
    role: str = "observable"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.nq, self.grid.np_):
            raise ValidationError(
                f"field shape {vals.shape} does not match grid "
                f"({self.grid.nq}, {self.grid.np_})")
        if not np.all(np.isfinite(vals)):
            raise ValidationError("field contains non-finite values")
        if self.role not in VALID_ROLES:
            raise ValidationError(f"role must be one of {VALID_ROLES}, got {self.role!r}")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def with_values(self, values: np.ndarray, role: str | None = None) -> "PhaseField":
        return PhaseField(self.grid, values, self.role if role is None else role)

    # Convenience arithmetic; results are tagged as generic observables.
    def __add__(self, other: "PhaseField") -> "PhaseField":
        require_same_grid(self, other)
        return PhaseField(self.grid, self.values + other.values)

    def __sub__(self, other: "PhaseField") -> "PhaseField":
        require_same_grid(self, other)
        return PhaseField(self.grid, self.values - other.values)

    def __mul__(self, scalar: float) -> "PhaseField":
        return PhaseField(self.grid, self.values * float(scalar))

    __rmul__ = __mul__


def require_same_grid(f1: PhaseField, f2: PhaseField) -> None:
    if not f1.grid.same_as(f2.grid):
        raise GridMismatchError("fields live on different grids")


def _sequential_sum(a: np.ndarray) -> float:
    # Exactly rounded summation: bit-reproducible across runs and invariant
    # under sample permutations, so the symmetry transforms preserve
    # quadratures and inner products exactly, not just to rounding.
    return math.fsum(np.ascontiguousarray(a, dtype=float).ravel())


def integrate(f: PhaseField) -> float:
    """Quadrature of f over the torus: dq*dp * sum of samples."""
    return f.grid.cell_area * _sequential_sum(f.values)


def mode_transform(f: PhaseField) -> np.ndarray:
    """2D DFT of the samples (numpy forward convention, unnormalized)."""
    return np.fft.fft2(f.values)


def inverse_mode_transform(modes: np.ndarray, grid: PhaseGrid,
                           role: str = "observable") -> PhaseField:
    """Inverse of mode_transform; imaginary residue is discarded."""
    vals = np.fft.ifft2(modes)
    return PhaseField(grid, vals.real, role)


def translate(f: PhaseField, a: float, b: float) -> PhaseField:
    """Shifted field g(q, p) = f(q + a, p + b), spectral, periodic.

    Exact for band-limited fields at any real (a, b); reduces to an index
    roll when the shift is a whole number of cells.
    """
    g = f.grid
    # Integer-cell shifts are pure sample permutations; keep them exact.
    sa, sb = a / g.dq, b / g.dp
    if abs(sa - round(sa)) < 1e-12 and abs(sb - round(sb)) < 1e-12:
        vals = np.roll(f.values, (-round(sa), -round(sb)), axis=(0, 1))
        return PhaseField(g, vals, f.role)
    u = g.u_values()[:, None]
    v = g.v_values()[None, :]
    modes = np.fft.fft2(f.values) * np.exp(1j * (u * a + v * b))
    return PhaseField(g, np.fft.ifft2(modes).real, f.role)


def switch_transform(f: PhaseField, c: float) -> PhaseField:
    """Axis switch g(q, p) = f(C*p, q/C); a pure sample transposition.

    Requires the grid to be square in the rescaled sense:
    nq == np, q_extent == C * p_extent, q_min == C * p_min.
    (Time reversal of dynamics under the switch is the caller's business.)
    """
    g = f.grid
    if c == 0:
        raise ValidationError("switch constant C must be nonzero")
    if g.nq != g.np_:
        raise ValidationError("switch needs nq == np")
    if not np.isclose(g.q_extent, c * g.p_extent, rtol=1e-12):
        raise ValidationError("switch needs q_extent == C * p_extent")
    if not np.isclose(g.q_min, c * g.p_min, rtol=1e-12, atol=1e-12):
        raise ValidationError("switch needs q_min == C * p_min")
    return PhaseField(g, f.values.T.copy(), f.role)


def p_reflect(f: PhaseField) -> PhaseField:
    """Momentum reflection g(q, p) = f(q, -p) via periodic index reflection."""
    vals = np.roll(f.values[:, ::-1], 1, axis=1)
    return PhaseField(f.grid, vals, f.role)
