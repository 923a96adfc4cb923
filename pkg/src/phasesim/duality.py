"""The probabilistic layer: inner product, state volume, effects, Born rule.

The inner product is the plain overlap <f, g> = integral f g dq dp (the
arbitrary positive multiplier allowed by symmetry is fixed to 1).  A state's
volume is V_f = 1 / <f, f>; state-dual effects carry the coefficient
c = V_g, which makes P(g|g) = 1 and P(i|f) = V_{g_i} * <g_i, f> the
generalized Born rule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .grid import (
    PhaseField,
    _sequential_sum,
    integrate,
    p_reflect,
    require_same_grid,
    switch_transform,
    translate,
)


def inner_product(f1: PhaseField, f2: PhaseField) -> float:
    """Symmetric bilinear overlap integral of two fields."""
    require_same_grid(f1, f2)
    return f1.grid.cell_area * _sequential_sum(f1.values * f2.values)


def state_volume(f: PhaseField) -> float:
    """Effective phase-space volume V = (integral f^2)^-1."""
    norm2 = inner_product(f, f)
    if norm2 <= 0.0:
        raise ValidationError("state volume undefined for a zero field")
    return 1.0 / norm2


@dataclass(frozen=True)
class Effect:
    """Measurement effect: a field g with coefficient c (units of q*p).

    g need not be a valid state; for state-dual effects c equals the state
    volume of g, which the helper constructor below enforces.
    """

    g: PhaseField
    c: float

    def __post_init__(self):
        if self.c < 0:
            raise ValidationError("effect coefficient must be nonnegative")


def state_dual_effect(g: PhaseField) -> Effect:
    """Effect dual to the state g: c = V_g, so that c * <g, g> = 1."""
    return Effect(g, state_volume(g))


def born_probability(effect: Effect, f: PhaseField) -> float:
    """Generalized Born rule P = c * integral g f."""
    return effect.c * inner_product(effect.g, f)


def completeness_defect(effects: list[Effect],
                        domain_indicator: PhaseField
                        ) -> tuple[PhaseField, float, float]:
    """Residual of the completeness identity sum_i c_i g_i = 1 on a domain.

    Returns (residual field, max |residual| over the domain interior,
    |sum_i c_i - V_domain|).  The interior excludes two cells around the
    indicator's edge, where a sharp 0/1 indicator necessarily rings.
    """
    if not effects:
        raise ValidationError("empty effect list")
    grid = domain_indicator.grid
    for e in effects:
        require_same_grid(e.g, domain_indicator)
    total = np.zeros((grid.nq, grid.np_))
    for e in effects:
        total = total + e.c * e.g.values
    residual = total - domain_indicator.values

    inside = domain_indicator.values > 0.5
    interior = inside.copy()
    for _ in range(2):                      # erode two cells, periodic
        shrunk = interior.copy()
        for axis in (0, 1):
            for step in (1, -1):
                shrunk &= np.roll(interior, step, axis=axis)
        interior = shrunk
    interior_max = float(np.max(np.abs(residual[interior]))) if interior.any() else 0.0

    volume_defect = abs(sum(e.c for e in effects) - integrate(domain_indicator))
    return PhaseField(grid, residual), interior_max, volume_defect


def symmetry_invariance_suite(f1: PhaseField, f2: PhaseField,
                              a: float, b: float, c: float) -> dict[str, float]:
    """Deviation of <f1, f2> under the three canonical symmetry transforms.

    Returns |<T f1, T f2> - <f1, f2>| for translation by (a, b), the switch
    with constant C, and momentum reflection.  These are the executable
    premises behind the uniqueness of the inner product.
    """
    base = inner_product(f1, f2)
    out = {
        "translation": abs(inner_product(translate(f1, a, b),
                                         translate(f2, a, b)) - base),
        "p_reflect": abs(inner_product(p_reflect(f1), p_reflect(f2)) - base),
    }
    try:
        out["switch"] = abs(inner_product(switch_transform(f1, c),
                                          switch_transform(f2, c)) - base)
    except ValidationError:
        out["switch"] = float("nan")
    return out
