"""Dirichlet and Fejer kernels, partial sums, Cesaro means, and the
martingale-side quasinorm machinery.

Conventions.  ``D_n = sum_{k < n} psi_k`` with ``D_0 = 0``;
``K_n = (1/n) sum_{k < n} D_k`` for ``n >= 1``; the n-th Cesaro (Fejer)
mean of ``f`` averages its first ``n`` partial sums.  The mean is
computed by two deliberately different routes — literal accumulation of
partial sums, and a single inverse transform of multiplier-weighted
coefficients — and the test suite insists they agree.  Collapsing them
into one would silence exactly the class of indexing bugs this package
exists to catch.

For ``0 < p < 1`` the ``L_p`` "norm" is only a quasinorm; nothing here
assumes the triangle inequality.  The Hardy-space size of a martingale is
estimated through its maximal function across a full chain of dyadic-style
conditional expectations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .group import Cylinder, GroupSpec, digit_decompose, materialize_group
from .transform import (
    CylinderFunction,
    Spectrum,
    character_basis,
    coarsen,
    inverse_transform,
    sup_abs,
)

__all__ = [
    "SummabilityResult",
    "AtomReport",
    "zero_cylinder_indicator",
    "dirichlet_kernel",
    "fejer_kernel",
    "partial_sum",
    "summed_partial_sums",
    "fejer_mean_direct",
    "fejer_mean_multiplier",
    "lp_quasinorm",
    "maximal_function",
    "hardy_quasinorm_estimate",
    "validate_p_atom",
]


@dataclass
class SummabilityResult:
    """A Cesaro mean together with how it was obtained."""

    order: int
    values: CylinderFunction
    method: str  # "direct" or "multiplier"


def zero_cylinder_indicator(group: GroupSpec, level: int) -> CylinderFunction:
    """Indicator of the depth-``level`` cylinder through 0."""
    if not 0 <= level <= group.resolution:
        raise DomainError(f"level {level} outside [0, {group.resolution}]")
    vals = np.zeros(group.size, dtype=np.complex128)
    vals[:: group.scales[level]] = 1.0
    return CylinderFunction(group, vals)


def _kernel_group(g, resolution, n) -> GroupSpec:
    grp = materialize_group(g, resolution)
    if n > grp.size:
        raise DomainError(
            f"order {n} exceeds M_{grp.resolution} = {grp.size}; resolution too small"
        )
    return grp


def dirichlet_kernel(n: int, g, resolution: int | None = None) -> CylinderFunction:
    """``D_n`` on the full grid (``D_0`` is identically zero)."""
    n = int(n)
    if n < 0:
        raise DomainError(f"kernel order must be >= 0, got {n}")
    grp = _kernel_group(g, resolution, n)
    coeffs = np.zeros(grp.size, dtype=np.complex128)
    coeffs[:n] = 1.0
    return inverse_transform(Spectrum(grp, coeffs))


def fejer_kernel(n: int, g, resolution: int | None = None) -> CylinderFunction:
    """``K_n = (1/n) sum_{k<n} D_k``, through its multiplier ``(n-1-v)/n``."""
    n = int(n)
    if n < 1:
        raise DomainError(f"Fejer kernel order must be >= 1, got {n}")
    grp = _kernel_group(g, resolution, n)
    v = np.arange(grp.size)
    weights = np.maximum(n - 1 - v, 0) / n
    return inverse_transform(Spectrum(grp, weights.astype(np.complex128)))


def partial_sum(s: Spectrum, n: int) -> CylinderFunction:
    """``S_n f = sum_{k < n} c_k psi_k`` (``S_0`` is zero)."""
    n = int(n)
    if not 0 <= n <= s.group.size:
        raise DomainError(f"partial-sum order {n} outside [0, {s.group.size}]")
    coeffs = np.zeros(s.group.size, dtype=np.complex128)
    coeffs[:n] = s.coeffs[:n]
    return inverse_transform(Spectrum(s.group, coeffs))


def summed_partial_sums(s: Spectrum, start: int, stop: int) -> np.ndarray:
    """Pointwise ``sum_{j=start}^{stop-1} S_j f`` by literal accumulation.

    Runs the character counter incrementally: each step updates the
    current partial sum with one rank-one term and advances the character
    row along the carry chain, so the whole sweep is a small constant
    number of vector operations per index.
    """
    g = s.group
    if not 0 <= start <= stop <= g.size:
        raise DomainError(f"summation range [{start}, {stop}) outside [0, {g.size}]")
    total = np.zeros(g.size, dtype=np.complex128)
    if start == stop:
        return total
    cur = partial_sum(s, start).values
    basis = character_basis(g)
    psi = basis.row(start)
    counter = list(digit_decompose(start, g).digits)
    tmp = np.empty(g.size, dtype=np.complex128)
    for j in range(start, stop):
        total += cur
        if j + 1 == stop:
            break
        np.multiply(psi, s.coeffs[j], out=tmp)
        cur += tmp
        basis.advance(psi, counter)
    return total


def fejer_mean_direct(s: Spectrum, n: int) -> SummabilityResult:
    """The n-th Cesaro mean as an honest average of ``n`` partial sums."""
    n = int(n)
    if not 1 <= n <= s.group.size:
        raise DomainError(f"Cesaro order {n} outside [1, {s.group.size}]")
    vals = summed_partial_sums(s, 0, n) / n
    return SummabilityResult(n, CylinderFunction(s.group, vals), "direct")


def fejer_mean_multiplier(s: Spectrum, n: int) -> SummabilityResult:
    """The same mean as one inverse transform of ``c_v * (n - 1 - v)/n``."""
    n = int(n)
    if not 1 <= n <= s.group.size:
        raise DomainError(f"Cesaro order {n} outside [1, {s.group.size}]")
    v = np.arange(s.group.size)
    weights = np.maximum(n - 1 - v, 0) / n
    out = inverse_transform(Spectrum(s.group, s.coeffs * weights))
    return SummabilityResult(n, out, "multiplier")


def lp_quasinorm(f: CylinderFunction, p) -> float:
    """``(integral of |f|^p)^(1/p)`` for ``p > 0`` (a quasinorm when p < 1)."""
    p = float(p)
    if p <= 0:
        raise DomainError(f"exponent must be positive, got {p}")
    return float(np.mean(np.abs(f.values) ** p) ** (1.0 / p))


def maximal_function(f: CylinderFunction) -> CylinderFunction:
    """Pointwise sup of |conditional expectation| over all depths 0..N.

    Returned on the same grid as ``f`` (values are real, stored complex).
    """
    g = f.group
    best = np.abs(f.values)
    level_vals = f.values
    for level in range(g.resolution - 1, -1, -1):
        level_vals = level_vals.reshape(g.digits[level], -1).mean(axis=0)
        reps = g.size // g.scales[level]
        best = np.maximum(best, np.tile(np.abs(level_vals), reps))
    return CylinderFunction(g, best.astype(np.complex128))


def hardy_quasinorm_estimate(levels, p) -> float:
    """``L_p`` size of the maximal function of a martingale given by its levels.

    ``levels`` lists conditional expectations at strictly increasing
    resolutions (the last one is the finest).  The chain is validated:
    every level must be exactly the cylinder average of the next, up to a
    relative 1e-9 tolerance, and all groups must be prefixes of the finest
    one.  A violated chain raises :class:`DomainError` rather than
    returning a number that estimates nothing.
    """
    levels = list(levels)
    if not levels:
        raise DomainError("need at least one martingale level")
    fine = levels[-1]
    g = fine.group
    prev_res = -1
    for lev in levels:
        r = lev.group.resolution
        if r <= prev_res:
            raise DomainError("martingale levels must have strictly increasing resolution")
        if lev.group.digits != g.digits[:r]:
            raise DomainError("martingale levels must live on prefixes of the finest group")
        prev_res = r
    for i in range(len(levels) - 1):
        down = coarsen(levels[i + 1], levels[i].group.resolution)
        tol = 1e-9 * max(1.0, sup_abs(levels[i + 1].values))
        if sup_abs(down.values - levels[i].values) > tol:
            raise DomainError(
                f"martingale violation: level {i} is not the cylinder average of level {i + 1}"
            )
    best = np.zeros(g.size)
    for lev in levels:
        reps = g.size // lev.group.size
        best = np.maximum(best, np.tile(np.abs(lev.values), reps))
    return lp_quasinorm(CylinderFunction(g, best.astype(np.complex128)), p)


@dataclass
class AtomReport:
    """Outcome of checking the three p-atom conditions on an interval."""

    interval: Cylinder
    p: Fraction
    mean_abs: float
    sup_norm: float
    sup_allowed: float
    outside_sup: float
    mean_ok: bool
    support_ok: bool
    size_ok: bool

    @property
    def is_atom(self) -> bool:
        return self.mean_ok and self.support_ok and self.size_ok


def validate_p_atom(a: CylinderFunction, interval: Cylinder, p) -> AtomReport:
    """Check mean zero, support, and the ``mu(I)^(-1/p)`` sup bound.

    Floating-point slack: mean and outside-support values up to ``1e-12``
    times the sup norm are accepted, and the size bound gets a relative
    ``1e-12`` cushion.
    """
    p = Fraction(p)
    if not 0 < p <= 1:
        raise DomainError(f"atom exponent must lie in (0, 1], got {p}")
    g = a.group
    if interval.group.digits != g.digits:
        raise DomainError("atom and interval must live on the same group")
    d = interval.depth
    md = g.scales[d]
    inside_mask = np.zeros(g.size, dtype=bool)
    inside_mask[(np.arange(g.size) % md) == interval.base_index] = True
    sup_norm = sup_abs(a.values)
    slack = 1e-12 * max(1.0, sup_norm)
    mean_abs = abs(a.values[inside_mask].sum()) / g.size
    outside = a.values[~inside_mask]
    outside_sup = sup_abs(outside) if outside.size else 0.0
    inv_p = 1 / p
    if inv_p.denominator == 1:
        sup_allowed = float(md ** int(inv_p))
    else:
        sup_allowed = float(md) ** float(inv_p)
    return AtomReport(
        interval=interval,
        p=p,
        mean_abs=mean_abs,
        sup_norm=sup_norm,
        sup_allowed=sup_allowed,
        outside_sup=outside_sup,
        mean_ok=mean_abs <= slack,
        support_ok=outside_sup <= slack,
        size_ok=sup_norm <= sup_allowed * (1 + 1e-12),
    )
