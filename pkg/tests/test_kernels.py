"""Unit tests: Dirichlet/Fejer kernels, Cesaro means, Hardy-space pieces."""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vilenkin.errors import DomainError
from vilenkin.group import Cylinder, build_group_spec
from vilenkin.kernels import (
    dirichlet_kernel,
    fejer_kernel,
    fejer_mean_direct,
    fejer_mean_multiplier,
    hardy_quasinorm_estimate,
    lp_quasinorm,
    maximal_function,
    partial_sum,
    summed_partial_sums,
    validate_p_atom,
    zero_cylinder_indicator,
)
from vilenkin.transform import (
    CylinderFunction,
    character_basis,
    coarsen,
    forward_transform,
    random_cylinder_function,
    sup_abs,
)

digit_lists = st.lists(st.integers(2, 5), min_size=2, max_size=5)


def test_dirichlet_smallest_orders():
    g = build_group_spec([2, 3, 2])
    assert sup_abs(dirichlet_kernel(0, g).values) == 0
    assert sup_abs(dirichlet_kernel(1, g).values - 1.0) < 1e-15


@pytest.mark.parametrize("digits", [[2] * 6, [3] * 4, [2, 3, 2, 4]])
def test_dirichlet_at_scale_orders_is_block(digits):
    g = build_group_spec(digits)
    for n in range(g.resolution + 1):
        d = dirichlet_kernel(g.scales[n], g)
        want = g.scales[n] * zero_cylinder_indicator(g, n).values
        assert sup_abs(d.values - want) <= 1e-10


def test_dirichlet_shift_identity_exhaustive():
    # D_{j + M_B} = D_{M_B} + psi_{M_B} * D_j for j < M_B
    g = build_group_spec([2] * 8)
    B = 4
    mb = g.scales[B]
    basis = character_basis(g)
    d_mb = dirichlet_kernel(mb, g).values
    psi = basis.row(mb)
    for j in range(mb):
        lhs = dirichlet_kernel(j + mb, g).values
        rhs = d_mb + psi * dirichlet_kernel(j, g).values
        assert sup_abs(lhs - rhs) <= 1e-10


@given(digit_lists, st.data())
@settings(max_examples=40, deadline=None)
def test_dirichlet_carry_split(digits, data):
    # D_{d*M_r + i} = (sum_{t<d} psi_{M_r}^t) D_{M_r} + psi_{M_r}^d D_i
    g = build_group_spec(digits)
    r = data.draw(st.integers(0, g.resolution - 1))
    d = data.draw(st.integers(1, g.digits[r] - 1))
    i = data.draw(st.integers(0, g.scales[r] - 1))
    basis = character_basis(g)
    psi = basis.row(g.scales[r])
    geom = sum(psi**t for t in range(d))
    lhs = dirichlet_kernel(d * g.scales[r] + i, g).values
    rhs = geom * dirichlet_kernel(g.scales[r], g).values + psi**d * dirichlet_kernel(i, g).values
    assert sup_abs(lhs - rhs) <= 1e-9


def test_fejer_value_at_zero():
    g = build_group_spec([2] * 6)
    for n in (1, 2, 5, 21, 64):
        k = fejer_kernel(n, g)
        assert abs(k.values[0] - (n - 1) / 2) < 1e-10
    assert sup_abs(fejer_kernel(1, g).values) < 1e-12


def test_kernel_index_bounds():
    g = build_group_spec([2, 3])
    with pytest.raises(DomainError):
        dirichlet_kernel(-1, g)
    with pytest.raises(DomainError):
        dirichlet_kernel(g.size + 1, g)
    with pytest.raises(DomainError):
        fejer_kernel(0, g)


def test_partial_sum_at_full_order_reconstructs():
    g = build_group_spec([2, 3, 2])
    f = random_cylinder_function(g, seed=9)
    s = forward_transform(f)
    assert sup_abs(partial_sum(s, g.size).values - f.values) < 1e-10
    assert sup_abs(partial_sum(s, 0).values) == 0


@given(digit_lists, st.data())
@settings(max_examples=25, deadline=None)
def test_summed_partial_sums_matches_literal_stack(digits, data):
    g = build_group_spec(digits)
    s = forward_transform(random_cylinder_function(g, seed=data.draw(st.integers(0, 99))))
    start = data.draw(st.integers(0, g.size - 1))
    stop = data.draw(st.integers(start, g.size))
    fast = summed_partial_sums(s, start, stop)
    slow = np.zeros(g.size, dtype=np.complex128)
    for j in range(start, stop):
        slow += partial_sum(s, j).values
    assert sup_abs(fast - slow) <= 1e-9 * max(1.0, sup_abs(slow))


@given(digit_lists, st.data())
@settings(max_examples=25, deadline=None)
def test_fejer_mean_routes_agree(digits, data):
    g = build_group_spec(digits)
    s = forward_transform(random_cylinder_function(g, seed=data.draw(st.integers(0, 99))))
    n = data.draw(st.integers(1, g.size))
    direct = fejer_mean_direct(s, n)
    mult = fejer_mean_multiplier(s, n)
    assert direct.method == "direct"
    assert mult.method == "multiplier"
    assert sup_abs(direct.values.values - mult.values.values) <= 1e-10


def test_fejer_mean_of_kernel_spectrum_is_kernel():
    # sigma_n applied to the delta spectrum gives K_n itself
    g = build_group_spec([2] * 6)
    coeffs = np.ones(g.size, dtype=np.complex128)
    from vilenkin.transform import Spectrum

    s = Spectrum(g, coeffs)
    n = 21
    assert sup_abs(fejer_mean_direct(s, n).values.values - fejer_kernel(n, g).values) <= 1e-10


def test_lp_quasinorm_matches_parseval_at_p2():
    g = build_group_spec([2, 3, 2])
    f = random_cylinder_function(g, seed=4)
    s = forward_transform(f)
    energy = float(np.sqrt(np.sum(np.abs(s.coeffs) ** 2)))
    assert lp_quasinorm(f, 2) == pytest.approx(energy, rel=1e-10)
    with pytest.raises(DomainError):
        lp_quasinorm(f, 0)


def test_maximal_function_exact_profile_for_indicator():
    # for 1_{I_n}: the best conditional expectation at x is M_j / M_n where
    # j is the last level whose cylinder through x still meets I_n
    g = build_group_spec([2] * 4)
    n = 2
    f = zero_cylinder_indicator(g, n)
    star = maximal_function(f).values.real
    for i in range(g.size):
        j = 0
        while j < n and i % g.scales[j + 1] == 0:
            j += 1
        want = 1.0 if i % g.scales[n] == 0 else g.scales[j] / g.scales[n]
        assert star[i] == pytest.approx(want, abs=1e-12)


def test_maximal_function_dominates_mean_and_value():
    g = build_group_spec([2, 3, 2])
    f = random_cylinder_function(g, seed=12)
    star = maximal_function(f).values.real
    assert np.all(star >= abs(f.integral()) - 1e-12)
    assert np.all(star + 1e-12 >= np.abs(f.values))


def test_hardy_estimate_accepts_martingale_chain():
    g = build_group_spec([2, 3, 2, 2])
    f = random_cylinder_function(g, seed=3)
    levels = [coarsen(f, r) for r in range(g.resolution)] + [f]
    est = hardy_quasinorm_estimate(levels, Fraction(1, 2))
    star = maximal_function(f)
    want = float(np.mean(np.sqrt(np.abs(star.values)))) ** 2
    assert est == pytest.approx(want, rel=1e-9)


def test_hardy_estimate_rejects_non_martingale():
    g = build_group_spec([2, 2, 2])
    f = random_cylinder_function(g, seed=8)
    levels = [coarsen(f, 0), coarsen(f, 1), f]
    broken = levels[1].copy()
    broken.values = broken.values + 1.0
    with pytest.raises(DomainError, match="level 1"):
        hardy_quasinorm_estimate([levels[0], broken, f], Fraction(1, 2))


def test_partial_sums_at_scale_orders_are_conditional_expectations():
    g = build_group_spec([2, 3, 2, 4])
    f = random_cylinder_function(g, seed=17)
    s = forward_transform(f)
    for n in range(g.resolution + 1):
        sn = partial_sum(s, g.scales[n]).values
        en = coarsen(f, n).values
        # S_{M_n} f is constant on depth-n cylinders with the cylinder average
        tiled = np.tile(en, g.size // g.scales[n])
        assert sup_abs(sn - tiled) < 1e-9


def _atom_on(g, depth):
    # mean-zero block on the zero cylinder of the given depth, below sup cap
    vals = np.zeros(g.size, dtype=np.complex128)
    step = g.scales[depth]
    members = np.arange(g.size) % step == 0
    idx = np.flatnonzero(members)
    vals[idx[: len(idx) // 2]] = 1.0
    vals[idx[len(idx) // 2 :]] = -1.0
    return CylinderFunction(g, vals), Cylinder(g, (0,) * depth)


def test_validate_p_atom_passes_and_reports():
    g = build_group_spec([2] * 4)
    a, interval = _atom_on(g, 2)
    report = validate_p_atom(a, interval, Fraction(1, 2))
    assert report.is_atom
    assert report.mean_ok and report.support_ok and report.size_ok
    assert report.sup_allowed == pytest.approx(16.0)  # (1/4)^(-2)


def test_validate_p_atom_flags_each_violation():
    g = build_group_spec([2] * 4)
    a, interval = _atom_on(g, 2)

    shifted = a.copy()
    shifted.values = shifted.values + 0.25
    r = validate_p_atom(shifted, interval, Fraction(1, 2))
    assert not r.mean_ok and not r.support_ok  # constant shift leaks outside too

    outside = a.copy()
    outside.values = outside.values.copy()
    outside.values[1] = 1.0  # index 1 is outside the zero cylinder of depth 2
    r = validate_p_atom(outside, interval, Fraction(1, 2))
    assert not r.support_ok

    tall = a.copy()
    tall.values = tall.values * 100.0
    r = validate_p_atom(tall, interval, Fraction(1, 2))
    assert not r.size_ok
    assert r.mean_ok


def test_validate_p_atom_rejects_bad_exponent():
    g = build_group_spec([2] * 3)
    a, interval = _atom_on(g, 1)
    with pytest.raises(DomainError):
        validate_p_atom(a, interval, Fraction(3, 2))
