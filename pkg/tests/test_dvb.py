import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dvbcheck.dvb import (
    DvbElement,
    DvbHDualElement,
    DvbShape,
    DvbVDualElement,
    add_hdual_over_B,
    add_hdual_over_core,
    add_over_A,
    add_over_B,
    add_vdual_over_A,
    add_vdual_over_core,
    core_inject,
    duality_iso,
    interchange_check,
    is_core,
    pair_over_A,
    pair_over_B,
    pivoted_rank,
    scale_over_A,
    scale_over_B,
    dual_pairing,
)
from dvbcheck.errors import DimensionError, UndefinedOperation


def flat_equal(a, b):
    np.testing.assert_array_equal(a.flat(), b.flat())


def test_shape_validation():
    with pytest.raises(DimensionError):
        DvbShape(1, 0, 0, 0)
    with pytest.raises(DimensionError):
        DvbShape(-1, 1, 1, 1)
    with pytest.raises(DimensionError):
        DvbElement.of(DvbShape(1, 1, 2, 1), [0], [0], [0], [0])


def test_addition_over_A_example():
    x, a = [0.0], [1.0]
    total = add_over_A(DvbElement(x, a, [1, 0], [2]), DvbElement(x, a, [0, 1], [3]))
    flat_equal(total, DvbElement(x, a, [1, 1], [5]))


def test_zero_over_a_is_neutral(rng):
    d = DvbElement(*rng.uniform(-1, 1, (4, 2)))
    flat_equal(add_over_A(d, DvbElement(d.x, d.a, np.zeros(2), np.zeros(2))), d)
    flat_equal(add_over_B(d, DvbElement(d.x, np.zeros(2), d.b, np.zeros(2))), d)


def test_scalar_action_matches_repeated_addition(rng):
    d = DvbElement(*rng.uniform(-1, 1, (4, 3)))
    flat_equal(scale_over_A(d, 2.0), add_over_A(d, d))
    flat_equal(scale_over_B(d, 2.0), add_over_B(d, d))


def test_mismatched_additions_rejected():
    d1 = DvbElement([0.0], [1.0], [1.0], [0.0])
    d2 = DvbElement([0.0], [2.0], [3.0], [0.0])
    with pytest.raises(UndefinedOperation):
        add_over_A(d1, d2)
    with pytest.raises(UndefinedOperation):
        add_over_B(d1, d2)


def square(rng, shape, zero_core=False):
    x = rng.uniform(-1, 1, shape.n)
    a1, a2 = rng.uniform(-1, 1, (2, shape.p))
    b1, b2 = rng.uniform(-1, 1, (2, shape.q))
    cs = np.zeros((4, shape.r)) if zero_core else rng.uniform(-1, 1, (4, shape.r))
    return (
        DvbElement(x, a1, b1, cs[0]),
        DvbElement(x, a1, b2, cs[1]),
        DvbElement(x, a2, b1, cs[2]),
        DvbElement(x, a2, b2, cs[3]),
    )


def test_interchange_zero_core(rng):
    assert interchange_check(*square(rng, DvbShape(2, 2, 2, 2), zero_core=True)) == 0.0


def test_interchange_reduces_to_summed_cores(rng):
    d = square(rng, DvbShape(2, 2, 2, 2))
    assert interchange_check(*d) <= 1e-12
    lhs = add_over_B(add_over_A(d[0], d[1]), add_over_A(d[2], d[3]))
    np.testing.assert_allclose(lhs.a, d[0].a + d[2].a)
    np.testing.assert_allclose(lhs.b, d[0].b + d[1].b)
    np.testing.assert_allclose(lhs.c, sum(e.c for e in d), atol=1e-15)


def test_interchange_rejects_non_squares(rng):
    d1, d2, d3, d4 = square(rng, DvbShape(1, 2, 2, 1))
    bad = DvbElement(d2.x, d2.a + 1.0, d2.b, d2.c)
    with pytest.raises(UndefinedOperation):
        interchange_check(d1, bad, d3, d4)


def test_core_structures_coincide(rng):
    sh = DvbShape(2, 1, 3, 2)
    x, c1, c2 = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
    zero = core_inject(sh, x, np.zeros(2))
    assert is_core(zero) and not zero.c.any()
    expected = core_inject(sh, x, c1 + c2)
    flat_equal(add_over_A(core_inject(sh, x, c1), core_inject(sh, x, c2)), expected)
    flat_equal(add_over_B(core_inject(sh, x, c1), core_inject(sh, x, c2)), expected)


def test_dual_pairing_example():
    x, kappa = [0.0], [0.7]
    Phi = DvbVDualElement(x, [1.0, 1.0], kappa, [1.0, 0.0])
    Psi = DvbHDualElement(x, [3.0, 0.0], kappa, [0.0, 1.0])
    assert dual_pairing(Phi, Psi) == 2.0
    assert dual_pairing(Phi, Psi, core=[5.0]) == 2.0


def test_dual_pairing_vanishes_for_zero_covectors(rng):
    x, kappa = rng.uniform(-1, 1, (2, 2))
    Phi = DvbVDualElement(x, rng.uniform(-1, 1, 3), kappa, np.zeros(2))
    Psi = DvbHDualElement(x, rng.uniform(-1, 1, 2), kappa, np.zeros(3))
    assert dual_pairing(Phi, Psi, core=rng.uniform(-1, 1, 2)) == 0.0


def test_dual_pairing_needs_common_kappa():
    Phi = DvbVDualElement([0.0], [1.0], [1.0], [1.0])
    Psi = DvbHDualElement([0.0], [1.0], [2.0], [1.0])
    with pytest.raises(UndefinedOperation):
        dual_pairing(Phi, Psi)


def random_duals(rng, shape):
    x, kappa = rng.uniform(-1, 1, shape.n), rng.uniform(-1, 1, shape.r)
    Phi = DvbVDualElement(x, rng.uniform(-1, 1, shape.p), kappa, rng.uniform(-1, 1, shape.q))
    Psi = DvbHDualElement(x, rng.uniform(-1, 1, shape.q), kappa, rng.uniform(-1, 1, shape.p))
    return Phi, Psi


def test_pairing_is_lift_independent_and_antisymmetric_in_order(rng):
    for _ in range(200):
        sh = DvbShape(*rng.integers(1, 5, 4))
        Phi, Psi = random_duals(rng, sh)
        base = dual_pairing(Phi, Psi)
        assert abs(base - dual_pairing(Phi, Psi, core=rng.uniform(-1, 1, sh.r))) <= 1e-12
        assert dual_pairing(Phi, Psi, reverse=True) == -base


def test_pairing_bilinear_over_core(rng):
    sh = DvbShape(2, 3, 2, 2)
    Phi, Psi = random_duals(rng, sh)
    Phi2 = DvbVDualElement(Phi.x, rng.uniform(-1, 1, 3), Phi.kappa, rng.uniform(-1, 1, 2))
    Psi2 = DvbHDualElement(Psi.x, rng.uniform(-1, 1, 2), Psi.kappa, rng.uniform(-1, 1, 3))
    lhs = dual_pairing(add_vdual_over_core(Phi, Phi2), Psi)
    assert lhs == pytest.approx(dual_pairing(Phi, Psi) + dual_pairing(Phi2, Psi), abs=1e-14)
    lhs = dual_pairing(Phi, add_hdual_over_core(Psi, Psi2))
    assert lhs == pytest.approx(dual_pairing(Phi, Psi) + dual_pairing(Phi, Psi2), abs=1e-14)


def test_dual_additions_over_sides(rng):
    sh = DvbShape(1, 2, 2, 2)
    Phi, Psi = random_duals(rng, sh)
    twice = add_vdual_over_A(Phi, Phi)
    np.testing.assert_array_equal(twice.kappa, 2 * Phi.kappa)
    twice = add_hdual_over_B(Psi, Psi)
    np.testing.assert_array_equal(twice.psi, 2 * Psi.psi)


def test_pairings_with_elements(rng):
    Phi, Psi = random_duals(rng, DvbShape(2, 2, 3, 2))
    d = DvbElement(Phi.x, Phi.a, Psi.b, rng.uniform(-1, 1, 2))
    assert pair_over_A(Phi, d) == pytest.approx(Phi.phi @ d.b + Phi.kappa @ d.c)
    assert pair_over_B(Psi, d) == pytest.approx(Psi.psi @ d.a + Psi.kappa @ d.c)


def test_duality_matrix_smallest_shape():
    iso = duality_iso(DvbShape(1, 1, 1, 1))
    np.testing.assert_array_equal(iso.matrix, [[0.0, 1.0], [-1.0, 0.0]])
    assert iso.rank == 2 and iso.nondegenerate


def test_duality_matrix_empty_fibres():
    iso = duality_iso(DvbShape(1, 0, 0, 2))
    assert iso.matrix.shape == (0, 0) and iso.nondegenerate


def test_duality_matrix_block_structure(rng):
    sh = DvbShape(2, 3, 4, 2)
    iso = duality_iso(sh, rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2), rng)
    p, q = 3, 4
    expected = np.zeros((p + q, p + q))
    expected[:q, p:] = np.eye(q)  # phi . b
    expected[q:, :p] = -np.eye(p)  # -psi . a
    np.testing.assert_array_equal(iso.matrix, expected)
    assert iso.additivity_vdual <= 1e-14 and iso.additivity_hdual <= 1e-14


def test_pivoted_rank(rng):
    m = rng.uniform(-1, 1, (5, 3)) @ rng.uniform(-1, 1, (3, 6))
    assert pivoted_rank(m) == 3 == np.linalg.matrix_rank(m)
    assert pivoted_rank(np.zeros((3, 3))) == 0


@settings(max_examples=80, deadline=None)
@given(
    st.integers(1, 4),
    st.integers(0, 4),
    st.integers(0, 4),
    st.integers(0, 4),
    st.integers(0, 2**32 - 1),
)
def test_interchange_law(n, p, q, r, seed):
    if p + q + r == 0:
        return
    rng = np.random.default_rng(seed)
    assert interchange_check(*square(rng, DvbShape(n, p, q, r))) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 3))
def test_duality_rank_is_p_plus_q(p, q, r):
    if p + q + r == 0:
        return
    assert duality_iso(DvbShape(2, p, q, r)).rank == p + q
