import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dvbcheck import canonical as can
from dvbcheck.bundles import BundleShape
from dvbcheck.errors import DimensionError
from dvbcheck.jets import Affine, Quadratic, fd_jvp
from dvbcheck.suites import diffeomorphisms


def t2m(rng, n):
    return can.T2MElement(*rng.uniform(-1, 1, (4, n)))


# canonical involution ---------------------------------------------------------------


def test_involution_example():
    xi = can.T2MElement([0, 0], [1, 2], [3, 4], [5, 6])
    out = can.canonical_involution(xi)
    np.testing.assert_array_equal(out.flat(), [0, 0, 3, 4, 1, 2, 5, 6])


def test_symmetric_square_is_fixed(rng):
    v = rng.uniform(-1, 1, 3)
    xi = can.T2MElement(rng.uniform(-1, 1, 3), v, v, rng.uniform(-1, 1, 3))
    np.testing.assert_array_equal(can.canonical_involution(xi).flat(), xi.flat())


def test_involution_squares_to_identity_and_swaps_projections(rng):
    for _ in range(200):
        xi = t2m(rng, int(rng.integers(1, 6)))
        jxi = can.canonical_involution(xi)
        np.testing.assert_array_equal(can.canonical_involution(jxi).flat(), xi.flat())
        np.testing.assert_array_equal(np.concatenate(jxi.p_TM()), np.concatenate(xi.T_pM()))
        np.testing.assert_array_equal(np.concatenate(jxi.T_pM()), np.concatenate(xi.p_TM()))


def test_naturality_identity_and_linear(rng):
    xi = t2m(rng, 3)
    assert can.j_naturality_residual(Affine.identity(3), xi) == 0.0
    A = Affine(rng.uniform(-1, 1, (3, 3)), rng.uniform(-1, 1, 3))
    assert can.j_naturality_residual(A, xi) <= 1e-15


def test_naturality_cubic_diffeo(rng):
    for _ in range(100):
        xi = t2m(rng, 3)
        assert can.j_naturality_residual(diffeomorphisms(3)["cubic"], xi) <= 1e-12


def test_second_tangent_map_against_finite_differences(rng):
    # the mixed part of T^2 f at (x, v, w, z) is d/dt of Df(x + t w)(v + t z)
    for f in diffeomorphisms(3).values():
        xi = t2m(rng, 3)
        out = can.second_tangent_map(f, xi)
        np.testing.assert_allclose(out.v, fd_jvp(f, xi.x, xi.v), atol=1e-8)
        np.testing.assert_allclose(out.w, fd_jvp(f, xi.x, xi.w), atol=1e-8)
        h = 1e-5
        plus = fd_jvp(f, xi.x + h * xi.w, xi.v + h * xi.z, h=1e-5)
        minus = fd_jvp(f, xi.x - h * xi.w, xi.v - h * xi.z, h=1e-5)
        np.testing.assert_allclose(out.z, (plus - minus) / (2 * h), atol=1e-4)


def test_builtin_diffeomorphisms_are_invertible_on_the_box(rng):
    from dvbcheck.jets import jacobian

    for n in (1, 3, 5):
        for name, f in diffeomorphisms(n).items():
            for _ in range(20):
                x = rng.uniform(-1, 1, n)
                J = jacobian(f, x)
                # identity plus a contraction: singular values bounded away from 0
                assert np.linalg.norm(J - np.eye(n), 2) < 1.0, name


# Liouville form and symplectic structure ---------------------------------------------


def test_liouville_examples():
    el = can.TangentCotangentElement([0, 0], [1, 2], [3, 4], [9, 9])
    assert can.liouville_form(el) == 11.0
    assert can.liouville_form(can.TangentCotangentElement([0, 0], [1, 2], [0, 0], [9, 9])) == 0.0
    assert can.liouville_form(can.TangentCotangentElement([0, 0], [0, 0], [3, 4], [9, 9])) == 0.0


def test_canonical_symplectic_n1():
    np.testing.assert_array_equal(can.canonical_symplectic(1).matrix, [[0, -1], [1, 0]])


def test_canonical_symplectic_matches_closed_form(rng):
    for n in range(1, 5):
        omega = can.canonical_symplectic(n)
        np.testing.assert_allclose(omega.matrix, can._canonical_closed_form(n), atol=1e-12)
        u = rng.uniform(-1, 1, 2 * n)
        assert omega(u, u) == pytest.approx(0.0, abs=1e-15)


def test_canonical_symplectic_needs_positive_dim():
    with pytest.raises(DimensionError):
        can.canonical_symplectic(0)


def test_poisson_anchor_examples():
    out = can.poisson_anchor_canonical(can.CotangentCotangentElement([0.5], [0.2], [2.0], [3.0]))
    assert (out.dx[0], out.dp[0]) == (3.0, -2.0)
    # f(x, p) = p: alpha = df/dx = 0, beta = df/dp = 1 -> free motion
    out = can.poisson_anchor_canonical(can.CotangentCotangentElement([0.5], [0.2], [0.0], [1.0]))
    assert (out.dx[0], out.dp[0]) == (1.0, 0.0)
    out = can.poisson_anchor_canonical(can.CotangentCotangentElement([0.5], [0.2], [0.0], [0.0]))
    assert not out.dx.any() and not out.dp.any()


def test_poisson_anchor_inverts_the_symplectic_form(rng):
    # omega(u, pi#(a)) = a(u) for every covector a and vector u
    n = 3
    omega = can.canonical_symplectic(n)
    for _ in range(20):
        x, p, alpha, beta = rng.uniform(-1, 1, (4, n))
        v = can.poisson_anchor_canonical(can.CotangentCotangentElement(x, p, alpha, beta))
        u = rng.uniform(-1, 1, 2 * n)
        assert omega(u, np.r_[v.dx, v.dp]) == pytest.approx(np.r_[alpha, beta] @ u, abs=1e-14)


# Tulczyjew map ---------------------------------------------------------------------


def test_tulczyjew_example():
    out = can.tulczyjew(can.TangentCotangentElement([1.0], [2.0], [3.0], [4.0]))
    np.testing.assert_array_equal(out.flat(), [1.0, 3.0, 4.0, 2.0])


def test_tulczyjew_static_element():
    out = can.tulczyjew(can.TangentCotangentElement([1.0, 2.0], [3.0, 4.0], [0.0, 0.0], [0.0, 0.0]))
    np.testing.assert_array_equal(out.v, [0.0, 0.0])
    np.testing.assert_array_equal(out.alpha, [0.0, 0.0])
    np.testing.assert_array_equal(out.beta, [3.0, 4.0])


def test_tulczyjew_duality_on_random_admissible_vectors(rng):
    for _ in range(100):
        n = int(rng.integers(1, 5))
        xi = can.TangentCotangentElement(*rng.uniform(-1, 1, (4, n)))
        etas = [can.T2MElement(xi.x, xi.dx, *rng.uniform(-1, 1, (2, n))) for _ in range(5)]
        assert can.tulczyjew_duality_residual(xi, etas) <= 1e-12
        np.testing.assert_array_equal(can.tulczyjew(xi).flat(), can.tulczyjew_closed_form(xi).flat())


def test_tangent_lift_n1():
    lifted = can.tangent_lift_two_form(can.canonical_symplectic(1)).matrix
    expected = np.zeros((4, 4))
    expected[0, 3], expected[3, 0] = -1, 1  # x <-> dp
    expected[1, 2], expected[2, 1] = 1, -1  # p <-> dx
    np.testing.assert_array_equal(lifted, expected)


def test_tangent_lift_properties(rng):
    lifted = can.tangent_lift_two_form(can.canonical_symplectic(2))
    u = rng.uniform(-1, 1, 8)
    assert lifted(u, u) == pytest.approx(0.0, abs=1e-15)
    flip = np.roll(np.eye(8), 4, axis=0)  # (x, p, dx, dp) <-> (dx, dp, x, p)
    np.testing.assert_array_equal(lifted.pullback(flip), lifted.matrix)


def test_tangent_lift_rejects_nonconstant_forms():
    with pytest.raises(TypeError):
        can.tangent_lift_two_form(np.eye(2))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_theta_is_symplectic(n):
    assert can.theta_symplectomorphism_residual(n) <= 1e-12
    assert can.theta_poisson_residual(n) <= 1e-12
    pulled = can.canonical_symplectic(2 * n).pullback(can.theta_matrix(n))
    np.testing.assert_array_equal(pulled, -pulled.T)


# the map R -------------------------------------------------------------------------


def test_r_map_example():
    sh = BundleShape(1, 2)
    out = can.r_map(sh, can.CotangentOfDual([0.0], [1.0, 2.0], [3.0], [4.0, 5.0]))
    np.testing.assert_array_equal(out.flat(), [0.0, 4.0, 5.0, -3.0, 1.0, 2.0])


def test_r_map_on_core_is_minus_identity(rng):
    sh = BundleShape(3, 2)
    alpha = rng.uniform(-1, 1, 3)
    x = rng.uniform(-1, 1, 3)
    out = can.r_map(sh, can.CotangentOfDual(x, np.zeros(2), alpha, np.zeros(2)))
    np.testing.assert_array_equal(out.alpha, -alpha)
    assert not out.a.any() and not out.phi.any()


@pytest.mark.parametrize("n,k", [(1, 1), (1, 2), (2, 3), (3, 1)])
def test_r_is_pinned_by_the_pairings(n, k):
    sh = BundleShape(n, k)
    np.testing.assert_allclose(can.pin_r_map(sh), can.r_matrix(sh), atol=1e-12)
    assert np.linalg.matrix_rank(can.r_matrix(sh)) == 2 * (n + k)
    assert can.r_anti_symplectic_residual(sh) <= 1e-12


def test_r_map_checks_shape():
    with pytest.raises(DimensionError):
        can.r_map(BundleShape(1, 2), can.CotangentOfDual([0.0], [1.0], [3.0], [4.0]))


def test_composite_example():
    sample = can.CotangentCotangentElement([0.3], [0.7], [2.0], [3.0])
    lhs = can.tulczyjew(can.poisson_anchor_canonical(sample))
    np.testing.assert_array_equal(lhs.flat(), [0.3, 3.0, -2.0, 0.7])
    rhs = can.r_map(BundleShape(1, 1), can.as_cotangent_of_dual(sample))
    np.testing.assert_array_equal(rhs.flat(), lhs.flat())


def test_composite_zero_covector():
    sample = can.CotangentCotangentElement([0.3], [0.7], [0.0], [0.0])
    assert can.anchor_composite_residual(sample) == 0.0


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_composite_on_random_covectors(n, seed):
    rng = np.random.default_rng(seed)
    sample = can.CotangentCotangentElement(*rng.uniform(-1, 1, (4, n)))
    assert can.anchor_composite_residual(sample) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_naturality_on_random_quadratic_maps(n, seed):
    rng = np.random.default_rng(seed)
    f = Quadratic.random(rng, n, cod=n)
    assert can.j_naturality_residual(f, t2m(rng, n)) <= 1e-12
