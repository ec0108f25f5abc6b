"""Canonical maps between iterated tangent and cotangent bundles of a chart.

Conventions: ``theta = sum p_i dx^i``, ``omega = d theta = sum dp_i ^ dx^i`` and
``X_f = (df/dp, -df/dx)``.  With these, ``Theta o pi# = R_TM`` holds exactly,
and that identity is what the test suite uses to pin every sign.

Coordinate orderings:

* ``T^2M``: ``(x, v, w, z)`` with ``v`` the ``p_TM`` fibre and ``w`` the ``T(p_M)`` fibre
* ``T(T*M)``: ``(x, p, dx, dp)``
* ``T*(TM)``: ``(x, v, alpha, beta)``; ``alpha`` pairs ``dx``, ``beta`` pairs ``dv``
* ``T*(A*)``: ``(x, kappa, alpha, a)``; ``T*(A)``: ``(x, a, alpha, phi)``
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bundles import (
    BundleShape,
    CotangentEElement,
    TEElement,
    TEStarElement,
    horizontal_dual_of_TE,
    tangent_pairing,
    vertical_dual_of_TE,
)
from .dvb import _vec, dual_pairing
from .errors import DimensionError
from .jets import Affine, Jet2, SmoothMap, eval_jet, exterior_derivative, tangent_map

__all__ = [
    "T2MElement",
    "CotangentElement",
    "TangentCotangentElement",
    "CotangentTangentElement",
    "CotangentCotangentElement",
    "CotangentOfDual",
    "CotangentOfBundle",
    "ConstantTwoForm",
    "canonical_involution",
    "second_tangent_map",
    "j_naturality_residual",
    "liouville_form",
    "liouville_field",
    "canonical_symplectic",
    "poisson_anchor_canonical",
    "tulczyjew",
    "tulczyjew_closed_form",
    "tulczyjew_duality_residual",
    "theta_matrix",
    "pin_r_map",
    "r_map",
    "r_matrix",
    "r_anti_symplectic_residual",
    "as_cotangent_of_dual",
    "anchor_composite_residual",
    "tangent_lift_two_form",
    "theta_symplectomorphism_residual",
    "theta_poisson_residual",
]


def _init(obj, names, match):
    for name in names:
        object.__setattr__(obj, name, _vec(getattr(obj, name), name=name))
    if match and len({getattr(obj, name).shape for name in match}) != 1:
        raise DimensionError(f"{type(obj).__name__}: {', '.join(match)} must share a dimension")


def _maxabs(u) -> float:
    return float(np.max(np.abs(u), initial=0.0))


@dataclass(frozen=True, eq=False)
class T2MElement:
    x: np.ndarray
    v: np.ndarray
    w: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        _init(self, ("x", "v", "w", "z"), ("x", "v", "w", "z"))

    @classmethod
    def from_jet(cls, j: Jet2) -> "T2MElement":
        return cls(j.x, j.ds, j.dt, j.dsdt)

    def to_jet(self) -> Jet2:
        return Jet2(self.x, self.v, self.w, self.z)

    def p_TM(self) -> tuple[np.ndarray, np.ndarray]:
        return self.x, self.v

    def T_pM(self) -> tuple[np.ndarray, np.ndarray]:
        return self.x, self.w

    def as_te(self) -> TEElement:
        """View as ``TE`` with ``E = TM``: fibre point ``v``, base velocity ``w``."""
        return TEElement(self.x, self.v, self.w, self.z)

    def flat(self) -> np.ndarray:
        return np.concatenate([self.x, self.v, self.w, self.z])


@dataclass(frozen=True, eq=False)
class CotangentElement:
    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        _init(self, ("x", "p"), ("x", "p"))


@dataclass(frozen=True, eq=False)
class TangentCotangentElement:
    x: np.ndarray
    p: np.ndarray
    dx: np.ndarray
    dp: np.ndarray

    def __post_init__(self):
        _init(self, ("x", "p", "dx", "dp"), ("x", "p", "dx", "dp"))

    def as_testar(self) -> TEStarElement:
        return TEStarElement(self.x, self.p, self.dx, self.dp)

    def flat(self) -> np.ndarray:
        return np.concatenate([self.x, self.p, self.dx, self.dp])


@dataclass(frozen=True, eq=False)
class CotangentTangentElement:
    x: np.ndarray
    v: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        _init(self, ("x", "v", "alpha", "beta"), ("x", "v", "alpha", "beta"))

    def pair(self, dx, dv) -> float:
        return float(self.alpha @ np.asarray(dx) + self.beta @ np.asarray(dv))

    def flat(self) -> np.ndarray:
        return np.concatenate([self.x, self.v, self.alpha, self.beta])


@dataclass(frozen=True, eq=False)
class CotangentCotangentElement:
    """Covector at ``(x, p)`` in ``T*M``; ``alpha`` pairs ``dx``, ``beta`` pairs ``dp``."""

    x: np.ndarray
    p: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        _init(self, ("x", "p", "alpha", "beta"), ("x", "p", "alpha", "beta"))

    def flat(self) -> np.ndarray:
        return np.concatenate([self.x, self.p, self.alpha, self.beta])


@dataclass(frozen=True, eq=False)
class CotangentOfDual:
    """Element of ``T*(A*)`` at ``(x, kappa)``; ``alpha`` pairs ``dx``, ``a`` pairs ``dkappa``."""

    x: np.ndarray
    kappa: np.ndarray
    alpha: np.ndarray
    a: np.ndarray

    def __post_init__(self):
        _init(self, ("x", "kappa", "alpha", "a"), ())
        if self.x.shape != self.alpha.shape or self.kappa.shape != self.a.shape:
            raise DimensionError("covector components must match the point")

    def flat(self) -> np.ndarray:
        return np.concatenate([self.x, self.kappa, self.alpha, self.a])


@dataclass(frozen=True, eq=False)
class CotangentOfBundle:
    """Element of ``T*(A)`` at ``(x, a)``; ``alpha`` pairs ``dx``, ``phi`` pairs ``da``."""

    x: np.ndarray
    a: np.ndarray
    alpha: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        _init(self, ("x", "a", "alpha", "phi"), ())
        if self.x.shape != self.alpha.shape or self.a.shape != self.phi.shape:
            raise DimensionError("covector components must match the point")

    def flat(self) -> np.ndarray:
        return np.concatenate([self.x, self.a, self.alpha, self.phi])


@dataclass(frozen=True, eq=False)
class ConstantTwoForm:
    """``omega(u, v) = u^T M v`` with ``M`` antisymmetric."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError("a 2-form matrix must be square")
        if not np.array_equal(m, -m.T):
            raise ValueError("matrix is not antisymmetric")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, u, v) -> float:
        return float(np.asarray(u) @ self.matrix @ np.asarray(v))

    def pullback(self, linear_map) -> np.ndarray:
        """Matrix of ``L^* omega``; returned raw since rounding can break exact antisymmetry."""
        L = np.asarray(linear_map, dtype=float)
        return L.T @ self.matrix @ L

    def bivector(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)


# (1) the canonical involution ------------------------------------------------


def canonical_involution(xi: T2MElement) -> T2MElement:
    """``J``: reparametrize the square by ``(s, t) -> (t, s)``."""
    return T2MElement.from_jet(xi.to_jet().swap())


def second_tangent_map(f: SmoothMap, xi: T2MElement) -> T2MElement:
    """``T^2 f`` in coordinates."""
    return T2MElement.from_jet(eval_jet(f, xi.to_jet()))


def j_naturality_residual(f: SmoothMap, xi: T2MElement) -> float:
    """``max |J(T^2 f(xi)) - T^2 f(J(xi))|``."""
    lhs = canonical_involution(second_tangent_map(f, xi))
    rhs = second_tangent_map(f, canonical_involution(xi))
    return _maxabs(lhs.flat() - rhs.flat())


# (2) Liouville form, symplectic form, Poisson anchor --------------------------


def liouville_form(at: TangentCotangentElement) -> float:
    """``theta(eta) = <p, T(c)(eta)> = <p, dx>``."""
    return float(at.p @ at.dx)


def liouville_field(n: int) -> Affine:
    """Components of ``theta`` on the chart ``(x, p)`` of ``T*M``."""
    m = np.zeros((2 * n, 2 * n))
    m[:n, n:] = np.eye(n)
    return Affine(m)


def canonical_symplectic(n: int) -> ConstantTwoForm:
    """``omega = d theta`` on ``(x, p)``, by differentiating ``theta`` with jets."""
    if n < 1:
        raise DimensionError("need n >= 1")
    d_theta = exterior_derivative(liouville_field(n), np.zeros(2 * n))
    return ConstantTwoForm(d_theta)


def _canonical_closed_form(n: int) -> np.ndarray:
    m = np.zeros((2 * n, 2 * n))
    m[:n, n:] = -np.eye(n)
    m[n:, :n] = np.eye(n)
    return m


def poisson_anchor_canonical(sample: CotangentCotangentElement) -> TangentCotangentElement:
    """``pi#`` for ``omega``: the covector ``(alpha, beta)`` goes to ``omega^{-1} (alpha, beta)``."""
    n = len(sample.x)
    bivector = canonical_symplectic(n).bivector()
    vel = bivector @ np.concatenate([sample.alpha, sample.beta])
    return TangentCotangentElement(sample.x, sample.p, vel[:n], vel[n:])


# (3) the Tulczyjew map --------------------------------------------------------


def _admissible_basis(xi: TangentCotangentElement):
    """Basis of ``T(TM)`` over the point ``T(c)(xi) = (x, dx)`` of ``TM``."""
    n = len(xi.x)
    zero = np.zeros(n)
    for i in range(n):
        yield T2MElement(xi.x, xi.dx, np.eye(n)[i], zero)
    for i in range(n):
        yield T2MElement(xi.x, xi.dx, zero, np.eye(n)[i])


def tulczyjew(xi: TangentCotangentElement) -> CotangentTangentElement:
    """``Theta``, the covector on ``TM`` defined by ``<Theta xi, eta> = <<J eta, xi>>``.

    Components are read off by pairing against a basis of admissible ``eta``.
    """
    n = len(xi.x)
    coeffs = np.array(
        [tangent_pairing(canonical_involution(eta).as_te(), xi.as_testar()) for eta in _admissible_basis(xi)]
    )
    return CotangentTangentElement(xi.x, xi.dx, coeffs[:n], coeffs[n:])


def tulczyjew_closed_form(xi: TangentCotangentElement) -> CotangentTangentElement:
    return CotangentTangentElement(xi.x, xi.dx, xi.dp, xi.p)


def tulczyjew_duality_residual(xi: TangentCotangentElement, etas=None) -> float:
    """Max gap in ``<Theta xi, eta> = <<J eta, xi>>`` over admissible ``eta`` (default: a basis)."""
    theta = tulczyjew(xi)
    etas = list(_admissible_basis(xi)) if etas is None else etas
    gaps = [theta.pair(eta.w, eta.z) - tangent_pairing(canonical_involution(eta).as_te(), xi.as_testar()) for eta in etas]
    return _maxabs(np.array(gaps))


def theta_matrix(n: int) -> np.ndarray:
    """``Theta`` is linear in these coordinates; columns are images of unit vectors."""
    cols = []
    for u in np.eye(4 * n):
        xi = TangentCotangentElement(u[:n], u[n : 2 * n], u[2 * n : 3 * n], u[3 * n :])
        cols.append(tulczyjew(xi).flat())
    return np.array(cols).T.reshape(4 * n, 4 * n)


# R_A ----------------------------------------------------------------------------


def _pinned_covector(shape: BundleShape, Phi: CotangentOfDual) -> CotangentOfBundle:
    # T*(A*) is T*E for E = A*, and T(A) is T(E*); both are duals of TE.
    # The reversed order of the common-lift pairing is the one that induces
    # -id on the core T*M.
    n, k = shape.n, shape.k
    vdual = vertical_dual_of_TE(BundleShape(n, k)).forward(CotangentEElement(Phi.x, Phi.kappa, Phi.alpha, Phi.a))
    hdual = horizontal_dual_of_TE(BundleShape(n, k)).forward
    values = []
    for u in np.eye(n + k):
        Psi = hdual(TEStarElement(Phi.x, Phi.a, u[:n], u[n:]))
        values.append(dual_pairing(vdual, Psi, reverse=True))
    values = np.array(values)
    return CotangentOfBundle(Phi.x, Phi.a, values[:n], values[n:])


def pin_r_map(shape: BundleShape) -> np.ndarray:
    """Solve for the matrix of ``R_A`` from the pairing identifications.

    Columns are the images of unit vectors of ``T*(A*)``; the result is then
    checked for linearity on a random element by least squares.
    """
    n, k = shape.n, shape.k
    size = 2 * (n + k)

    def image(u):
        Phi = CotangentOfDual(u[:n], u[n : n + k], u[n + k : 2 * n + k], u[2 * n + k :])
        return _pinned_covector(shape, Phi).flat()

    basis = np.eye(size)
    images = np.array([image(u) for u in basis])
    matrix, *_ = np.linalg.lstsq(basis, images, rcond=None)
    matrix = matrix.T
    probe = np.random.default_rng(0).uniform(-1, 1, size)
    if not np.allclose(matrix @ probe, image(probe), atol=1e-12):
        raise ArithmeticError("pinned map is not linear")
    return matrix


def r_map(shape: BundleShape, Phi: CotangentOfDual) -> CotangentOfBundle:
    """``R_A: T*(A*) -> T*(A)``, ``(x, kappa; alpha, a) -> (x, a; -alpha, kappa)``."""
    if Phi.x.shape != (shape.n,) or Phi.kappa.shape != (shape.k,):
        raise DimensionError("element does not match the bundle shape")
    return CotangentOfBundle(Phi.x, Phi.a, -Phi.alpha, Phi.kappa)


def r_matrix(shape: BundleShape) -> np.ndarray:
    n, k = shape.n, shape.k
    m = np.zeros((2 * (n + k), 2 * (n + k)))
    i_x, i_kappa, i_alpha, i_a = 0, n, n + k, 2 * n + k
    m[0:n, i_x : i_x + n] = np.eye(n)  # x
    m[n : n + k, i_a : i_a + k] = np.eye(k)  # a
    m[n + k : 2 * n + k, i_alpha : i_alpha + n] = -np.eye(n)  # alpha'
    m[2 * n + k :, i_kappa : i_kappa + k] = np.eye(k)  # phi'
    return m


def r_anti_symplectic_residual(shape: BundleShape) -> float:
    """``max |R^* omega_{T*A} + omega_{T*(A*)}|``."""
    omega = canonical_symplectic(shape.n + shape.k)
    return _maxabs(omega.pullback(r_matrix(shape)) + omega.matrix)


def as_cotangent_of_dual(sample: CotangentCotangentElement) -> CotangentOfDual:
    """``T*(T*M)`` is ``T*(A*)`` for ``A = TM``."""
    return CotangentOfDual(sample.x, sample.p, sample.alpha, sample.beta)


def anchor_composite_residual(sample: CotangentCotangentElement) -> float:
    """``max |Theta(pi#(sample)) - R_TM(sample)|``."""
    n = len(sample.x)
    lhs = tulczyjew(poisson_anchor_canonical(sample))
    rhs = r_map(BundleShape(n, n), as_cotangent_of_dual(sample))
    return _maxabs(lhs.flat() - rhs.flat())


# tangent lift of the symplectic form -------------------------------------------


def tangent_lift_two_form(omega: ConstantTwoForm) -> ConstantTwoForm:
    """``omega^T`` on ``(y, ydot)`` from the lift rules on coordinate fields.

    ``omega^T(X^C, Y^C) = (omega(X, Y))^C`` and ``omega^T(X^C, Y^V) = omega(X, Y)``;
    pairs of vertical lifts vanish.  The complete lift of a function
    ``g`` is ``dg(ydot)``, taken with jets.
    """
    if not isinstance(omega, ConstantTwoForm):
        raise TypeError("only constant-coefficient forms can be lifted")
    d = omega.dim
    y, ydot = np.zeros(d), np.ones(d)
    lifted = np.zeros((2 * d, 2 * d))
    eye = np.eye(d)
    for i in range(d):
        for j in range(d):
            coefficient = Affine.constant(omega(eye[i], eye[j]), d)
            lifted[i, j] = tangent_map(coefficient, y, ydot)[1][0]  # (C, C)
            lifted[i, d + j] = coefficient(y)[0]  # (C, V)
            lifted[d + i, j] = coefficient(y)[0]  # (V, C)
    return ConstantTwoForm(lifted)


def theta_symplectomorphism_residual(n: int) -> float:
    """``max |Theta^* omega_{T*(TM)} - omega^T|``."""
    pulled = canonical_symplectic(2 * n).pullback(theta_matrix(n))
    return _maxabs(pulled - tangent_lift_two_form(canonical_symplectic(n)).matrix)


def theta_poisson_residual(n: int) -> float:
    """``Theta`` carries the inverse of ``omega^T`` to the inverse of ``omega_{T*(TM)}``."""
    L = theta_matrix(n)
    pushed = L @ tangent_lift_two_form(canonical_symplectic(n)).bivector() @ L.T
    return _maxabs(pushed - canonical_symplectic(2 * n).bivector())
