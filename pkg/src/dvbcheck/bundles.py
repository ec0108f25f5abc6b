"""A trivial vector bundle ``E = R^n x R^k`` and its tangent prolongation ``TE``.

``TE`` carries two vector bundle structures: over ``E`` (the ordinary tangent
bundle, projection ``p_E``) and over ``TM`` (the prolongation, projection
``T(q)``).  Fibre and base coordinates are kept in separate named fields so the
two structures never get mixed up, even when ``k == n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dvb import DvbElement, DvbHDualElement, DvbShape, DvbVDualElement, _vec, pivoted_rank, same
from .errors import DimensionError, UndefinedOperation

__all__ = [
    "BundleShape",
    "TEElement",
    "TEStarElement",
    "CotangentEElement",
    "vertical_lift",
    "tangent_of_zero_section",
    "add_over_E",
    "add_over_TM",
    "scale_over_E",
    "scale_over_TM",
    "zero_section_split",
    "tangent_pairing",
    "tangent_pairing_matrix",
    "cotangent_pairing",
    "Identification",
    "te_as_dvb",
    "vertical_dual_of_TE",
    "horizontal_dual_of_TE",
]


@dataclass(frozen=True)
class BundleShape:
    n: int  # base
    k: int  # fibre

    def __post_init__(self):
        if self.n < 0 or self.k < 1:
            raise DimensionError("need n >= 0 and k >= 1")


def _fields(obj, names):
    for name in names:
        object.__setattr__(obj, name, _vec(getattr(obj, name), name=name))


@dataclass(frozen=True, eq=False)
class TEElement:
    """Tangent vector ``(de, dx)`` to ``E`` at ``(x, e)``."""

    x: np.ndarray
    e: np.ndarray
    dx: np.ndarray
    de: np.ndarray

    def __post_init__(self):
        _fields(self, ("x", "e", "dx", "de"))
        if self.x.shape != self.dx.shape or self.e.shape != self.de.shape:
            raise DimensionError("base and fibre velocities must match their positions")

    @classmethod
    def of(cls, shape: BundleShape, x, e, dx, de) -> "TEElement":
        return cls(_vec(x, shape.n, "x"), _vec(e, shape.k, "e"), _vec(dx, shape.n, "dx"), _vec(de, shape.k, "de"))

    def p_E(self) -> tuple[np.ndarray, np.ndarray]:
        return self.x, self.e

    def T_q(self) -> tuple[np.ndarray, np.ndarray]:
        return self.x, self.dx

    def flat(self) -> np.ndarray:
        return np.concatenate([self.x, self.e, self.dx, self.de])


@dataclass(frozen=True, eq=False)
class TEStarElement:
    """Tangent vector ``(dp, dx)`` to ``E*`` at ``(x, p)``."""

    x: np.ndarray
    p: np.ndarray
    dx: np.ndarray
    dp: np.ndarray

    def __post_init__(self):
        _fields(self, ("x", "p", "dx", "dp"))
        if self.x.shape != self.dx.shape or self.p.shape != self.dp.shape:
            raise DimensionError("base and fibre velocities must match their positions")

    def p_Estar(self) -> tuple[np.ndarray, np.ndarray]:
        return self.x, self.p

    def T_q(self) -> tuple[np.ndarray, np.ndarray]:
        return self.x, self.dx

    def flat(self) -> np.ndarray:
        return np.concatenate([self.x, self.p, self.dx, self.dp])


@dataclass(frozen=True, eq=False)
class CotangentEElement:
    """Covector at ``(x, e)``: ``mu`` pairs with ``dx``, ``phi`` with ``de``."""

    x: np.ndarray
    e: np.ndarray
    mu: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        _fields(self, ("x", "e", "mu", "phi"))
        if self.x.shape != self.mu.shape or self.e.shape != self.phi.shape:
            raise DimensionError("covector components must match the point")

    def to_E(self) -> tuple[np.ndarray, np.ndarray]:
        return self.x, self.e

    def to_Estar(self) -> tuple[np.ndarray, np.ndarray]:
        return self.x, self.phi

    def flat(self) -> np.ndarray:
        return np.concatenate([self.x, self.e, self.mu, self.phi])


def vertical_lift(shape: BundleShape, e1, e2, x) -> TEElement:
    """Velocity of ``t -> e1 + t e2`` in the fibre over ``x``."""
    return TEElement.of(shape, x, e1, np.zeros(shape.n), e2)


def tangent_of_zero_section(shape: BundleShape, x, dx) -> TEElement:
    """``T(0)(x, dx)``."""
    return TEElement.of(shape, x, np.zeros(shape.k), dx, np.zeros(shape.k))


def add_over_E(xi: TEElement, eta: TEElement) -> TEElement:
    if not (same(xi.x, eta.x) and same(xi.e, eta.e)):
        raise UndefinedOperation("tangent vectors at different points of E")
    return TEElement(xi.x, xi.e, xi.dx + eta.dx, xi.de + eta.de)


def add_over_TM(xi: TEElement, eta: TEElement) -> TEElement:
    """Prolongation addition ``T(+)``; needs a common ``(x, dx)``."""
    if not (same(xi.x, eta.x) and same(xi.dx, eta.dx)):
        raise UndefinedOperation("tangent vectors over different points of TM")
    return TEElement(xi.x, xi.e + eta.e, xi.dx, xi.de + eta.de)


def scale_over_E(xi: TEElement, t: float) -> TEElement:
    return TEElement(xi.x, xi.e, t * xi.dx, t * xi.de)


def scale_over_TM(xi: TEElement, t: float) -> TEElement:
    return TEElement(xi.x, t * xi.e, xi.dx, t * xi.de)


def zero_section_split(xi: TEElement) -> tuple[tuple[np.ndarray, np.ndarray], np.ndarray]:
    """Write a vector along the zero section as ``T(0)(x, dx) + e``.

    Returns ``((x, dx), de)``.
    """
    if xi.e.any():
        raise UndefinedOperation("tangent vector is not based on the zero section")
    return (xi.x, xi.dx), xi.de


def tangent_pairing(xi: TEElement, eta: TEStarElement) -> float:
    """Derivative of the fibre pairing: ``<de, p> + <e, dp>``."""
    if not (same(xi.x, eta.x) and same(xi.dx, eta.dx)):
        raise UndefinedOperation("elements lie over different points of TM")
    if xi.e.shape != eta.p.shape:
        raise DimensionError("fibre dimensions differ")
    return float(xi.de @ eta.p + xi.e @ eta.dp)


def tangent_pairing_matrix(shape: BundleShape) -> tuple[np.ndarray, int]:
    """Bilinear form on ``(e, de) x (p, dp)`` over a point of ``TM``, and its rank."""
    k = shape.k
    x = np.zeros(shape.n)
    basis = np.eye(2 * k)
    m = np.array(
        [
            [
                tangent_pairing(TEElement(x, u[:k], x, u[k:]), TEStarElement(x, w[:k], x, w[k:]))
                for w in basis
            ]
            for u in basis
        ]
    )
    return m, pivoted_rank(m)


def cotangent_pairing(theta: CotangentEElement, xi: TEElement) -> float:
    """Canonical pairing of ``T*E`` with ``TE`` over ``E``."""
    if not (same(theta.x, xi.x) and same(theta.e, xi.e)):
        raise UndefinedOperation("covector and vector at different points of E")
    return float(theta.mu @ xi.dx + theta.phi @ xi.de)


# identifications with the abstract model --------------------------------------


@dataclass(frozen=True)
class Identification:
    """A dimension signature plus mutually inverse element maps."""

    shape: DvbShape
    forward: Callable
    backward: Callable


def te_as_dvb(shape: BundleShape) -> Identification:
    """``TE`` as a double vector bundle with sides ``E``, ``TM`` and core ``E``."""

    def forward(xi: TEElement) -> DvbElement:
        return DvbElement(xi.x, xi.e, xi.dx, xi.de)

    def backward(d: DvbElement) -> TEElement:
        return TEElement(d.x, d.a, d.b, d.c)

    return Identification(DvbShape(n=shape.n, p=shape.k, q=shape.n, r=shape.k), forward, backward)


def vertical_dual_of_TE(shape: BundleShape) -> Identification:
    """``T*E`` as the vertical dual of ``TE``: sides ``E`` and ``E*``, core ``T*M``.

    The fibre covector ``phi`` of ``T*E`` is the ``C*`` coordinate; the base
    covector ``mu`` pairs the side ``B = TM``.
    """

    def forward(theta: CotangentEElement) -> DvbVDualElement:
        return DvbVDualElement(theta.x, theta.e, theta.phi, theta.mu)

    def backward(Phi: DvbVDualElement) -> CotangentEElement:
        return CotangentEElement(Phi.x, Phi.a, Phi.phi, Phi.kappa)

    return Identification(te_as_dvb(shape).shape, forward, backward)


def horizontal_dual_of_TE(shape: BundleShape) -> Identification:
    """``T(E*)`` as the horizontal dual of ``TE`` through the tangent pairing."""

    def forward(eta: TEStarElement) -> DvbHDualElement:
        return DvbHDualElement(eta.x, eta.dx, eta.p, eta.dp)

    def backward(Psi: DvbHDualElement) -> TEStarElement:
        return TEStarElement(Psi.x, Psi.kappa, Psi.b, Psi.psi)

    return Identification(te_as_dvb(shape).shape, forward, backward)
