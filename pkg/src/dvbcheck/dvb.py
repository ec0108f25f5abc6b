"""Double vector bundles in a single trivializing chart.

An element ``d = (x; a, b; c)`` of ``D`` projects to ``(x, a)`` in the side
bundle ``A`` and to ``(x, b)`` in the side bundle ``B``; ``c`` is its core
coordinate.  ``D`` is a vector bundle over ``A`` (adds ``b`` and ``c`` with
``a`` fixed) and over ``B`` (adds ``a`` and ``c`` with ``b`` fixed).

The vertical dual ``D^{*V}`` is dual to ``D -> A``; its elements are
``(x; a, kappa; phi)`` with ``kappa`` pairing the core and ``phi`` pairing
``b``.  The horizontal dual ``D^{*H}`` is dual to ``D -> B``; its elements are
``(x; b, kappa; psi)`` with ``psi`` pairing ``a``.  Both duals fibre over the
dual core ``C*`` and are paired with each other through a common lift in ``D``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, UndefinedOperation

__all__ = [
    "DvbShape",
    "DvbElement",
    "DvbVDualElement",
    "DvbHDualElement",
    "add_over_A",
    "add_over_B",
    "scale_over_A",
    "scale_over_B",
    "interchange_check",
    "core_inject",
    "is_core",
    "pair_over_A",
    "pair_over_B",
    "lift",
    "dual_pairing",
    "add_vdual_over_core",
    "add_vdual_over_A",
    "add_hdual_over_core",
    "add_hdual_over_B",
    "DualityIso",
    "duality_iso",
    "pivoted_rank",
]

MATCH_TOL = 1e-12


def _vec(v, size: int | None = None, name: str = "vector") -> np.ndarray:
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if v.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional")
    if size is not None and v.shape[0] != size:
        raise DimensionError(f"{name} has length {v.shape[0]}, expected {size}")
    return v


def same(u: np.ndarray, v: np.ndarray) -> bool:
    """Coordinates agree up to rounding."""
    return u.shape == v.shape and bool(np.all(np.abs(u - v) <= MATCH_TOL * (1.0 + np.abs(u))))


@dataclass(frozen=True)
class DvbShape:
    n: int
    p: int
    q: int
    r: int

    def __post_init__(self):
        if min(self.n, self.p, self.q, self.r) < 0:
            raise DimensionError("dimensions must be non-negative")
        if self.p + self.q + self.r < 1:
            raise DimensionError("a double vector bundle needs p + q + r >= 1")


@dataclass(frozen=True, eq=False)
class DvbElement:
    x: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        for name in ("x", "a", "b", "c"):
            object.__setattr__(self, name, _vec(getattr(self, name), name=name))

    @classmethod
    def of(cls, shape: DvbShape, x, a, b, c) -> "DvbElement":
        return cls(_vec(x, shape.n, "x"), _vec(a, shape.p, "a"), _vec(b, shape.q, "b"), _vec(c, shape.r, "c"))

    @property
    def shape(self) -> DvbShape:
        return DvbShape(len(self.x), len(self.a), len(self.b), len(self.c))

    def to_A(self) -> tuple[np.ndarray, np.ndarray]:
        return self.x, self.a

    def to_B(self) -> tuple[np.ndarray, np.ndarray]:
        return self.x, self.b

    def flat(self) -> np.ndarray:
        return np.concatenate([self.x, self.a, self.b, self.c])


@dataclass(frozen=True, eq=False)
class DvbVDualElement:
    """Element of the vertical dual; ``phi`` pairs with ``b`` and ``kappa`` with ``c``."""

    x: np.ndarray
    a: np.ndarray
    kappa: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        for name in ("x", "a", "kappa", "phi"):
            object.__setattr__(self, name, _vec(getattr(self, name), name=name))

    def flat(self) -> np.ndarray:
        return np.concatenate([self.x, self.a, self.kappa, self.phi])


@dataclass(frozen=True, eq=False)
class DvbHDualElement:
    """Element of the horizontal dual; ``psi`` pairs with ``a`` and ``kappa`` with ``c``."""

    x: np.ndarray
    b: np.ndarray
    kappa: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        for name in ("x", "b", "kappa", "psi"):
            object.__setattr__(self, name, _vec(getattr(self, name), name=name))

    def flat(self) -> np.ndarray:
        return np.concatenate([self.x, self.b, self.kappa, self.psi])


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise UndefinedOperation(msg)


# the two vector bundle structures -------------------------------------------


def add_over_A(d1: DvbElement, d2: DvbElement) -> DvbElement:
    """Sum in ``D -> A``: defined when both lie over the same ``(x, a)``."""
    _require(same(d1.x, d2.x) and same(d1.a, d2.a), "elements do not lie over the same point of A")
    return DvbElement(d1.x, d1.a, d1.b + d2.b, d1.c + d2.c)


def add_over_B(d1: DvbElement, d2: DvbElement) -> DvbElement:
    """Sum in ``D -> B``: defined when both lie over the same ``(x, b)``."""
    _require(same(d1.x, d2.x) and same(d1.b, d2.b), "elements do not lie over the same point of B")
    return DvbElement(d1.x, d1.a + d2.a, d1.b, d1.c + d2.c)


def scale_over_A(d: DvbElement, t: float) -> DvbElement:
    return DvbElement(d.x, d.a, t * d.b, t * d.c)


def scale_over_B(d: DvbElement, t: float) -> DvbElement:
    return DvbElement(d.x, t * d.a, d.b, t * d.c)


def interchange_check(d1: DvbElement, d2: DvbElement, d3: DvbElement, d4: DvbElement) -> float:
    """Max-abs gap between ``(d1 +A d2) +B (d3 +A d4)`` and ``(d1 +B d3) +A (d2 +B d4)``.

    The quadruple must form a square: ``d1, d2`` and ``d3, d4`` share their
    ``a``; ``d1, d3`` and ``d2, d4`` share their ``b``.
    """
    xs = (d1.x, d2.x, d3.x, d4.x)
    _require(all(same(d1.x, x) for x in xs), "elements lie over different base points")
    _require(same(d1.a, d2.a) and same(d3.a, d4.a), "rows do not share a point of A")
    _require(same(d1.b, d3.b) and same(d2.b, d4.b), "columns do not share a point of B")
    lhs = add_over_B(add_over_A(d1, d2), add_over_A(d3, d4))
    rhs = add_over_A(add_over_B(d1, d3), add_over_B(d2, d4))
    return float(np.max(np.abs(lhs.flat() - rhs.flat()), initial=0.0))


def core_inject(shape: DvbShape, x, c) -> DvbElement:
    """``(x; 0, 0; c)``, an element of both kernels."""
    return DvbElement.of(shape, x, np.zeros(shape.p), np.zeros(shape.q), c)


def is_core(d: DvbElement) -> bool:
    return not d.a.any() and not d.b.any()


# duals and the pairing between them -----------------------------------------


def pair_over_A(Phi: DvbVDualElement, d: DvbElement) -> float:
    """Fibre pairing of ``D^{*V}`` with ``D`` over ``A``."""
    _require(same(Phi.x, d.x) and same(Phi.a, d.a), "covector and element lie over different points of A")
    return float(Phi.phi @ d.b + Phi.kappa @ d.c)


def pair_over_B(Psi: DvbHDualElement, d: DvbElement) -> float:
    """Fibre pairing of ``D^{*H}`` with ``D`` over ``B``."""
    _require(same(Psi.x, d.x) and same(Psi.b, d.b), "covector and element lie over different points of B")
    return float(Psi.psi @ d.a + Psi.kappa @ d.c)


def lift(Phi: DvbVDualElement, Psi: DvbHDualElement, core=None) -> DvbElement:
    """An element of ``D`` over ``Phi``'s point of ``A`` and ``Psi``'s point of ``B``."""
    c = np.zeros(len(Phi.kappa)) if core is None else _vec(core, len(Phi.kappa), "core")
    return DvbElement(Phi.x, Phi.a, Psi.b, c)


def dual_pairing(Phi: DvbVDualElement, Psi: DvbHDualElement, core=None, reverse: bool = False) -> float:
    """``<Phi, d>_A - <Psi, d>_B`` for a lift ``d``; ``reverse`` swaps the two terms.

    The result does not depend on the core part of the lift: the ``kappa``
    terms cancel.  ``core`` picks the lift (zero by default).
    """
    _require(same(Phi.x, Psi.x) and same(Phi.kappa, Psi.kappa), "Phi and Psi lie over different points of C*")
    d = lift(Phi, Psi, core)
    if reverse:
        return pair_over_B(Psi, d) - pair_over_A(Phi, d)
    return pair_over_A(Phi, d) - pair_over_B(Psi, d)


def add_vdual_over_core(P1: DvbVDualElement, P2: DvbVDualElement) -> DvbVDualElement:
    _require(same(P1.x, P2.x) and same(P1.kappa, P2.kappa), "not over the same point of C*")
    return DvbVDualElement(P1.x, P1.a + P2.a, P1.kappa, P1.phi + P2.phi)


def add_vdual_over_A(P1: DvbVDualElement, P2: DvbVDualElement) -> DvbVDualElement:
    _require(same(P1.x, P2.x) and same(P1.a, P2.a), "not over the same point of A")
    return DvbVDualElement(P1.x, P1.a, P1.kappa + P2.kappa, P1.phi + P2.phi)


def add_hdual_over_core(Q1: DvbHDualElement, Q2: DvbHDualElement) -> DvbHDualElement:
    _require(same(Q1.x, Q2.x) and same(Q1.kappa, Q2.kappa), "not over the same point of C*")
    return DvbHDualElement(Q1.x, Q1.b + Q2.b, Q1.kappa, Q1.psi + Q2.psi)


def add_hdual_over_B(Q1: DvbHDualElement, Q2: DvbHDualElement) -> DvbHDualElement:
    _require(same(Q1.x, Q2.x) and same(Q1.b, Q2.b), "not over the same point of B")
    return DvbHDualElement(Q1.x, Q1.b, Q1.kappa + Q2.kappa, Q1.psi + Q2.psi)


def pivoted_rank(m: np.ndarray, threshold: float = 1e-9) -> int:
    """Rank by Gaussian elimination with full pivoting."""
    a = np.array(m, dtype=float, copy=True)
    rank = 0
    rows, cols = a.shape
    for k in range(min(rows, cols)):
        sub = np.abs(a[k:, k:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= threshold:
            break
        i += k
        j += k
        a[[k, i]] = a[[i, k]]
        a[:, [k, j]] = a[:, [j, k]]
        a[k + 1 :] -= np.outer(a[k + 1 :, k] / a[k, k], a[k])
        rank += 1
    return rank


@dataclass(frozen=True)
class DualityIso:
    """Fibrewise pairing of ``D^{*V} -> C*`` with ``D^{*H} -> C*`` at one point of ``C*``.

    Rows index the fibre coordinates ``(phi; a)`` of ``D^{*V}``, columns the
    fibre coordinates ``(psi; b)`` of ``D^{*H}``.
    """

    shape: DvbShape
    matrix: np.ndarray
    rank: int
    additivity_vdual: float
    additivity_hdual: float

    @property
    def nondegenerate(self) -> bool:
        return self.rank == self.shape.p + self.shape.q


def duality_iso(shape: DvbShape, x=None, kappa=None, rng: np.random.Generator | None = None) -> DualityIso:
    """Assemble the pairing matrix by evaluating the pairing on fibre bases."""
    n, p, q, r = shape.n, shape.p, shape.q, shape.r
    x = np.zeros(n) if x is None else _vec(x, n, "x")
    kappa = np.zeros(r) if kappa is None else _vec(kappa, r, "kappa")
    rng = np.random.default_rng(0) if rng is None else rng

    def vdual(v):  # v = (phi; a)
        return DvbVDualElement(x, v[q:], kappa, v[:q])

    def hdual(w):  # w = (psi; b)
        return DvbHDualElement(x, w[p:], kappa, w[:p])

    eye_v, eye_h = np.eye(p + q), np.eye(p + q)
    matrix = np.array(
        [[dual_pairing(vdual(ev), hdual(eh)) for eh in eye_h] for ev in eye_v]
    ).reshape(p + q, p + q)

    v1, v2, w1, w2 = rng.uniform(-1, 1, (4, p + q))
    P1, P2, Q1, Q2 = vdual(v1), vdual(v2), hdual(w1), hdual(w2)
    add_v = abs(
        dual_pairing(add_vdual_over_core(P1, P2), Q1)
        - dual_pairing(P1, Q1)
        - dual_pairing(P2, Q1)
    )
    add_h = abs(
        dual_pairing(P1, add_hdual_over_core(Q1, Q2))
        - dual_pairing(P1, Q1)
        - dual_pairing(P1, Q2)
    )
    return DualityIso(shape, matrix, pivoted_rank(matrix), float(add_v), float(add_h))
