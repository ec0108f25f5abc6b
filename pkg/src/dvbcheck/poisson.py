"""Poisson bivectors on a chart, the Koszul bracket of 1-forms, and the anchor check.

``Pi(x)`` is stored as the anchor matrix: ``#alpha = Pi(x) alpha``.  The
bracket of functions is ``{f, g} = X_f(g) = <dg, Pi df>`` and the pairing of
1-forms is ``Pi(alpha, beta) = <beta, #alpha>``; with these, ``[df, dg] = d{f, g}``.
All derivatives come from jets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import canonical_symplectic
from .errors import DimensionError
from .jets import Affine, SmoothMap, derivatives, jacobian

__all__ = [
    "PoissonBivector",
    "OneForm",
    "FieldForm",
    "ExactForm",
    "ScaledForm",
    "canonical_bivector",
    "lie_poisson_so3",
    "constant_bivector",
    "non_poisson_control",
    "BIVECTORS",
    "anchor",
    "hamiltonian_vector_field",
    "poisson_bracket",
    "bracket_with_differential",
    "jacobiator",
    "koszul_bracket",
    "vector_field_bracket",
    "anchor_homomorphism_residual",
]


@dataclass(frozen=True)
class PoissonBivector:
    dim: int
    field: SmoothMap  # R^m -> R^(m*m), row-major
    name: str

    def __post_init__(self):
        if self.field.dom != self.dim or self.field.cod != self.dim * self.dim:
            raise DimensionError("bivector field must map R^m to R^(m*m)")

    def matrix(self, x) -> np.ndarray:
        return self.field(x).reshape(self.dim, self.dim)

    def derivative(self, x) -> np.ndarray:
        """``D[k] = d Pi / d x_k``, shape ``(m, m, m)``."""
        m = self.dim
        return jacobian(self.field, x).T.reshape(m, m, m)

    def antisymmetry_residual(self, x) -> float:
        p = self.matrix(x)
        return float(np.max(np.abs(p + p.T), initial=0.0))


def _linear_bivector(name: str, m: int, entries) -> PoissonBivector:
    # entries: (i, j) -> coefficient vector c with Pi_ij(x) = c . x; Pi_ji = -Pi_ij
    mat = np.zeros((m * m, m))
    for (i, j), c in entries.items():
        mat[i * m + j] += c
        mat[j * m + i] -= c
    return PoissonBivector(m, Affine(mat), name)


def canonical_bivector(n: int) -> PoissonBivector:
    """Inverse of the canonical symplectic form on ``(x, p)``."""
    inv = canonical_symplectic(n).bivector()
    return PoissonBivector(2 * n, Affine.constant(inv.ravel(), 2 * n), f"canonical{2 * n}")


def lie_poisson_so3() -> PoissonBivector:
    """``Pi(x) = hat(x)``, the cross-product matrix on ``so(3)*``."""
    e = np.eye(3)
    return _linear_bivector("so3", 3, {(0, 1): -e[2], (0, 2): e[1], (1, 2): -e[0]})


def constant_bivector(matrix) -> PoissonBivector:
    m = np.asarray(matrix, dtype=float)
    if not np.array_equal(m, -m.T):
        raise ValueError("matrix is not antisymmetric")
    return PoissonBivector(m.shape[0], Affine.constant(m.ravel(), m.shape[0]), "constant")


def non_poisson_control() -> PoissonBivector:
    """``Pi_12 = x_3``, ``Pi_13 = x_1``: antisymmetric but fails the Jacobi identity off ``x_3 = 0``."""
    e = np.eye(3)
    return _linear_bivector("control", 3, {(0, 1): e[2], (0, 2): e[0]})


BIVECTORS = {
    "canonical": canonical_bivector,
    "so3": lie_poisson_so3,
    "constant": constant_bivector,
    "control": non_poisson_control,
}


# 1-forms --------------------------------------------------------------------


class OneForm:
    dim: int

    def __call__(self, x) -> np.ndarray:
        raise NotImplementedError

    def jacobian(self, x) -> np.ndarray:
        """``J[i, k] = d alpha_i / d x_k``."""
        raise NotImplementedError


class FieldForm(OneForm):
    def __init__(self, components: SmoothMap):
        if components.dom != components.cod:
            raise DimensionError("a 1-form has one component per coordinate")
        self.components = components
        self.dim = components.dom

    @classmethod
    def constant(cls, value) -> "FieldForm":
        value = np.asarray(value, dtype=float)
        return cls(Affine.constant(value, value.size))

    def __call__(self, x):
        return self.components(x)

    def jacobian(self, x):
        return jacobian(self.components, x)


class ExactForm(OneForm):
    """``df`` for a scalar map ``f``."""

    def __init__(self, f: SmoothMap):
        if f.cod != 1:
            raise DimensionError("exact forms need a scalar function")
        self.f = f
        self.dim = f.dom
        self._last = (None, None)

    def _derivatives(self, x):
        key = np.asarray(x, dtype=float).tobytes()
        if self._last[0] != key:
            self._last = (key, derivatives(self.f, x))
        return self._last[1]

    def __call__(self, x):
        return self._derivatives(x)[1][0]

    def jacobian(self, x):
        return self._derivatives(x)[2][0]


class ScaledForm(OneForm):
    """``f * alpha``."""

    def __init__(self, f: SmoothMap, form: OneForm):
        if f.cod != 1 or f.dom != form.dim:
            raise DimensionError("scale must be a scalar function on the same chart")
        self.f, self.form = f, form
        self.dim = form.dim

    def __call__(self, x):
        return self.f(x)[0] * self.form(x)

    def jacobian(self, x):
        val, jac, _ = derivatives(self.f, x)
        return np.outer(self.form(x), jac[0]) + val[0] * self.form.jacobian(x)


# operations -------------------------------------------------------------------


def _check(pi: PoissonBivector, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (pi.dim,):
        raise DimensionError(f"point has shape {x.shape}, bivector lives on R^{pi.dim}")
    return x


def anchor(pi: PoissonBivector, alpha: OneForm, x) -> np.ndarray:
    x = _check(pi, x)
    if alpha.dim != pi.dim:
        raise DimensionError("form and bivector live on different charts")
    return pi.matrix(x) @ alpha(x)


def hamiltonian_vector_field(pi: PoissonBivector, f: SmoothMap, x) -> np.ndarray:
    return anchor(pi, ExactForm(f), x)


def poisson_bracket(pi: PoissonBivector, f: SmoothMap, g: SmoothMap, x) -> float:
    """``{f, g} = X_f(g)``."""
    x = _check(pi, x)
    return float(derivatives(g, x)[1][0] @ pi.matrix(x) @ derivatives(f, x)[1][0])


def bracket_with_differential(pi: PoissonBivector, f: SmoothMap, g: SmoothMap, x) -> tuple[float, np.ndarray]:
    """``{f, g}(x)`` and its gradient, from Hessians and ``d Pi``."""
    x = _check(pi, x)
    _, jf, hf = derivatives(f, x)
    _, jg, hg = derivatives(g, x)
    df, dg, hf, hg = jf[0], jg[0], hf[0], hg[0]
    p, dp = pi.matrix(x), pi.derivative(x)
    value = dg @ p @ df
    grad = hg @ (p @ df) + np.einsum("i,kij,j->k", dg, dp, df) + hf @ (p.T @ dg)
    return float(value), grad


def jacobiator(pi: PoissonBivector, f: SmoothMap, g: SmoothMap, h: SmoothMap, x) -> float:
    """``{f, {g, h}} + {g, {h, f}} + {h, {f, g}}`` at ``x``."""
    x = _check(pi, x)
    p = pi.matrix(x)
    total = 0.0
    for a, b, c in ((f, g, h), (g, h, f), (h, f, g)):
        _, grad_bc = bracket_with_differential(pi, b, c, x)
        da = derivatives(a, x)[1][0]
        total += grad_bc @ p @ da
    return float(total)


def _anchor_jacobian(p, dp, alpha, jalpha):
    # d/dx_k of Pi(x) alpha(x)
    return np.einsum("kij,j->ik", dp, alpha) + p @ jalpha


def koszul_bracket(pi: PoissonBivector, alpha: OneForm, beta: OneForm, x) -> np.ndarray:
    """``[alpha, beta] = L_{#alpha} beta - L_{#beta} alpha - d Pi(alpha, beta)``."""
    x = _check(pi, x)
    p, dp = pi.matrix(x), pi.derivative(x)
    a, b = alpha(x), beta(x)
    ja, jb = alpha.jacobian(x), beta.jacobian(x)
    X, Y = p @ a, p @ b
    jX, jY = _anchor_jacobian(p, dp, a, ja), _anchor_jacobian(p, dp, b, jb)
    lie_X_beta = jb @ X + jX.T @ b
    lie_Y_alpha = ja @ Y + jY.T @ a
    d_pairing = jb.T @ X + np.einsum("i,kij,j->k", b, dp, a) + ja.T @ (p.T @ b)
    return lie_X_beta - lie_Y_alpha - d_pairing


def vector_field_bracket(X: np.ndarray, jX: np.ndarray, Y: np.ndarray, jY: np.ndarray) -> np.ndarray:
    """``[X, Y] = DY X - DX Y`` from values and Jacobians at a point."""
    return jY @ X - jX @ Y


def anchor_homomorphism_residual(pi: PoissonBivector, alpha: OneForm, beta: OneForm, x) -> float:
    """``max |#[alpha, beta] - [#alpha, #beta]|``."""
    x = _check(pi, x)
    p, dp = pi.matrix(x), pi.derivative(x)
    a, b = alpha(x), beta(x)
    jX = _anchor_jacobian(p, dp, a, alpha.jacobian(x))
    jY = _anchor_jacobian(p, dp, b, beta.jacobian(x))
    lhs = p @ koszul_bracket(pi, alpha, beta, x)
    rhs = vector_field_bracket(p @ a, jX, p @ b, jY)
    return float(np.max(np.abs(lhs - rhs), initial=0.0))
