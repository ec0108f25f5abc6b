"""Second-order jets and a closed family of smooth maps that can be pushed through them.

A :class:`Jet2` is the 2-jet at ``(0, 0)`` of the square

    phi(s, t) = x + s*ds + t*dt + s*t*dsdt

truncated at order ``(1, 1)`` in ``(s, t)``.  Those four vectors are exactly a
point of the second tangent bundle in a chart.  Evaluating a :class:`SmoothMap`
on a jet applies ``T^2 f`` in coordinates.

All components may carry leading batch axes.  The last axis is always the
chart dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DimensionError

__all__ = [
    "Jet2",
    "SmoothMap",
    "Affine",
    "Quadratic",
    "Polynomial",
    "Elementwise",
    "Compose",
    "sin",
    "cos",
    "exp",
    "stack",
    "eval_jet",
    "tangent_map",
    "fd_jvp",
    "jacobian",
    "derivatives",
    "hessian",
    "exterior_derivative",
]

Array = np.ndarray
Value = Union[Array, "Jet2"]


@dataclass(frozen=True, eq=False)
class Jet2:
    """Point ``x`` with two first-order velocities and a mixed second-order part."""

    x: Array
    ds: Array
    dt: Array
    dsdt: Array

    # make ndarray (op) Jet2 dispatch to the reflected Jet2 methods
    __array_ufunc__ = None

    def __post_init__(self):
        comps = [np.asarray(c, dtype=float) for c in (self.x, self.ds, self.dt, self.dsdt)]
        if len({c.shape for c in comps}) != 1:
            raise DimensionError(
                "jet components must share one shape, got "
                + ", ".join(str(c.shape) for c in comps)
            )
        for name, c in zip(("x", "ds", "dt", "dsdt"), comps):
            object.__setattr__(self, name, c)

    @classmethod
    def at(cls, x, ds=None, dt=None, dsdt=None) -> "Jet2":
        """Build a jet at ``x``; missing parts are zero."""
        x = np.asarray(x, dtype=float)
        z = np.zeros_like(x)

        def fill(c):
            return z if c is None else np.broadcast_to(np.asarray(c, dtype=float), x.shape)

        return cls(x, fill(ds), fill(dt), fill(dsdt))

    @classmethod
    def constant(cls, x) -> "Jet2":
        return cls.at(x)

    @property
    def shape(self) -> tuple:
        return self.x.shape

    @property
    def dim(self) -> int:
        return self.x.shape[-1] if self.x.ndim else 1

    def components(self) -> tuple[Array, Array, Array, Array]:
        return self.x, self.ds, self.dt, self.dsdt

    def map_linear(self, fn: Callable[[Array], Array]) -> "Jet2":
        """Apply a linear array operation (indexing, reshape, sum, ...) to each part."""
        return Jet2(fn(self.x), fn(self.ds), fn(self.dt), fn(self.dsdt))

    def swap(self) -> "Jet2":
        """Reparametrize by ``(s, t) -> (t, s)``."""
        return Jet2(self.x, self.dt, self.ds, self.dsdt)

    def __getitem__(self, idx) -> "Jet2":
        return self.map_linear(lambda c: c[idx])

    def reshape(self, *shape) -> "Jet2":
        return self.map_linear(lambda c: c.reshape(*shape))

    def sum(self, axis=-1) -> "Jet2":
        return self.map_linear(lambda c: c.sum(axis=axis))

    def apply(self, f: Array, df: Array, d2f: Array) -> "Jet2":
        """Chain rule for an elementwise function with value, first and second derivative at ``x``."""
        return Jet2(
            f,
            df * self.ds,
            df * self.dt,
            df * self.dsdt + d2f * self.ds * self.dt,
        )

    # arithmetic ------------------------------------------------------------

    def __add__(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return Jet2(self.x + other.x, self.ds + other.ds, self.dt + other.dt, self.dsdt + other.dsdt)
        x = self.x + np.asarray(other, dtype=float)
        return Jet2(x, *(np.broadcast_to(c, x.shape) for c in (self.ds, self.dt, self.dsdt)))

    __radd__ = __add__

    def __neg__(self) -> "Jet2":
        return Jet2(-self.x, -self.ds, -self.dt, -self.dsdt)

    def __sub__(self, other) -> "Jet2":
        return self + (-other)

    def __rsub__(self, other) -> "Jet2":
        return (-self) + other

    def __mul__(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return Jet2(
                self.x * other.x,
                self.x * other.ds + self.ds * other.x,
                self.x * other.dt + self.dt * other.x,
                self.x * other.dsdt + self.ds * other.dt + self.dt * other.ds + self.dsdt * other.x,
            )
        other = np.asarray(other, dtype=float)
        return Jet2(self.x * other, self.ds * other, self.dt * other, self.dsdt * other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other, dtype=float))

    def __rtruediv__(self, other) -> "Jet2":
        return self.reciprocal() * other

    def reciprocal(self) -> "Jet2":
        r = 1.0 / self.x
        return self.apply(r, -r * r, 2.0 * r * r * r)

    def __pow__(self, k: int) -> "Jet2":
        if int(k) != k or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        k = int(k)
        if k == 0:
            return Jet2.constant(np.ones_like(self.x))
        if k == 1:
            return self
        return self.apply(self.x**k, k * self.x ** (k - 1), k * (k - 1) * self.x ** (k - 2))

    def __matmul__(self, m) -> "Jet2":
        m = np.asarray(m, dtype=float)
        return self.map_linear(lambda c: c @ m)

    def __rmatmul__(self, m) -> "Jet2":
        m = np.asarray(m, dtype=float)
        return self.map_linear(lambda c: m @ c)

    def __repr__(self) -> str:
        return f"Jet2(x={self.x!r}, ds={self.ds!r}, dt={self.dt!r}, dsdt={self.dsdt!r})"


def sin(u: Value) -> Value:
    if isinstance(u, Jet2):
        s, c = np.sin(u.x), np.cos(u.x)
        return u.apply(s, c, -s)
    return np.sin(u)


def cos(u: Value) -> Value:
    if isinstance(u, Jet2):
        s, c = np.sin(u.x), np.cos(u.x)
        return u.apply(c, -s, -c)
    return np.cos(u)


def exp(u: Value) -> Value:
    if isinstance(u, Jet2):
        e = np.exp(u.x)
        return u.apply(e, e, e)
    return np.exp(u)


def stack(items: Sequence[Value], axis: int = -1) -> Value:
    if any(isinstance(it, Jet2) for it in items):
        jets = [it if isinstance(it, Jet2) else Jet2.constant(it) for it in items]
        return Jet2(*(np.stack([j.components()[i] for j in jets], axis=axis) for i in range(4)))
    return np.stack(items, axis=axis)


# smooth maps -----------------------------------------------------------------


class SmoothMap:
    """A map ``R^dom -> R^cod`` drawn from a closed family of expressions.

    Every map evaluates on plain arrays and on :class:`Jet2` values through the
    same code, so finite differences and jets see the same function.
    """

    dom: int
    cod: int

    def __call__(self, u: Value) -> Value:
        if not isinstance(u, Jet2):
            u = np.asarray(u, dtype=float)
        last = u.shape[-1] if u.shape else None
        if last != self.dom:
            raise DimensionError(f"{type(self).__name__} expects dimension {self.dom}, got {last}")
        return self._eval(u)

    def _eval(self, u: Value) -> Value:
        raise NotImplementedError

    def __add__(self, other: "SmoothMap") -> "SmoothMap":
        return _Sum(self, other)

    def __sub__(self, other: "SmoothMap") -> "SmoothMap":
        return _Sum(self, other * -1.0)

    def __mul__(self, other) -> "SmoothMap":
        if isinstance(other, SmoothMap):
            return _Product(self, other)
        return _Scaled(self, float(other))

    __rmul__ = __mul__

    def compose(self, inner: "SmoothMap") -> "SmoothMap":
        """``self ∘ inner``."""
        return Compose(self, inner)


class Affine(SmoothMap):
    """``u -> A u + b``."""

    def __init__(self, matrix, offset=None):
        self.matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        self.cod, self.dom = self.matrix.shape
        self.offset = np.zeros(self.cod) if offset is None else np.asarray(offset, dtype=float)
        if self.offset.shape != (self.cod,):
            raise DimensionError("offset does not match the matrix rows")

    @classmethod
    def identity(cls, n: int) -> "Affine":
        return cls(np.eye(n))

    @classmethod
    def constant(cls, value, dom: int) -> "Affine":
        value = np.atleast_1d(np.asarray(value, dtype=float))
        return cls(np.zeros((value.size, dom)), value)

    def _eval(self, u):
        return u @ self.matrix.T + self.offset


class Quadratic(SmoothMap):
    """Each output is ``c_k + <b_k, u> + 1/2 u^T Q_k u`` with ``Q_k`` symmetric."""

    def __init__(self, const, linear, quad):
        self.linear = np.atleast_2d(np.asarray(linear, dtype=float))
        self.cod, self.dom = self.linear.shape
        self.const = np.asarray(const, dtype=float).reshape(self.cod)
        quad = np.asarray(quad, dtype=float).reshape(self.cod, self.dom, self.dom)
        self.quad = 0.5 * (quad + quad.transpose(0, 2, 1))

    @classmethod
    def random(cls, rng: np.random.Generator, dom: int, cod: int = 1) -> "Quadratic":
        """Coefficients uniform in ``[-1, 1]``."""
        return cls(
            rng.uniform(-1, 1, cod),
            rng.uniform(-1, 1, (cod, dom)),
            rng.uniform(-1, 1, (cod, dom, dom)),
        )

    def _eval(self, u):
        n, m = self.dom, self.cod
        qu = (u @ self.quad.reshape(m * n, n).T).reshape(*u.shape[:-1], m, n)
        if isinstance(u, Jet2):
            uu = u.map_linear(lambda c: c[..., None, :])
        else:
            uu = u[..., None, :]
        return (qu * uu).sum(axis=-1) * 0.5 + u @ self.linear.T + self.const


class Polynomial(SmoothMap):
    """Sum of monomials: output ``k`` is ``sum_t coeffs[k, t] * prod_i u_i ** exponents[t, i]``."""

    def __init__(self, exponents, coeffs):
        self.exponents = np.atleast_2d(np.asarray(exponents, dtype=int))
        self.coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
        if (self.exponents < 0).any():
            raise ValueError("exponents must be non-negative")
        self.dom = self.exponents.shape[1]
        self.cod = self.coeffs.shape[0]
        if self.coeffs.shape[1] != self.exponents.shape[0]:
            raise DimensionError("one coefficient column per monomial is required")

    @classmethod
    def from_terms(cls, dom: int, outputs: Sequence[dict]) -> "Polynomial":
        """``outputs[k]`` maps exponent tuples to coefficients."""
        monos = sorted({tuple(e) for out in outputs for e in out})
        coeffs = np.zeros((len(outputs), len(monos)))
        for k, out in enumerate(outputs):
            for e, c in out.items():
                coeffs[k, monos.index(tuple(e))] += c
        return cls(np.array(monos, dtype=int).reshape(len(monos), dom), coeffs)

    @classmethod
    def random(cls, rng: np.random.Generator, dom: int, degree: int, cod: int = 1) -> "Polynomial":
        monos = []
        for d in range(degree + 1):
            for combo in combinations_with_replacement(range(dom), d):
                e = [0] * dom
                for i in combo:
                    e[i] += 1
                monos.append(e)
        return cls(np.array(monos), rng.uniform(-1, 1, (cod, len(monos))))

    def _eval(self, u):
        top = int(self.exponents.max(initial=0))
        pows = [u**k for k in range(top + 1)]
        table = stack(pows, axis=-2)  # (..., top+1, dom)
        mono = None
        for i in range(self.dom):
            col = table[..., self.exponents[:, i], i]
            mono = col if mono is None else mono * col
        if mono is None:  # dom == 0
            mono = np.ones(u.shape[:-1] + (self.exponents.shape[0],))
        return mono @ self.coeffs.T


_ELEMENTWISE = {"sin": sin, "cos": cos, "exp": exp}


class Elementwise(SmoothMap):
    """``sin``, ``cos`` or ``exp`` applied componentwise to the output of ``inner``."""

    def __init__(self, name: str, inner: SmoothMap):
        if name not in _ELEMENTWISE:
            raise ValueError(f"unknown elementwise function {name!r}")
        self.name, self.inner = name, inner
        self.dom, self.cod = inner.dom, inner.cod

    def _eval(self, u):
        return _ELEMENTWISE[self.name](self.inner._eval(u))


class Compose(SmoothMap):
    def __init__(self, outer: SmoothMap, inner: SmoothMap):
        if outer.dom != inner.cod:
            raise DimensionError(f"cannot compose: {inner.cod} -> {outer.dom}")
        self.outer, self.inner = outer, inner
        self.dom, self.cod = inner.dom, outer.cod

    def _eval(self, u):
        return self.outer._eval(self.inner._eval(u))


class _Sum(SmoothMap):
    def __init__(self, f: SmoothMap, g: SmoothMap):
        if (f.dom, f.cod) != (g.dom, g.cod):
            raise DimensionError("summands must have the same domain and codomain")
        self.f, self.g = f, g
        self.dom, self.cod = f.dom, f.cod

    def _eval(self, u):
        return self.f._eval(u) + self.g._eval(u)


class _Scaled(SmoothMap):
    def __init__(self, f: SmoothMap, c: float):
        self.f, self.c = f, c
        self.dom, self.cod = f.dom, f.cod

    def _eval(self, u):
        return self.f._eval(u) * self.c


class _Product(SmoothMap):
    # componentwise; a scalar factor (cod 1) broadcasts
    def __init__(self, f: SmoothMap, g: SmoothMap):
        if f.dom != g.dom or (f.cod != g.cod and 1 not in (f.cod, g.cod)):
            raise DimensionError("factors are not compatible")
        self.f, self.g = f, g
        self.dom, self.cod = f.dom, max(f.cod, g.cod)

    def _eval(self, u):
        return self.f._eval(u) * self.g._eval(u)


# operations ------------------------------------------------------------------


def eval_jet(f: SmoothMap, j: Jet2) -> Jet2:
    """Apply ``T^2 f`` to a jet."""
    if j.dim != f.dom:
        raise DimensionError(f"jet has dimension {j.dim}, map expects {f.dom}")
    return f(j)


def tangent_map(f: SmoothMap, x, v) -> tuple[Array, Array]:
    """``(f(x), Df(x) v)``."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if x.shape != v.shape:
        raise DimensionError("point and vector differ in shape")
    out = eval_jet(f, Jet2.at(x, ds=v))
    return out.x, out.ds


def fd_jvp(f: SmoothMap, x, v, h: float = 1e-5) -> Array:
    """Central difference ``(f(x + h v) - f(x - h v)) / 2h``."""
    if not h > 0:
        raise ValueError("step must be positive")
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if x.shape != v.shape:
        raise DimensionError("point and vector differ in shape")
    return (f(x + h * v) - f(x - h * v)) / (2 * h)


def jacobian(f: SmoothMap, x) -> Array:
    """``J[i, k] = d f_i / d x_k`` from one batched jet pass."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    eye = np.eye(n)
    out = eval_jet(f, Jet2.at(np.broadcast_to(x, (n, n)), ds=eye))
    return out.ds.T


def derivatives(f: SmoothMap, x) -> tuple[Array, Array, Array]:
    """Value, Jacobian ``(m, n)`` and Hessians ``(m, n, n)`` of ``f`` at ``x``.

    One batched jet pass with ``ds = e_k`` and ``dt = e_l``; the mixed part is
    ``d^2 f / dx_k dx_l``.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    eye = np.eye(n)
    j = Jet2.at(
        np.broadcast_to(x, (n, n, n)),
        ds=np.broadcast_to(eye[:, None, :], (n, n, n)),
        dt=np.broadcast_to(eye[None, :, :], (n, n, n)),
    )
    out = eval_jet(f, j)
    if n == 0:
        val = f(x)
        return val, np.zeros((f.cod, 0)), np.zeros((f.cod, 0, 0))
    return out.x[0, 0], out.dt[0].T, np.moveaxis(out.dsdt, -1, 0)


def hessian(f: SmoothMap, x) -> Array:
    return derivatives(f, x)[2]


def exterior_derivative(one_form: SmoothMap, y) -> Array:
    """Matrix of ``d alpha`` at ``y``: ``(d alpha)[i, j] = d_i alpha_j - d_j alpha_i``."""
    if one_form.cod != one_form.dom:
        raise DimensionError("a 1-form field has as many components as the chart dimension")
    jac = jacobian(one_form, y)
    return jac.T - jac
