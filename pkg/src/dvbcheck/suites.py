"""Randomized property suites and their reports.

Every case draws its data from its own generator, seeded by
``(seed, suite index, case index)``, so a case's inputs never depend on how
many other cases or suites ran before it.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from . import canonical as can
from . import dvb
from .bundles import BundleShape, TEElement, TEStarElement, tangent_pairing, tangent_pairing_matrix
from .jets import Affine, Compose, Elementwise, Jet2, Polynomial, Quadratic, fd_jvp
from .poisson import (
    ExactForm,
    FieldForm,
    ScaledForm,
    anchor,
    anchor_homomorphism_residual,
    bracket_with_differential,
    canonical_bivector,
    constant_bivector,
    jacobiator,
    koszul_bracket,
    lie_poisson_so3,
    non_poisson_control,
)

__all__ = [
    "SUITE_ORDER",
    "SuiteConfig",
    "SuiteReport",
    "Failure",
    "run_suite",
    "run_suites",
    "emit_report",
    "exit_code",
    "diffeomorphisms",
    "control_witness",
]

MAX_FAILURES = 10


# fixtures shared with the test suite -------------------------------------------


def _componentwise(n: int, terms: dict) -> Polynomial:
    outputs = []
    for i in range(n):
        out = {}
        for power, c in terms.items():
            e = [0] * n
            e[i] = power
            out[tuple(e)] = c
        outputs.append(out)
    return Polynomial.from_terms(n, outputs)


def _householder(n: int) -> np.ndarray:
    u = np.ones(n)
    return np.eye(n) - 2 * np.outer(u, u) / (u @ u)


def diffeomorphisms(n: int) -> dict:
    """Identity plus small nonlinear terms; each is invertible on ``[-1, 1]^n``."""
    ident = Affine.identity(n)
    triangular = [{tuple(np.eye(n, dtype=int)[i]): 1.0} for i in range(n)]
    for i in range(1, n):
        e = [0] * n
        e[i - 1] = 2
        triangular[i][tuple(e)] = 0.2
    H = _householder(n)
    return {
        "cubic": _componentwise(n, {1: 1.0, 3: 0.1}),
        "sine": ident + Elementwise("sin", ident) * 0.1,
        "exp": ident + Elementwise("exp", ident) * 0.1,
        "triangular": Polynomial.from_terms(n, triangular),
        "rotated-cubic": ident + Compose(_componentwise(n, {3: 0.05}), Affine(H)),
    }


def _cubic_witness() -> tuple:
    f = Polynomial.from_terms(3, [{(3, 0, 0): 1.0, (0, 1, 0): 1.0}])
    g = Polynomial.from_terms(3, [{(0, 3, 0): 1.0, (0, 0, 1): 1.0}])
    h = Polynomial.from_terms(3, [{(0, 0, 3): 1.0, (1, 0, 0): 1.0}])
    return f, g, h


def control_witness() -> dict:
    """Frozen inputs on which the non-Poisson control fails both checks."""
    f, g, h = _cubic_witness()
    return {
        "f": "x1^3 + x2",
        "g": "x2^3 + x3",
        "h": "x3^3 + x1",
        "maps": (f, g, h),
        "x": np.ones(3),
    }


# configuration and reports --------------------------------------------------------


@dataclass(frozen=True)
class Suite:
    name: str
    sample: Callable
    check: Callable
    trials: int
    dim_base: int
    tol_scale: float = 1.0
    control: Callable | None = None


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    seed: int = 0
    trials: int | None = None
    dim_base: int | None = None
    tol_exact: float = 1e-12
    tol_fd: float = 1e-6
    negative_controls: bool = False

    def __post_init__(self):
        if self.suite != "all" and self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITE_ORDER)}, all")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.trials is not None and self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.dim_base is not None and self.dim_base < 1:
            raise ValueError("dim-base must be >= 1")
        if not (self.tol_exact > 0 and self.tol_fd > 0):
            raise ValueError("tolerances must be positive")


@dataclass
class Failure:
    case: int
    residual: float | None
    inputs: dict
    reason: str = "residual above tolerance"


@dataclass
class SuiteReport:
    suite: str
    seed: int
    trials: int
    max_residual: float | None
    tolerance: float
    passed: bool
    wall_ms: float
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "wall_ms": self.wall_ms,
            "failures": [
                {"case": f.case, "reason": f.reason, "residual": f.residual, "inputs": f.inputs}
                for f in self.failures
            ],
        }


def _serialize(value):
    if isinstance(value, np.ndarray):
        return [_serialize(v) for v in value.tolist()] if value.ndim else _serialize(value.item())
    if isinstance(value, dict):
        return {k: _serialize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_serialize(v) for v in value]
    if isinstance(value, (np.floating, float)):
        return float(value) if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def _case_rng(seed: int, suite_index: int, case: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(suite_index, case)))


def _u(rng, *shape):
    return rng.uniform(-1.0, 1.0, shape)


def _maxabs(u) -> float:
    return float(np.max(np.abs(u), initial=0.0))


# involution --------------------------------------------------------------------------


def _sample_t2m(rng, dim):
    n = int(rng.integers(1, dim + 1))
    return {"x": _u(rng, n), "v": _u(rng, n), "w": _u(rng, n), "z": _u(rng, n)}


def _check_involution(s, cfg):
    xi = can.T2MElement(s["x"], s["v"], s["w"], s["z"])
    jxi = can.canonical_involution(xi)
    twice = can.canonical_involution(jxi)
    gaps = [
        twice.flat() - xi.flat(),
        np.concatenate(jxi.p_TM()) - np.concatenate(xi.T_pM()),
        np.concatenate(jxi.T_pM()) - np.concatenate(xi.p_TM()),
    ]
    return max(_maxabs(g) for g in gaps), True


# naturality ------------------------------------------------------------------------------


def _check_naturality(s, cfg):
    xi = can.T2MElement(s["x"], s["v"], s["w"], s["z"])
    worst, fd_ok = 0.0, True
    for f in diffeomorphisms(len(xi.x)).values():
        worst = max(worst, can.j_naturality_residual(f, xi))
        jet_velocity = can.second_tangent_map(f, xi).v
        fd = fd_jvp(f, xi.x, xi.v)
        fd_ok &= _maxabs(jet_velocity - fd) <= cfg.tol_fd * max(1.0, _maxabs(fd))
    return worst, fd_ok


# interchange -----------------------------------------------------------------------------


def _random_dvb_shape(rng, dim):
    while True:
        n = int(rng.integers(1, dim + 1))
        p, q, r = (int(v) for v in rng.integers(0, dim + 1, 3))
        if p + q + r >= 1:
            return dvb.DvbShape(n, p, q, r)


def _sample_interchange(rng, dim):
    sh = _random_dvb_shape(rng, dim)
    return {
        "shape": [sh.n, sh.p, sh.q, sh.r],
        "x": _u(rng, sh.n),
        "a_top": _u(rng, sh.p),
        "a_bottom": _u(rng, sh.p),
        "b_left": _u(rng, sh.q),
        "b_right": _u(rng, sh.q),
        "c": _u(rng, 4, sh.r),
    }


def _check_interchange(s, cfg):
    x, c = s["x"], s["c"]
    d1 = dvb.DvbElement(x, s["a_top"], s["b_left"], c[0])
    d2 = dvb.DvbElement(x, s["a_top"], s["b_right"], c[1])
    d3 = dvb.DvbElement(x, s["a_bottom"], s["b_left"], c[2])
    d4 = dvb.DvbElement(x, s["a_bottom"], s["b_right"], c[3])
    return dvb.interchange_check(d1, d2, d3, d4), True


# pairing of the two duals -----------------------------------------------------------------


def _sample_dual_pairing(rng, dim):
    sh = _random_dvb_shape(rng, dim)
    return {
        "shape": [sh.n, sh.p, sh.q, sh.r],
        "x": _u(rng, sh.n),
        "kappa": _u(rng, sh.r),
        "a": _u(rng, 2, sh.p),
        "phi": _u(rng, 2, sh.q),
        "b": _u(rng, sh.q),
        "psi": _u(rng, sh.p),
        "core": _u(rng, sh.r),
    }


def _check_dual_pairing(s, cfg):
    x, kappa = s["x"], s["kappa"]
    P1 = dvb.DvbVDualElement(x, s["a"][0], kappa, s["phi"][0])
    P2 = dvb.DvbVDualElement(x, s["a"][1], kappa, s["phi"][1])
    Q = dvb.DvbHDualElement(x, s["b"], kappa, s["psi"])
    base = dvb.dual_pairing(P1, Q)
    lifted = dvb.dual_pairing(P1, Q, core=s["core"])
    reversed_ = dvb.dual_pairing(P1, Q, reverse=True)
    additive = dvb.dual_pairing(dvb.add_vdual_over_core(P1, P2), Q) - base - dvb.dual_pairing(P2, Q)
    return max(abs(base - lifted), abs(base + reversed_), abs(additive)), True


# tangent pairing --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _pairing_rank(k: int) -> int:
    return tangent_pairing_matrix(BundleShape(1, k))[1]


def _sample_tangent_pairing(rng, dim):
    n = int(rng.integers(1, dim + 1))
    k = int(rng.integers(1, dim + 1))
    return {
        "n": n,
        "k": k,
        "x": _u(rng, n),
        "dx": _u(rng, n),
        "section": _quad_inputs(rng, n, k),
        "dual_section": _quad_inputs(rng, n, k),
    }


def _quad_inputs(rng, dom, cod):
    return {"const": _u(rng, cod), "linear": _u(rng, cod, dom), "quad": _u(rng, cod, dom, dom)}


def _quad(d) -> Quadratic:
    return Quadratic(d["const"], d["linear"], d["quad"])


def _check_tangent_pairing(s, cfg):
    F, G = _quad(s["section"]), _quad(s["dual_section"])
    x, dx = s["x"], s["dx"]
    jf, jg = F(Jet2.at(x, ds=dx)), G(Jet2.at(x, ds=dx))
    closed = tangent_pairing(TEElement(x, jf.x, dx, jf.ds), TEStarElement(x, jg.x, dx, jg.ds))
    along_jet = (jf * jg).sum(axis=-1).ds
    return abs(closed - float(along_jet)), _pairing_rank(s["k"]) == 2 * s["k"]


# tulczyjew ----------------------------------------------------------------------------------


def _sample_tulczyjew(rng, dim):
    n = int(rng.integers(1, dim + 1))
    return {"x": _u(rng, n), "p": _u(rng, n), "dx": _u(rng, n), "dp": _u(rng, n), "eta": _u(rng, 3, 2, n)}


def _check_tulczyjew(s, cfg):
    xi = can.TangentCotangentElement(s["x"], s["p"], s["dx"], s["dp"])
    etas = list(can._admissible_basis(xi)) + [can.T2MElement(xi.x, xi.dx, w, z) for w, z in s["eta"]]
    duality = can.tulczyjew_duality_residual(xi, etas)
    shuffle = _maxabs(can.tulczyjew(xi).flat() - can.tulczyjew_closed_form(xi).flat())
    return max(duality, shuffle), True


# Theta after the Poisson anchor --------------------------------------------------------------


def _sample_composite(rng, dim):
    n = int(rng.integers(1, dim + 1))
    return {"x": _u(rng, n), "p": _u(rng, n), "alpha": _u(rng, n), "beta": _u(rng, n)}


def _check_composite(s, cfg):
    sample = can.CotangentCotangentElement(s["x"], s["p"], s["alpha"], s["beta"])
    return can.anchor_composite_residual(sample), True


# symplectic properties -----------------------------------------------------------------------


def _sample_symplecto(rng, dim):
    n = int(rng.integers(1, dim + 1))
    k = int(rng.integers(1, dim + 1))
    return {"n": n, "k": k, "points": _u(rng, 2, 2 * (n + k)), "core": _u(rng, n)}


def _check_symplecto(s, cfg):
    n, k = s["n"], s["k"]
    shape = BundleShape(n, k)
    R = can.r_matrix(shape)
    u1, u2 = s["points"]
    gaps = [
        can.theta_symplectomorphism_residual(n),
        can.theta_poisson_residual(n),
        can.r_anti_symplectic_residual(shape),
        _maxabs(can.pin_r_map(shape) - R),
    ]
    # -id on the core T*M
    core = can.CotangentOfDual(np.zeros(n), np.zeros(k), s["core"], np.zeros(k))
    image = can.r_map(shape, core)
    gaps.append(_maxabs(image.alpha + s["core"]) + _maxabs(image.a) + _maxabs(image.phi))
    # additive for both bundle structures: domain coordinates held fixed,
    # and the image coordinates they are sent to
    x_idx = np.r_[0:n]
    structures = (
        (np.r_[x_idx, n : n + k], np.r_[x_idx, 2 * n + k : 2 * (n + k)]),  # over A*
        (np.r_[x_idx, 2 * n + k : 2 * (n + k)], np.r_[x_idx, n : n + k]),  # over A
    )
    for fixed, image_fixed in structures:
        v = u2.copy()
        v[fixed] = u1[fixed]
        total = u1 + v
        total[fixed] = u1[fixed]
        expected = R @ u1 + R @ v
        expected[image_fixed] = (R @ u1)[image_fixed]
        gaps.append(_maxabs(R @ total - expected))
    return max(gaps), True


# poisson -------------------------------------------------------------------------------------


def _sample_poisson(rng, dim):
    n = int(rng.integers(1, dim + 1))
    m_const = int(rng.integers(2, 2 * dim + 1))
    const = _u(rng, m_const, m_const)
    sample = {"canonical_n": n, "constant_matrix": const - const.T}
    for name, m in (("canonical", 2 * n), ("so3", 3), ("constant", m_const)):
        sample[name] = {
            "x": _u(rng, m),
            "triple": [_quad_inputs(rng, m, 1) for _ in range(3)],
            "field": _quad_inputs(rng, m, m),
        }
    return sample


def _bivectors(s):
    return {
        "canonical": canonical_bivector(s["canonical_n"]),
        "so3": lie_poisson_so3(),
        "constant": constant_bivector(s["constant_matrix"]),
    }


def _check_jacobi(s, cfg):
    worst = 0.0
    for name, pi in _bivectors(s).items():
        data = s[name]
        worst = max(worst, abs(jacobiator(pi, *(_quad(t) for t in data["triple"]), data["x"])))
    return worst, True


def _control_jacobi(cfg):
    w = control_witness()
    residual = abs(jacobiator(non_poisson_control(), *w["maps"], w["x"]))
    return residual, {"bivector": "control", "f": w["f"], "g": w["g"], "h": w["h"], "x": w["x"]}


def _check_koszul(s, cfg):
    worst = 0.0
    for name, pi in _bivectors(s).items():
        data = s[name]
        x = data["x"]
        f, g, h = (_quad(t) for t in data["triple"])
        alpha = FieldForm(_quad(data["field"]))
        beta = ExactForm(g)
        bracket = koszul_bracket(pi, alpha, beta, x)
        leibniz = (
            koszul_bracket(pi, alpha, ScaledForm(h, beta), x)
            - h(x)[0] * bracket
            - (ExactForm(h)(x) @ anchor(pi, alpha, x)) * beta(x)
        )
        exact = koszul_bracket(pi, ExactForm(f), beta, x) - bracket_with_differential(pi, f, g, x)[1]
        worst = max(
            worst,
            anchor_homomorphism_residual(pi, alpha, beta, x),
            anchor_homomorphism_residual(pi, ExactForm(f), beta, x),
            _maxabs(bracket + koszul_bracket(pi, beta, alpha, x)),
            _maxabs(leibniz),
            _maxabs(exact),
        )
    return worst, True


def _control_koszul(cfg):
    w = control_witness()
    f, g, _ = w["maps"]
    residual = anchor_homomorphism_residual(non_poisson_control(), ExactForm(f), ExactForm(g), w["x"])
    return residual, {"bivector": "control", "alpha": "d(" + w["f"] + ")", "beta": "d(" + w["g"] + ")", "x": w["x"]}


# Default sizes keep ``--suite all`` to a few seconds; pass --trials for the
# larger sweeps used by the acceptance tests.
SUITES: dict[str, Suite] = {
    s.name: s
    for s in (
        Suite("involution", _sample_t2m, _check_involution, 2_000, 5),
        Suite("naturality", _sample_t2m, _check_naturality, 200, 4),
        Suite("interchange", _sample_interchange, _check_interchange, 2_000, 5),
        Suite("theorem1", _sample_dual_pairing, _check_dual_pairing, 2_000, 6),
        Suite("tangent-pairing", _sample_tangent_pairing, _check_tangent_pairing, 500, 6),
        Suite("tulczyjew", _sample_tulczyjew, _check_tulczyjew, 300, 4),
        Suite("proposition-r", _sample_composite, _check_composite, 2_000, 4),
        Suite("symplecto", _sample_symplecto, _check_symplecto, 40, 4),
        Suite("poisson-jacobi", _sample_poisson, _check_jacobi, 200, 2, 1e2, _control_jacobi),
        Suite("koszul-anchor", _sample_poisson, _check_koszul, 100, 2, 1e4, _control_koszul),
    )
}
SUITE_ORDER = tuple(SUITES)


def run_suite(cfg: SuiteConfig) -> SuiteReport:
    """Run one suite; identical configs give identical reports apart from ``wall_ms``."""
    suite = SUITES[cfg.suite]
    index = SUITE_ORDER.index(cfg.suite)
    trials = cfg.trials or suite.trials
    dim = cfg.dim_base or suite.dim_base
    tol = cfg.tol_exact * suite.tol_scale
    start = time.perf_counter()
    worst = 0.0
    failures: list[Failure] = []
    n_failed = 0

    def record(case, residual, inputs, reason):
        nonlocal n_failed
        n_failed += 1
        if len(failures) < MAX_FAILURES:
            failures.append(Failure(case, residual, _serialize(inputs), reason))

    for case in range(trials):
        sample = suite.sample(_case_rng(cfg.seed, index, case), dim)
        try:
            with np.errstate(over="raise", invalid="raise", divide="raise"):
                residual, secondary_ok = suite.check(sample, cfg)
        except (FloatingPointError, OverflowError) as exc:
            record(case, None, sample, f"numeric error: {exc}")
            worst = math.inf
            continue
        worst = max(worst, residual)
        if not residual <= tol:
            record(case, residual, sample, "residual above tolerance")
        elif not secondary_ok:
            record(case, residual, sample, "secondary check failed")

    if cfg.negative_controls and suite.control is not None:
        residual, inputs = suite.control(cfg)
        trials += 1
        worst = max(worst, residual)
        if not residual <= tol:
            record(trials - 1, residual, inputs, "negative control: residual above tolerance")

    wall_ms = round((time.perf_counter() - start) * 1000.0, 3)
    return SuiteReport(
        suite=cfg.suite,
        seed=cfg.seed,
        trials=trials,
        max_residual=worst if math.isfinite(worst) else None,
        tolerance=tol,
        passed=n_failed == 0,
        wall_ms=wall_ms,
        failures=failures,
    )


def run_suites(cfg: SuiteConfig) -> list[SuiteReport]:
    names = SUITE_ORDER if cfg.suite == "all" else (cfg.suite,)
    return [run_suite(_with_suite(cfg, name)) for name in names]


def _with_suite(cfg: SuiteConfig, name: str) -> SuiteConfig:
    return SuiteConfig(name, cfg.seed, cfg.trials, cfg.dim_base, cfg.tol_exact, cfg.tol_fd, cfg.negative_controls)


def exit_code(reports: list[SuiteReport]) -> int:
    return 0 if all(r.passed for r in reports) else 1


def emit_report(reports: list[SuiteReport], fmt: str = "text", suite: str | None = None) -> bytes:
    """Serialize reports as UTF-8 text or a single JSON document."""
    if fmt == "json":
        if suite == "all" or len(reports) != 1:
            doc = {
                "suite": "all",
                "seed": reports[0].seed if reports else None,
                "pass": all(r.passed for r in reports),
                "suites": [r.to_dict() for r in reports],
            }
        else:
            doc = reports[0].to_dict()
        return (json.dumps(doc, indent=2, allow_nan=False) + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    lines = []
    for r in reports:
        verdict = "PASS" if r.passed else "FAIL"
        res = "n/a" if r.max_residual is None else f"{r.max_residual:.3e}"
        lines.append(
            f"{verdict} {r.suite:<16} trials={r.trials} max_residual={res} "
            f"tol={r.tolerance:.1e} seed={r.seed} wall_ms={r.wall_ms:.1f}"
        )
        for f in r.failures:
            res = "n/a" if f.residual is None else f"{f.residual:.3e}"
            lines.append(f"    case {f.case}: {f.reason} (residual={res}) inputs={json.dumps(f.inputs)}")
    return ("\n".join(lines) + "\n").encode("utf-8")
