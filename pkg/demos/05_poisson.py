"""Poisson brackets, the Koszul bracket of 1-forms and its anchor.

For a Poisson bivector the anchor ``alpha -> Pi alpha`` turns the Koszul
bracket into the bracket of vector fields.  An antisymmetric field that breaks
the Jacobi identity breaks that too.
"""

# %%
import numpy as np

from dvbcheck.jets import Quadratic
from dvbcheck.poisson import (
    ExactForm,
    FieldForm,
    anchor_homomorphism_residual,
    canonical_bivector,
    jacobiator,
    koszul_bracket,
    lie_poisson_so3,
    non_poisson_control,
)
from dvbcheck.suites import control_witness

rng = np.random.default_rng(2)
for pi in (canonical_bivector(2), lie_poisson_so3()):
    f, g, h = (Quadratic.random(rng, pi.dim) for _ in range(3))
    x = rng.uniform(-1, 1, pi.dim)
    alpha = FieldForm(Quadratic.random(rng, pi.dim, cod=pi.dim))
    print(f"{pi.name:>10}: jacobiator {jacobiator(pi, f, g, h, x):+.1e}, "
          f"anchor gap {anchor_homomorphism_residual(pi, alpha, ExactForm(g), x):.1e}")

# %% A non-Poisson bivector at a fixed witness
w = control_witness()
f, g, h = w["maps"]
bad = non_poisson_control()
print("control jacobiator:", jacobiator(bad, f, g, h, w["x"]))
print("control anchor gap:", anchor_homomorphism_residual(bad, ExactForm(f), ExactForm(g), w["x"]))

# %% The Koszul bracket of two differentials is the differential of the bracket
pi = lie_poisson_so3()
x = rng.uniform(-1, 1, 3)
print("[df, dg] =", koszul_bracket(pi, ExactForm(f), ExactForm(g), x))
