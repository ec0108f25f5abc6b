"""Canonical maps on iterated tangent and cotangent bundles.

``J`` swaps the two slots of ``T^2 M``.  Tulczyjew's ``Theta`` turns ``T(T*M)``
into ``T*(TM)`` through the tangent pairing, and composing it with the
Poisson anchor of ``T*M`` gives the map ``R`` of the cotangent double bundle.
"""

# %%
import numpy as np

from dvbcheck import canonical as can
from dvbcheck.bundles import BundleShape
from dvbcheck.suites import diffeomorphisms

xi = can.T2MElement([0.0, 0.0], [1.0, 2.0], [3.0, 4.0], [5.0, 6.0])
print("J(xi) =", can.canonical_involution(xi).flat())

rng = np.random.default_rng(1)
xi = can.T2MElement(*rng.uniform(-1, 1, (4, 3)))
for name, f in diffeomorphisms(3).items():
    print(f"naturality of J under {name:>13}: {can.j_naturality_residual(f, xi):.1e}")

# %% Theta from its defining duality, and its closed form
point = can.TangentCotangentElement([1.0], [2.0], [3.0], [4.0])
print("Theta(1, 2, 3, 4) =", can.tulczyjew(point).flat(), " closed form:", can.tulczyjew_closed_form(point).flat())
print("Theta^* omega - omega^T:", can.theta_symplectomorphism_residual(2))

# %% R, pinned from the pairings, and the composite identity
shape = BundleShape(1, 2)
print("R (pinned):\n", can.pin_r_map(shape))
print("R* omega + omega:", can.r_anti_symplectic_residual(shape))
sample = can.CotangentCotangentElement([0.3], [0.7], [2.0], [3.0])
print("Theta(pi#(sample)) =", can.tulczyjew(can.poisson_anchor_canonical(sample)).flat())
print("R(sample)          =", can.r_map(BundleShape(1, 1), can.as_cotangent_of_dual(sample)).flat())
