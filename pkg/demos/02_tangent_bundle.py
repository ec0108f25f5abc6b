"""The tangent bundle of a vector bundle carries two linear structures.

``TE`` adds over ``E`` (ordinary tangent vectors) and over ``TM`` (velocities
of curves of sections).  Both projections, the core and the pairing with
``T(E*)`` are shown on a small example.
"""

# %%
import numpy as np

from dvbcheck import dvb
from dvbcheck.bundles import (
    BundleShape,
    TEElement,
    TEStarElement,
    add_over_E,
    add_over_TM,
    tangent_pairing,
    tangent_pairing_matrix,
    te_as_dvb,
    vertical_lift,
    zero_section_split,
)

shape = BundleShape(n=1, k=2)
xi = TEElement([0.5], [1.0, 2.0], [0.3], [3.0, 4.0])
print("p_E:", xi.p_E(), " T(q):", xi.T_q())

# %% Each sum needs its own kind of common base point
same_point = TEElement(xi.x, xi.e, [1.0], [0.0, 1.0])
same_velocity = TEElement(xi.x, [0.0, 1.0], xi.dx, [1.0, 1.0])
print("over E: ", add_over_E(xi, same_point).flat())
print("over TM:", add_over_TM(xi, same_velocity).flat())

# %% The core: vertical lifts at the zero section
core = vertical_lift(shape, [0.0, 0.0], [5.0, 6.0], [0.5])
print("core element is in both kernels:", dvb.is_core(te_as_dvb(shape).forward(core)))
print("split of a vector along the zero section:", zero_section_split(TEElement([0.5], [0, 0], [1.0], [3.0, 1.0])))

# %% The tangent pairing: derivative of <e, p> along a common velocity
eta = TEStarElement([0.5], [5.0, 6.0], [0.3], [7.0, 8.0])
print("<<xi, eta>> =", tangent_pairing(xi, eta))
m, rank = tangent_pairing_matrix(shape)
print("pairing matrix on (e, de) x (p, dp):\n", m, "\nrank", rank)
