"""Double vector bundles in coordinates ``(x; a, b; c)``.

Two additions, one over each side, commute with each other (the interchange
law).  The two duals pair with each other through the core, and that pairing
does not depend on how the two covectors are lifted.
"""

# %%
import numpy as np

from dvbcheck.dvb import (
    DvbElement,
    DvbHDualElement,
    DvbShape,
    DvbVDualElement,
    duality_iso,
    interchange_check,
    dual_pairing,
)

rng = np.random.default_rng(0)
shape = DvbShape(n=2, p=2, q=3, r=2)
x = rng.uniform(-1, 1, 2)
a1, a2 = rng.uniform(-1, 1, (2, 2))
b1, b2 = rng.uniform(-1, 1, (2, 3))
c = rng.uniform(-1, 1, (4, 2))
d1, d2, d3, d4 = (DvbElement(x, a, b, ci) for (a, b), ci in zip([(a1, b1), (a1, b2), (a2, b1), (a2, b2)], c))
print("interchange gap:", interchange_check(d1, d2, d3, d4))

# %% Pairing of the vertical and horizontal duals
kappa = rng.uniform(-1, 1, 2)
Phi = DvbVDualElement(x, a1, kappa, rng.uniform(-1, 1, 3))
Psi = DvbHDualElement(x, b1, kappa, rng.uniform(-1, 1, 2))
for core in (None, rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)):
    print("pairing with lift core", core, "->", dual_pairing(Phi, Psi, core=core))
print("reversed order:", dual_pairing(Phi, Psi, reverse=True))

# %% The pairing is nondegenerate on every shape
for p, q in [(1, 1), (2, 3), (6, 6), (0, 4)]:
    iso = duality_iso(DvbShape(1, p, q, 2))
    print(f"p={p} q={q}: rank {iso.rank} of {p + q}")
print(duality_iso(DvbShape(1, 1, 1, 1)).matrix)
