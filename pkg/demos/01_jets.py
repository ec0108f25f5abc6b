"""Second-order jets: pushing a small square through a map.

A jet ``(x, ds, dt, dsdt)`` stands for the germ ``x + s ds + t dt + st dsdt``.
Evaluating a map on it gives the value, both directional derivatives and the
mixed second derivative in one pass.
"""

# %%
import numpy as np

from dvbcheck.jets import Affine, Elementwise, Jet2, Polynomial, derivatives, eval_jet, fd_jvp, tangent_map

square = Polynomial.from_terms(1, [{(2,): 1.0}])
out = eval_jet(square, Jet2.at([2.0], ds=[1.0], dt=[1.0]))
print("x^2 on (2 + s + t):", [float(c[0]) for c in out.components()])  # 4 + 4s + 4t + 2st

# %% Tangent maps agree with central differences
f = Elementwise("sin", Affine([[1.0, 2.0], [0.5, -1.0]])) + Polynomial.from_terms(2, [{(3, 0): 1.0}, {(1, 1): 2.0}])
x, v = np.array([0.3, -0.4]), np.array([1.0, 0.5])
value, velocity = tangent_map(f, x, v)
print("jet velocity:", velocity)
print("central diff:", fd_jvp(f, x, v))

# %% Swapping the two slots commutes with every map
j = Jet2(x, v, np.array([0.2, 0.1]), np.array([-0.3, 0.7]))
gap = max(np.max(np.abs(a - b)) for a, b in zip(eval_jet(f, j.swap()).components(), eval_jet(f, j).swap().components()))
print("swap/map gap:", gap)

# %% Hessians from one batched pass
_, jac, hess = derivatives(f, x)
print("Jacobian:\n", jac)
print("Hessian of the first component:\n", hess[0])
