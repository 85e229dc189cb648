"""
Frequency of a harmonic function on an asymptotically conical model
====================================================================

f(r) = beta r + (1 - beta)(1 - exp(-r)) is Euclidean-like at the pole and a
cone of opening beta at infinity.  We build the Green's-function distance b,
solve the k = 1 mode and watch the frequency D/I settle on the cone exponent.
"""

import numpy as np

from conelab import cone as C
from conelab import dirichlet as Dm
from conelab import frequency as F
from conelab import profiles as P

beta = 0.8
metric = P.asym_conical(beta, 3)
green = F.green_radial(metric)
s = np.array([1e-4, 1e-2, 1.0, 10.0, 1e3])
print("b(s)/s: ", green.b(s) / s)
# b' starts at beta^-2 at the pole and falls to 1: it is not bounded by 1 here.
print("b'(s):  ", green.db(s))

mode = Dm.solve_radial_mode(metric, 1, 2e3)
print("harmonicity residual:", Dm.harmonicity_residual(metric, mode))

grid = F.log_grid(1e-2, 1e3, 256)
curves = F.frequency_curve(metric, mode, grid)
alpha1 = C.exponent_of(2 / beta**2, 3)
for r in (1e-2, 1.0, 10.0, 100.0, 1e3):
    i = int(np.argmin(abs(curves.r - r)))
    print(f"r = {curves.r[i]:8.3g}   frequency {curves.freq[i]:.10f}   ln(D/E) {F.e_over_d(curves, curves.r[i]): .3e}")
print(f"cone exponent alpha_1 = {alpha1:.10f}")

print("I' = 2D/r residual:", F.check_derivative_identity(curves))
print("W defect on [100, 400]:", F.w_defect(curves, 100.0))
print(F.frequency_bound_scan(metric, mode, alpha1, curves=curves))

# The constant function has I = n V_M on every level set of b.
const = Dm.solve_radial_mode(metric, 0, 2e3)
c_curves = F.frequency_curve(metric, const, grid[::32])
print(f"I of u = 1 ranges over [{c_curves.I.min():.12g}, {c_curves.I.max():.12g}];"
      f" n V_M = {3 * green.constants.V_M:.12g}")
