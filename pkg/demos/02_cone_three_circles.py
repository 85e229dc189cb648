"""
Three circles on metric cones
=============================

On a cone over a round sphere of radius beta the harmonic functions are
finite sums c_i r^alpha_i phi_i.  The mean of u^2 over a ball is a weighted
sum of powers, which is what makes the dyadic three-circles step work.
"""

import numpy as np

from conelab import cone as C
from conelab import three_circles as T
from conelab.errors import PreconditionError

cone = C.ConeSpace(3.0, C.sphere_spectrum(2, 0.8, 6))
spec = C.degree_spectrum(cone)
print("degree spectrum:", np.round(spec.exponents, 6))

h = C.ConeHarmonic.from_terms(cone, [(1.0, 1), (0.3, 2)])
r = np.geomspace(0.1, 100.0, 7)
print("J(r):        ", C.cone_J(h, r))
print("frequency(r):", C.cone_frequency(h, r))  # climbs from alpha_1 to alpha_2

# Premise at (r, r/2), conclusion at (r/2, r/4), alpha between the two exponents.
# Far out the alpha_2 term dominates and the premise fails, so the implication
# is vacuous there.
res = T.three_circles_J(cone, h, r, 2.0)
print("premise:   ", res.premise)
print("conclusion:", res.conclusion)
print("implication holds everywhere:", res.holds)

# An exponent inside the spectrum is refused.
try:
    T.three_circles_J(cone, h, 1.0, float(spec.exponents[2]))
except PreconditionError as exc:
    print("refused:", exc)

# The weighted-sum inequality behind the step, on a small example.
print(T.lemma31(T.WeightSystem((1.0, 1.0), (0.0, 1.0), 0.5)))

# Cascading the step from k0 outward bounds J by a power of r, as long as the
# comparison exponent sits above every exponent present in u.
k0 = 2.0
radii = k0 * 2.0 ** np.arange(8)
for alpha in (2.0, 3.0):
    rep = T.cascade(radii, C.cone_J(h, radii), alpha, k0)
    print(f"cascade with alpha = {alpha}: passes {rep.passes}, first failure at {rep.first_failure},"
          f" envelope constant {rep.envelope_constant:.4g}")

# The pointwise maximum is a different story: max |u| on spheres need not be
# log-convex for harmonic functions in space, unlike holomorphic functions.
e3 = C.ConeSpace(3.0, C.sphere_spectrum(2, 1.0, 5))
u = C.ConeHarmonic.from_terms(e3, [(0.1 / np.sqrt(3), 1), (-1.2 / np.sqrt(7), 3)])
print("max-modulus check for 0.1 r P1 - 1.2 r^3 P3 at r = 5:", C.hadamard_check(u, 5.0, 2))
