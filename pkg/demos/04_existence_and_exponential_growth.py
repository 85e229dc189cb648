"""
Exhausting by balls: polynomial growth versus exponential growth
=================================================================

Dirichlet solutions on balls B(k0 2^i), normalized to J(k0/2) = 1, converge
to a nonconstant harmonic function of polynomial growth on models with a
conical end.  On a model with a cylindrical end the k = 1 mode grows
exponentially and the doubling check breaks at the first level.
"""

from conelab import cone as C
from conelab import dirichlet as Dm
from conelab import profiles as P

beta = 0.8
asym = P.asym_conical(beta, 3)
d = C.exponent_of(2 / beta**2, 3) + 0.3
rep = Dm.existence_pipeline(asym, 1, d, levels=6, k0=2.0)
print("asym-conical, d =", round(d, 4))
for stage, verdict in rep.verdicts.items():
    print(f"  {stage:<13} {verdict}")
print("  normalizers:", [f"{x:.4g}" for x in rep.normalizers])
print("  sup differences between levels:", [f"{x:.1e}" for x in rep.sup_differences])
print("  envelope C =", rep.envelope_C, " u(p) =", rep.u_at_pole, " J(k0/2) =", rep.J_half_k0)

ding = P.ding(3)
print("\ncylindrical end: growth of the k = 1 branch is", Dm.growth_classification(ding, 1, r_max=40.0))
print("  expected rate sqrt(2)/a =", 2**0.5 / ding.profile.a)
bad = Dm.existence_pipeline(ding, 1, 2.0, levels=6, k0=2.0)
print("  pipeline fails at:", bad.failed_stage, " envelope divergent:", bad.envelope_divergent)
for note in bad.notes:
    print("   -", note)

# The same exhaustion with d below the first exponent is rejected up front.
print("\nd = 1.2 on the conical model:", Dm.existence_pipeline(asym, 1, 1.2).verdicts["precondition"])
