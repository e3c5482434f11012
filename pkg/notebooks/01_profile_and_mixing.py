# Spectral profile, rho and the uniform mixing time on a few small graphs.
#
# Run with:  python3 notebooks/01_profile_and_mixing.py

import math

from specprofile.experiments import complete_graph, cycle_graph, path_graph
from specprofile.graph import build_graph
from specprofile.mixing import tau_inf
from specprofile.profile import rayleigh_sets, rho, spectral_profile

# A weighted path: the heavy edge 0-1 makes vertex 2 the lightest.
g = build_graph(3, [(0, 1, 2.0), (1, 2, 1.0)])
print("pi =", g.pi)

curve = spectral_profile(g)
print("\nprofile bands (r_from, r_to, Lambda):")
for a, b, v in curve.bands():
    print(f"  [{a:.4f}, {b:.4f})  {v:.6f}")

# rho integrates 2 / (r Lambda(r)) over [4 pi_*, 8]; it always dominates tau.
for name, h in [("K2", complete_graph(2)), ("K3", complete_graph(3)), ("P8", path_graph(8)), ("C10", cycle_graph(10))]:
    t = tau_inf(h).tau_inf
    r = rho(h)
    print(f"{name:4s} tau = {t:8.4f}   rho = {r.rho:8.4f}   rho/tau = {r.rho / t:6.3f}   dyadic sum = {r.dyadic_sum:.4f}")

print("\nclosed forms: tau(K2) =", math.log(2) / 2, " rho(K3) =", 4 / 3 * math.log(6))

# Rayleigh sets: the best set at each dyadic scale of measure.
for s in rayleigh_sets(path_graph(8)):
    print(f"k={s.k}  A={s.vertices}  pi(A)={s.measure:.4f}  lambda={s.lam:.5f}")
