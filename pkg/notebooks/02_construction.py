# The G_k family: exact mixing time through the lumped chain, and a
# certified lower bound on rho that outgrows it by a factor of order k.
#
# Run with:  python3 notebooks/02_construction.py

from specprofile.construction import (
    build_gk_dense,
    construction_sizes,
    lumped_chain,
    rho_lower_bound,
    simulate_walk,
    tau_construction,
)
from specprofile.mixing import tau_inf

p = construction_sizes(3)
print("k=3 pieces", p.pieces, "|A|", p.a_size, "|B|", p.b_size, "n", p.n)

# Only G_3 is small enough to build; its mixing time matches the lumped value.
g3 = build_gk_dense(3)
print("dense tau(G_3)  =", tau_inf(g3).tau_inf)
print("lumped tau(G_3) =", float(tau_construction(3).tau))

chain = lumped_chain(3, 2)
print("\nclasses from a start in H_2:", dict(zip(chain.labels, chain.sizes)))
for label, row in zip(chain.labels, chain.matrix):
    print(f"  {label:3s}", [str(x) for x in row])

print("\n k     tau        rho_lb      ratio   ratio/k")
for k in range(3, 13):
    t = float(tau_construction(k).tau)
    lb = float(rho_lower_bound(k).value)
    print(f"{k:2d} {t:10.3f} {lb:12.3f} {lb / t:8.3f} {lb / t / k:8.3f}")

# The coin cascade: how often does nothing interesting happen in 16 steps?
stats = simulate_walk(3, 2, 16, seed=0, replicas=100_000)
for key in stats.survival:
    print(f"P({key} > 16): simulated {stats.survival[key]:.5f}  exact {stats.exact[key]:.5f}")
