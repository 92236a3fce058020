"""
The mod-3 cohomology ring of M24
================================

Classes are stored as polynomials in the nine generators and compared by
their restrictions to the two rank-2 elementary abelian 3-subgroups.  This
walks through the ring, its relations and the Steenrod cube.
"""
# %%
from m24tmf.m24ring import M24Ring, check_naturality, check_operation_tables

ring = M24Ring(sigma=1)
print(ring)

# %% dimensions: nothing in degrees 1 mod 4
print([ring.dim(n) for n in range(40)])

# %% a generator and its two restrictions
r = ring.gen("r")
print("r restricts to", [str(x) for x in r.restrictions])

# %% relations are checked by restriction, e.g. rt = 0
t = ring.gen("t")
print("r*t == 0:", (r * t).is_zero())
print(ring.verify_relations())

# %% Steenrod cube on generators; sigma only moves the signs in P(u) and P(v)
for sigma in (1, -1):
    ring = M24Ring(sigma)
    u = ring.gen("u")
    print(f"sigma={sigma:+d}  P(u) =", ring.steenrod_P(u).reduced())
    bad = [name for name, ok in check_operation_tables(ring) if not ok]
    print("  table mismatches:", bad or "none")

# %% naturality of P and the Bockstein against the restriction rings
print(check_naturality(M24Ring(1), 40))
