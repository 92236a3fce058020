"""
3-differentials and their cohomology
====================================

D = P + eps*r satisfies D^3 = 0.  Its cohomology is read off from a Jordan
decomposition: blocks of length 1 and 2 survive, free blocks of length 3
do not.
"""
# %%
import numpy as np

from m24tmf.dcomplex import TwistConfig, d_cohomology, mod36_descriptors, omega_label
from m24tmf.lcomplex import block_decompose, cohomology, jordan_block, random_complex, tensor, verlinde_fuse

# %% one Jordan block of length 2 is a fermionic line
h = cohomology(jordan_block(2, 3, 3, start=11))
print([(str(b), b.parity, float(b.spin)) for b in h.blocks])

# %% tensor products follow the Verlinde rules at level l-2
rng = np.random.default_rng(1)
a, _ = random_complex(rng, 3, max_dim=10)
b, _ = random_complex(rng, 3, max_dim=10)
la = sorted(x.length for x in cohomology(a).blocks)
lb = sorted(x.length for x in cohomology(b).blocks)
print("a:", la, "b:", lb)
print("a (x) b:", sorted(x.length for x in cohomology(tensor(a, b)).blocks))
print("fusion:", sorted(z for x in la for y in lb for z in verlinde_fuse(x, y, 3)))

# %% warm-up: F3[A, a] with D = P + eps*a^2
for eps in (0, 1, -1):
    rep = d_cohomology(TwistConfig(eps, 1, 24), "FAa")
    print(f"eps={eps:+d}", [c.descriptor for c in rep.reliable if c.start % 2 == 0])

# %% the M24 ring, reduced mod 36 (s^3 has degree 36)
for eps in (0, 1, -1):
    rep = d_cohomology(TwistConfig(eps, 1, 80))
    print(f"omega={omega_label(eps):>2}:", " ".join(mod36_descriptors(rep.mod36(0))))
    if rep.nonperiodic():
        print("   nonperiodic:", [str(c) for c in rep.nonperiodic()])

# %% the blocks themselves, with representatives
rep = d_cohomology(TwistConfig(0, 1, 40))
for c in rep.reliable[:8]:
    print(c)
print(len(block_decompose(jordan_block(3, 3, 3))), "free block")
