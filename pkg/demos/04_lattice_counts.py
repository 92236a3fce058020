"""
Ground states of the twisted D12+ lattice
=========================================

Norm-1 vectors in D12+ + R + g, split by whether lambda - g is integral
(boson) or half-integral (fermion).
"""
# %%
import numpy as np

from m24tmf.d12lattice import TWISTS, coset_norm_vectors, ground_state_count, lattice_table, random_translate

for row in lattice_table():
    print(row)

# %% the vectors for 4B
for v in coset_norm_vectors(TWISTS["4B"], 1):
    print(v)

# %% moving g by a lattice vector keeps the coset; a glue vector swaps the parity labels
rng = np.random.default_rng(3)
g = TWISTS["3A"]
for half in (False, True):
    t = random_translate(rng, half=half)
    print("glue" if half else "integral", ground_state_count(g.translate(t)))
