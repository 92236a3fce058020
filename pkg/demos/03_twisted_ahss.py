"""
The twisted AHSS for tmf of BM24 at p = 3
=========================================

On the E9 page in total degrees 1 mod 4 only the torsion rows
nu, mu, nu*mu, {nu*Delta}, mu^3, {nu*Delta}*mu contribute.  The d4 and d8
differentials are D and D^2 tensored with multiplication by nu and the
Massey product <nu, nu, ->.
"""
# %%
from m24tmf.ahss import e9_classes, fr_subring_exactness, group_at, restriction_to_point
from m24tmf.dcomplex import TwistConfig
from m24tmf.tmfcoeff import table_markdown

print(table_markdown())

# %% generator degrees of the three module families
for eps in (0, 1, -1):
    summary = e9_classes(TwistConfig(eps, 1))
    print(f"eps={eps:+d}", summary.families())

# %% the groups in degrees -27, -3 and +1
for eps in (0, 1, -1):
    cfg = TwistConfig(eps, 1)
    for n in (-27, -3, 1):
        res = group_at(cfg, n)
        gens = ", ".join(f"{g.label()} [{g.flag}]" for g in res.generators)
        print(f"omega={cfg.omega:>2} degree {n:>3}: {res.module:<16} {gens}")

# %% 1 (x) nu lives in the H^0 column and restricts nontrivially to a point
for eps in (0, 1, -1):
    res = group_at(TwistConfig(eps, 1), -3)
    print(TwistConfig(eps).omega, [g.label() for g in restriction_to_point(res)])

# %% D is exact on F3[r] only for eps = -1
print([fr_subring_exactness(e) for e in (0, 1, -1)])
