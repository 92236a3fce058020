"""E_9 page of the twisted AHSS for tmf of BM24 at p = 3, torsion rows only.

The E_2 page restricted to the torsion rows is H (x) F_3{1, nu, mu, ...} with
H = H^*(M24; F_3).  The differentials d4 = D (x) nu and d8 = -D^2 (x) <nu, nu, ->
string the rows into one chain per Delta^3-power:

    H1 -D-> Hnu -D2-> Hmu -D-> Hnumu -D2-> Hmu^2 -D2-> H{nuDelta} -D-> Hmu^3 -D2-> H{nuDelta}mu -D-> Hmu^4

with D = P - omega = P + eps*r.  Cohomology is computed node by node.
Module structure is read off from three maps acting on E_9: s^3 (H-degree +36),
Delta^3 (shifts the row by one period) and Upsilon = U (x) mu.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .dcomplex import TwistConfig, _M24Ambient, m24_ring
from .fieldalg import EchelonSpan, IntegrityError, identity, matmul, row_reduce, zeros
from .m24ring import M24Class, M24Ring
from .tmfcoeff import TORSION, TmfTorsionClass, massey_nu_nu, nu_mult

CHAIN = ("1", "nu", "mu", "nu*mu", "mu^2", "{nu*Delta}", "mu^3", "{nu*Delta}*mu", "mu^4")
# map leaving CHAIN[i]
MAPS = ("D", "D2", "D", "D2", "D2", "D", "D2", "D")
SHIFT = {"D": 4, "D2": 8}
UPSILON = {"nu": "nu*mu", "{nu*Delta}": "{nu*Delta}*mu"}  # x (x) f -> Ux (x) mu f
UPSILON_SOURCE = {v: k for k, v in UPSILON.items()}
RESIDUE1_NODES = ("nu", "mu", "nu*mu", "{nu*Delta}", "mu^3", "{nu*Delta}*mu")

FAMILY_UPSILON = "F3[s3,D3,Y]"
FAMILY_PLAIN = "F3[s3,D3]"
FAMILY_DELTA = "F3[D3]"

HMAX = 80
KMAX = 2
TOTAL_WINDOW = (-79, 45)
FLAG_HORIZON = 160  # H-degrees used only to decide whether Phi acts freely


def _check_chain():
    # the chain must be exactly the nu / Massey structure of the coefficient table
    for i, tag in enumerate(MAPS):
        x = TmfTorsionClass(CHAIN[i])
        tgt = nu_mult(x) if tag == "D" else massey_nu_nu(x)
        if tgt is None or str(tgt) != CHAIN[i + 1]:
            raise IntegrityError(f"chain map out of {CHAIN[i]} disagrees with the coefficient table")


_check_chain()


@dataclass
class NodeCohomology:
    """ker(out)/im(in) at one node and H-degree."""

    node: str
    m: int
    dim_h: int
    kernel: np.ndarray  # columns
    boundary: EchelonSpan
    reps: np.ndarray  # columns, a basis of a complement of the boundaries in the kernel

    @property
    def dim(self) -> int:
        return self.reps.shape[1]

    def span_with(self, vectors: np.ndarray) -> EchelonSpan:
        sp = EchelonSpan(self.dim_h, 3)
        sp.rows = list(self.boundary.rows)
        sp.pivots = list(self.boundary.pivots)
        for j in range(vectors.shape[1]):
            sp.add(vectors[:, j])
        return sp

    def is_zero_class(self, v: np.ndarray) -> bool:
        return self.boundary.contains(v)


@dataclass
class E9Generator:
    h_rep: M24Class
    node: str
    delta3_power: int
    m: int
    family: str = ""
    flag: str = ""

    @property
    def tmf(self) -> TmfTorsionClass:
        return TmfTorsionClass(self.node, self.delta3_power)

    @property
    def total_degree(self) -> int:
        return self.m + self.tmf.degree

    def label(self) -> str:
        rep = str(self.h_rep)
        if " " in rep:
            rep = f"({rep})"
        return f"{rep}⊗{self.tmf.pretty()}"

    def as_json(self) -> Dict:
        return {"h_rep": str(self.h_rep), "tmf_symbol": str(self.tmf), "delta3_power": self.delta3_power}


@dataclass
class AhssResult:
    cfg: TwistConfig
    degree: int
    generators: List[E9Generator] = field(default_factory=list)
    module: str = ""

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def epsilon(self) -> int:
        return self.cfg.epsilon

    @property
    def omega(self) -> str:
        return self.cfg.omega

    def flags(self) -> Counter:
        return Counter(g.flag for g in self.generators)

    def as_json(self) -> Dict:
        return {
            "omega": self.cfg.omega,
            "epsilon": self.cfg.epsilon,
            "sigma": self.cfg.sigma,
            "degree": self.degree,
            "rank": self.rank,
            "generators": [g.as_json() for g in self.generators],
            "module": self.module,
        }


class AhssEngine:
    def __init__(self, cfg: TwistConfig, hmax: int = HMAX, kmax: int = KMAX, ring: Optional[M24Ring] = None):
        self.cfg = cfg
        self.hmax = hmax
        self.kmax = kmax
        self.ring = ring or m24_ring(cfg.sigma)
        self.amb = _M24Ambient(self.ring)
        self._D: Dict[int, np.ndarray] = {}
        self._nodes: Dict[Tuple[str, int], NodeCohomology] = {}
        self._s3 = self.ring.gen("s") ** 3
        self._s6 = self.ring.gen("s") ** 6
        self._U = self.ring.gen("U")

    # maps on H -------------------------------------------------------------
    def dim(self, m: int) -> int:
        return self.ring.dim(m) if m >= 0 else 0

    def D(self, m: int) -> np.ndarray:
        if m not in self._D:
            if m < 0:
                self._D[m] = zeros(self.dim(m + 4), 0)
            else:
                self._D[m] = self.amb.D(m, self.cfg.epsilon)
        return self._D[m]

    def D2(self, m: int) -> np.ndarray:
        return matmul(self.D(m + 4), self.D(m), 3)

    def chain_map(self, i: int, m: int) -> np.ndarray:
        """d out of node CHAIN[i] at H-degree m: d4 carries (-1)^m, d8 carries -1."""
        tag = MAPS[i]
        if tag == "D":
            return (self.D(m) * (-1) ** m) % 3
        return (-self.D2(m)) % 3

    def mult(self, x: M24Class, m: int) -> np.ndarray:
        if m < 0:
            return zeros(self.dim(m + x.degree), 0)
        return self.ring.multiplication_matrix(x, m)

    # node cohomology ------------------------------------------------------
    def node(self, name: str, m: int) -> NodeCohomology:
        key = (name, m)
        if key in self._nodes:
            return self._nodes[key]
        i = CHAIN.index(name)
        n = self.dim(m)
        if i < len(MAPS) and n:
            out = self.chain_map(i, m)
            ker = row_reduce(out, 3).kernel if out.shape[0] else identity(n)
        else:
            ker = identity(n)
        bnd = EchelonSpan(n, 3)
        if i > 0 and n:
            s = SHIFT[MAPS[i - 1]]
            if self.dim(m - s):
                inc = self.chain_map(i - 1, m - s)
                for j in range(inc.shape[1]):
                    bnd.add(inc[:, j])
        chosen = []
        probe = EchelonSpan(n, 3)
        probe.rows, probe.pivots = list(bnd.rows), list(bnd.pivots)
        for j in range(ker.shape[1]):
            if probe.add(ker[:, j]):
                chosen.append(ker[:, j])
        if len(bnd) + len(chosen) != ker.shape[1]:
            raise IntegrityError(f"boundaries at {name}, H-degree {m} are not cycles (d^2 != 0)")
        reps = np.stack(chosen, axis=1) if chosen else zeros(n, 0)
        nc = NodeCohomology(name, m, n, ker, bnd, reps)
        self._nodes[key] = nc
        return nc

    def check_composites(self, m_range=None) -> bool:
        """Consecutive chain maps compose to zero in every H-degree of the window."""
        for m in m_range or range(0, self.hmax + 1):
            for i in range(len(MAPS) - 1):
                a = self.chain_map(i, m)
                b = self.chain_map(i + 1, m + SHIFT[MAPS[i]])
                if a.size and b.size and matmul(b, a, 3).any():
                    raise IntegrityError(f"d o d != 0 out of {CHAIN[i]} at H-degree {m}")
        return True

    def _rep_class(self, vec: np.ndarray, m: int) -> M24Class:
        return self.ring.from_coordinates(vec, m)

    def _image(self, x: M24Class, src: NodeCohomology) -> np.ndarray:
        if src.dim == 0:
            return zeros(self.dim(src.m + x.degree), 0)
        return matmul(self.mult(x, src.m), src.reps, 3)

    def survives(self, x: M24Class, name: str, m: int, vec: np.ndarray, target: Optional[str] = None) -> bool:
        """Is x * [vec] nonzero in E_9 at node ``target`` (default: same node)?"""
        tgt = self.node(target or name, m + x.degree)
        img = matmul(self.mult(x, m), vec[:, None], 3)[:, 0]
        return not tgt.is_zero_class(img)

    # module generators ----------------------------------------------------
    def module_generators(self, n: int) -> List[E9Generator]:
        """F3[s^3, Delta^3, Upsilon]-generators in total degree n (Delta^3-power 0)."""
        out = []
        for name in CHAIN:
            m = n - TORSION[name]
            if m < 0 or m > self.hmax:
                continue
            nc = self.node(name, m)
            if nc.dim == 0:
                continue
            imgs = [self._image(self._s3, self.node(name, m - 36))] if m >= 36 else []
            if name in UPSILON_SOURCE and m >= 10:
                imgs.append(self._image(self._U, self.node(UPSILON_SOURCE[name], m - 10)))
            span = nc.span_with(np.hstack(imgs) if imgs else zeros(nc.dim_h, 0))
            for j in range(nc.dim):
                v = nc.reps[:, j]
                if not span.add(v):
                    continue
                g = E9Generator(self._rep_class(v, m), name, 0, m)
                s3_free = self.survives(self._s3, name, m, v)
                if name in UPSILON:
                    if not self.survives(self._U, name, m, v, UPSILON[name]):
                        raise IntegrityError(f"Upsilon kills the generator {g.label()}")
                    g.family = FAMILY_UPSILON
                else:
                    g.family = FAMILY_PLAIN if s3_free else FAMILY_DELTA
                g.flag = "edge" if m + 36 > self.hmax else ""
                out.append(g)
        return out

    def e9_generators(self, residue: int = 1) -> List[E9Generator]:
        lo, hi = TOTAL_WINDOW
        gens = []
        for n in range(lo, hi + 1):
            if n % 4 == residue % 4:
                gens += self.module_generators(n)
        return gens

    # groups in one total degree ---------------------------------------------
    def components(self, n: int) -> List[Tuple[str, int, int]]:
        out = []
        for name in CHAIN:
            for k in range(self.kmax + 1):
                m = n - TorsionDegree(name, k)
                if 0 <= m <= self.hmax:
                    out.append((name, k, m))
        return out

    def group_at(self, n: int) -> AhssResult:
        """E_9 in total degree n as F3[Phi]-generators, Phi = s^6 (x) Delta^3 (degree 0)."""
        res = AhssResult(self.cfg, n)
        for name, k, m in self.components(n):
            nc = self.node(name, m)
            if nc.dim == 0:
                continue
            if k >= 1 and m >= 72:
                span = nc.span_with(self._image(self._s6, self.node(name, m - 72)))
            else:
                span = nc.span_with(zeros(nc.dim_h, 0))
            for j in range(nc.dim):
                v = nc.reps[:, j]
                if not span.add(v):
                    continue
                g = E9Generator(self._rep_class(v, m), name, k, m)
                if m + 72 <= FLAG_HORIZON:
                    g.flag = "periodic" if self.survives(self._s6, name, m, v) else "torsion"
                else:
                    g.flag = "unknown"
                res.generators.append(g)
        per = sum(1 for g in res.generators if g.flag == "periodic")
        tor = sum(1 for g in res.generators if g.flag == "torsion")
        unk = res.rank - per - tor
        parts = []
        if per:
            parts.append(f"F3[Phi]^{per}")
        if tor:
            parts.append(f"F3^{tor}")
        if unk:
            parts.append(f"?^{unk}")
        res.module = " + ".join(parts) if parts else "0"
        return res


def TorsionDegree(name: str, k: int) -> int:
    return TORSION[name] - 72 * k


# ---------------------------------------------------------------------------
# module-level helpers


_ENGINES: Dict[Tuple[int, int, int, int], AhssEngine] = {}


def engine(cfg: TwistConfig, hmax: int = HMAX, kmax: int = KMAX) -> AhssEngine:
    key = (cfg.epsilon, cfg.sigma, hmax, kmax)
    if key not in _ENGINES:
        _ENGINES[key] = AhssEngine(cfg, hmax, kmax)
    return _ENGINES[key]


def build_total_complex(cfg: TwistConfig, n: int) -> List[Tuple[str, int, int, np.ndarray]]:
    """Chain maps (source node, Delta^3-power, H-degree, matrix) in total degree n."""
    eng = engine(cfg)
    eng.check_composites()
    out = []
    for name, k, m in eng.components(n):
        i = CHAIN.index(name)
        if i < len(MAPS):
            out.append((name, k, m, eng.chain_map(i, m)))
    return out


@dataclass
class E9Summary:
    cfg: TwistConfig
    generators: List[E9Generator]

    def degrees(self, family: str) -> List[int]:
        return sorted((g.total_degree for g in self.generators if g.family == family), reverse=True)

    def families(self) -> Dict[str, List[int]]:
        return {f: self.degrees(f) for f in (FAMILY_UPSILON, FAMILY_PLAIN, FAMILY_DELTA)}

    def as_json(self) -> Dict:
        return {
            "omega": self.cfg.omega,
            "epsilon": self.cfg.epsilon,
            "sigma": self.cfg.sigma,
            "families": [
                {
                    "module": f,
                    "generators": [
                        dict(g.as_json(), degree=g.total_degree)
                        for g in sorted(self.generators, key=lambda g: -g.total_degree)
                        if g.family == f
                    ],
                }
                for f in (FAMILY_UPSILON, FAMILY_PLAIN, FAMILY_DELTA)
            ],
        }


def e9_classes(cfg: TwistConfig, residue: int = 1) -> E9Summary:
    eng = engine(cfg)
    return E9Summary(cfg, eng.e9_generators(residue))


def group_at(cfg: TwistConfig, n: int) -> AhssResult:
    return engine(cfg).group_at(n)


def restriction_to_point(result: AhssResult) -> List[E9Generator]:
    """Generators living in the H^0 column."""
    return [g for g in result.generators if g.m == 0]


def fr_subring_exactness(epsilon: int, cutoff: int = 80) -> bool:
    """D = P + eps*r is exact on F_3[r]: D(r^i) = (eps - i) r^{i+1}, a single 3-complex chain."""
    from .lcomplex import EllComplex, cohomology

    eps = epsilon % 3
    count = cutoff // 4 + 1
    dims = {i: 1 for i in range(count)}
    maps = {i: np.array([[(eps - i) % 3]], dtype=np.int64) for i in range(count - 1)}
    c = EllComplex(3, 3, dims, maps)
    # ignore blocks cut by the window's top edge
    return not [b for b in cohomology(c).blocks if b.top + 1 < count]


def fr_subring_cohomology(epsilon: int, cutoff: int = 80):
    from .lcomplex import EllComplex, cohomology

    eps = epsilon % 3
    count = cutoff // 4 + 1
    dims = {i: 1 for i in range(count)}
    maps = {i: np.array([[(eps - i) % 3]], dtype=np.int64) for i in range(count - 1)}
    return [b for b in cohomology(EllComplex(3, 3, dims, maps)).blocks if b.top + 1 < count]


# d5 / d9 bookkeeping ------------------------------------------------------

D5_TARGETS = {"c4": ("c6", -12), "c6": ("c4^2", -16), "mu^2": ("{3Delta}", -24)}


@dataclass(frozen=True)
class HigherDifferential:
    """Degree data for x (x) f -> op(x) (x) g; op raises H-degree by ``h_shift``."""

    name: str
    h_shift: int
    source: str
    source_degree: int
    target: str
    target_degree: int

    def target_total(self, m: int) -> int:
        return m + self.h_shift + self.target_degree

    def source_total(self, m: int) -> int:
        return m + self.source_degree


def d5_map(source: str) -> HigherDifferential:
    """d5 = (integral Bockstein o D) (x) {c4 -> c6, c6 -> c4^2, mu^2 -> {3Delta}}."""
    if source not in D5_TARGETS:
        raise ValueError(f"d5 is not defined on {source!r}")
    src_deg = {"c4": -8, "c6": -12, "mu^2": -20}[source]
    tgt, tdeg = D5_TARGETS[source]
    return HigherDifferential("d5", 5, source, src_deg, tgt, tdeg)


def d9_map(source: str = "c4") -> HigherDifferential:
    """d9 = -(integral Bockstein o D^2) (x) c4: f -> c4 f."""
    base = {"1": 0, "c4": -8, "c6": -12}
    if source not in base:
        raise ValueError(f"d9 bookkeeping covers 1, c4, c6 (got {source!r})")
    return HigherDifferential("d9", 9, source, base[source], f"c4*{source}" if source != "1" else "c4", base[source] - 8)


__all__ = [
    "CHAIN",
    "MAPS",
    "UPSILON",
    "FAMILY_UPSILON",
    "FAMILY_PLAIN",
    "FAMILY_DELTA",
    "AhssEngine",
    "AhssResult",
    "E9Generator",
    "E9Summary",
    "NodeCohomology",
    "engine",
    "build_total_complex",
    "e9_classes",
    "group_at",
    "restriction_to_point",
    "fr_subring_exactness",
    "fr_subring_cohomology",
    "HigherDifferential",
    "d5_map",
    "d9_map",
]
