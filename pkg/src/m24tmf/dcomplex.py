"""The 3-differential D = P + eps*x on mod-3 cohomology rings and its cohomology.

Three ambients are supported: H^*(M24; F_3) with x = r, its subring F_3[R, r]
with x = r, and H^*(Z_3; F_3) = F_3[A, a] with x = a^2.  D raises degree by
4, so each ambient splits by degree mod 4; on M24 it also preserves the
auxiliary degree (0 on R, r and 1 on every other generator).  Each piece is
reindexed to a step-1 complex and decomposed with :mod:`m24tmf.lcomplex`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .fieldalg import (
    GeneratorSpec,
    GradedOperator,
    IntegrityError,
    SuperAlgebra,
    cyclic_group_ring,
    matmul,
    twisted_matrix,
    zeros,
)
from .lcomplex import EllComplex, block_representatives, verify_nilpotency
from .m24ring import M24Ring

AMBIENTS = ("m24", "FRr", "FAa")
PERIOD = 36
# periods are counted from degree 3: the 2 mod 4 classes are U-translates
# (degree +10) of 0 mod 4 classes, so the family {2 + 36k} first occurs at 38
PERIOD_START = 3
MARGIN = 8  # complexes are built this far past the cutoff so no block is truncated
NONPERIODIC = (3, 2)  # the {3->7} class R -> Rr, present only for eps = 0


def omega_label(epsilon: int) -> str:
    """omega = -eps * r."""
    return {0: "0", 1: "-r", 2: "+r"}[epsilon % 3]


def epsilon_of(omega: str) -> int:
    table = {"0": 0, "-r": 1, "+r": -1, "r": -1}
    if omega not in table:
        raise ValueError(f"omega must be one of 0, +r, -r (got {omega!r})")
    return table[omega]


def _sym(e: int) -> int:
    e %= 3
    return -1 if e == 2 else e


@dataclass(frozen=True)
class TwistConfig:
    epsilon: int = 0
    sigma: int = 1
    cutoff: int = 80

    def __post_init__(self):
        object.__setattr__(self, "epsilon", _sym(self.epsilon))
        if self.sigma not in (1, -1):
            raise ValueError("sigma must be +1 or -1")

    @property
    def omega(self) -> str:
        return omega_label(self.epsilon)


# ---------------------------------------------------------------------------
# ambients: each provides labelled bases and D matrices degree by degree


class _Ambient:
    name = ""

    def labels(self, n: int) -> List[str]:
        raise NotImplementedError

    def aux(self, n: int) -> List[int]:
        return [0] * len(self.labels(n))

    def D(self, n: int, eps: int) -> np.ndarray:
        raise NotImplementedError

    def dim(self, n: int) -> int:
        return len(self.labels(n))


class _M24Ambient(_Ambient):
    name = "m24"

    def __init__(self, ring: M24Ring):
        self.ring = ring
        self.r = ring.gen("r")

    def labels(self, n):
        if n < 0:
            return []
        return [self.ring.format_monomial(m).replace("*", "") for m in self.ring.basis_slice(n).monomials]

    def aux(self, n):
        return [self.ring.aux_degree(m) for m in self.ring.basis_slice(n).monomials] if n >= 0 else []

    def D(self, n, eps):
        if n < 0:
            return zeros(self.dim(n + 4), 0)
        P = self.ring.operator_matrix("P", n)
        if eps % 3 == 0:
            return P
        return (P + eps * self.ring.multiplication_matrix(self.r, n)) % 3

    def element(self, n, vec):
        return self.ring.from_coordinates(vec, n)


class _PolyAmbient(_Ambient):
    """A small free algebra with explicit Steenrod cube and twisting class."""

    def __init__(self, name, algebra: SuperAlgebra, P: GradedOperator, twist: str):
        self.name = name
        self.alg = algebra
        self.P = P
        self.twist = twist

    def labels(self, n):
        return [self.alg.format_monomial(m).replace("*", "") for m in self.alg.monomial_basis(n)]

    def D(self, n, eps):
        x = self.alg.gen(self.twist) if self.twist != "a^2" else self.alg.gen("a") ** 2
        return twisted_matrix(self.P, x, eps, n)

    def element(self, n, vec):
        return self.alg.from_vector(vec, n)


def _frr_ambient() -> _PolyAmbient:
    alg = SuperAlgebra([GeneratorSpec("R", 3, True), GeneratorSpec("r", 4)], 3)
    R, r = alg.gen("R"), alg.gen("r")
    P = GradedOperator(alg, 4, {"R": R * r, "r": -(r * r)}, "plain", "P")
    return _PolyAmbient("FRr", alg, P, "r")


def _faa_ambient() -> _PolyAmbient:
    alg = cyclic_group_ring(3)
    P = GradedOperator(alg, 4, {"A": alg.zero(5), "a": alg.gen("a") ** 3}, "plain", "P")
    return _PolyAmbient("FAa", alg, P, "a^2")


_RINGS: Dict[int, M24Ring] = {}


def m24_ring(sigma: int = 1) -> M24Ring:
    """Process-wide ring per sigma, so bases and matrices are built once."""
    if sigma not in _RINGS:
        _RINGS[sigma] = M24Ring(sigma)
    return _RINGS[sigma]


def get_ambient(name: str, sigma: int = 1, ring: Optional[M24Ring] = None) -> _Ambient:
    if name == "m24":
        return _M24Ambient(ring or m24_ring(sigma))
    if name == "FRr":
        return _frr_ambient()
    if name == "FAa":
        return _faa_ambient()
    raise ValueError(f"unknown ambient {name!r}; expected one of {AMBIENTS}")


# ---------------------------------------------------------------------------


@dataclass
class Piece:
    """One step-1 sub-complex: degree residue mod 4 and auxiliary degree."""

    residue: int
    aux: Optional[int]
    complex: EllComplex
    indices: Dict[int, List[int]]  # step index -> positions inside the ambient basis

    def degree(self, k: int) -> int:
        return self.residue + 4 * k


def build_D(
    cfg: TwistConfig, ambient: str = "m24", ring: Optional[M24Ring] = None, extent: Optional[int] = None
) -> List[Piece]:
    """D = P + eps*x on every (residue, aux) piece up to ``extent`` (default: the cutoff)."""
    amb = get_ambient(ambient, cfg.sigma, ring)
    top_degree = cfg.cutoff if extent is None else extent
    pieces = []
    for res in range(4):
        degs = list(range(res, top_degree + 1, 4))
        auxes = sorted({a for n in degs for a in amb.aux(n)})
        for a in auxes:
            idx = {k: [i for i, x in enumerate(amb.aux(n)) if x == a] for k, n in enumerate(degs)}
            dims = {k: len(v) for k, v in idx.items()}
            maps = {}
            for k, n in enumerate(degs[:-1]):
                full = amb.D(n, cfg.epsilon)
                src, tgt = idx[k], idx[k + 1]
                if ambient == "m24":
                    other = [i for i in range(full.shape[0]) if i not in set(tgt)]
                    if full[np.ix_(other, src)].any():
                        raise IntegrityError(f"D mixes auxiliary degrees out of degree {n}")
                maps[k] = full[np.ix_(tgt, src)] if src and tgt else zeros(len(tgt), len(src))
            c = EllComplex(3, 3, dims, maps)
            if not verify_nilpotency(c):
                raise IntegrityError(f"D^3 != 0 on residue {res}, aux {a} ({ambient}, eps={cfg.epsilon})")
            pieces.append(Piece(res, a if ambient == "m24" else None, c, idx))
    return pieces


def full_D_matrices(cfg: TwistConfig, ambient: str = "m24") -> Dict[int, np.ndarray]:
    """Unsplit D out of each degree 0..cutoff (targets may exceed the cutoff)."""
    amb = get_ambient(ambient, cfg.sigma)
    return {n: amb.D(n, cfg.epsilon) for n in range(cfg.cutoff + 1)}


def nilpotency_holds(cfg: TwistConfig, ambient: str = "m24") -> bool:
    """D^3 = 0 as a matrix identity on each degree slice up to the cutoff."""
    amb = get_ambient(ambient, cfg.sigma)
    for n in range(cfg.cutoff + 1):
        d3 = matmul(amb.D(n + 8, cfg.epsilon), matmul(amb.D(n + 4, cfg.epsilon), amb.D(n, cfg.epsilon), 3), 3)
        if d3.any():
            return False
    return True


@dataclass
class DClass:
    start: int  # cohomological degree of the generator
    length: int
    aux: Optional[int]
    representatives: list  # generator, then its D-image for length 2
    edge: bool = False

    @property
    def top(self) -> int:
        return self.start + 4 * (self.length - 1)

    @property
    def descriptor(self) -> str:
        if self.length == 1:
            return "{%d}" % self.start
        return "{%d->%d}" % (self.start, self.top)

    @property
    def fermion(self) -> bool:
        return self.length == 2

    def key(self) -> Tuple[int, int]:
        return (self.start, self.length)

    def __str__(self) -> str:
        reps = " -> ".join(str(x).replace("*", "") for x in self.representatives)
        return f"{self.descriptor} [{reps}]" + (" (edge)" if self.edge else "")


@dataclass
class DCohomologyReport:
    cfg: TwistConfig
    ambient: str
    classes: List[DClass] = field(default_factory=list)

    @property
    def reliable(self) -> List[DClass]:
        return [c for c in self.classes if not c.edge]

    def period(self, k: int) -> List[DClass]:
        lo = PERIOD_START + k * PERIOD
        return [c for c in self.reliable if lo <= c.start < lo + PERIOD]

    def mod36(self, k: int = 0, exclude_nonperiodic: bool = True) -> Counter:
        out = Counter((c.start % PERIOD, c.length) for c in self.period(k))
        if exclude_nonperiodic and k == 0 and self.ambient == "m24" and self.cfg.epsilon == 0:
            out[NONPERIODIC] -= 1
            out = +out
        return out

    def nonperiodic(self) -> List[DClass]:
        if self.ambient == "m24" and self.cfg.epsilon == 0:
            return [c for c in self.reliable if c.key() == NONPERIODIC]
        return []

    def descriptors(self, k: Optional[int] = None) -> List[str]:
        cls = self.reliable if k is None else self.period(k)
        return [c.descriptor for c in cls]

    def in_degree(self, n: int) -> List[DClass]:
        return [c for c in self.classes if c.start == n]


def _fmt_descriptor(start: int, length: int) -> str:
    return "{%d}" % start if length == 1 else "{%d->%d}" % (start, start + 4)


def mod36_descriptors(counts: Counter) -> List[str]:
    out = []
    for (s, l), m in sorted(counts.items()):
        out += [_fmt_descriptor(s, l)] * m
    return out


def d_cohomology(cfg: TwistConfig, ambient: str = "m24", ring: Optional[M24Ring] = None) -> DCohomologyReport:
    amb = get_ambient(ambient, cfg.sigma, ring)
    report = DCohomologyReport(cfg, ambient)
    for piece in build_D(cfg, ambient, ring, cfg.cutoff + MARGIN):
        c = piece.complex
        for blk, x in block_representatives(c):
            if blk.free:
                continue
            start = piece.degree(blk.start)
            top = piece.degree(blk.top)
            if start > cfg.cutoff:
                continue
            reps = []
            vec = x
            for k in range(blk.length):
                n = piece.degree(blk.start + k)
                full = np.zeros(amb.dim(n), dtype=np.int64)
                full[piece.indices[blk.start + k]] = vec
                reps.append(amb.element(n, full))
                if k + 1 < blk.length:
                    vec = matmul(c.D(blk.start + k), vec[:, None], 3)[:, 0]
            report.classes.append(DClass(start, blk.length, piece.aux, reps, top > cfg.cutoff))
    report.classes.sort(key=lambda d: (d.start, d.length, d.aux if d.aux is not None else -1))
    return report


def periodicity_check(report: DCohomologyReport, shift: int = PERIOD, exclude_nonperiodic: bool = True) -> bool:
    """Period-0 classes match period-1 classes after adding ``shift``."""
    if shift != PERIOD:
        raise ValueError("only the s^3 period of 36 is supported")
    first = report.mod36(0, exclude_nonperiodic)
    second = report.mod36(1, False)
    return first == second


__all__ = [
    "AMBIENTS",
    "PERIOD",
    "PERIOD_START",
    "TwistConfig",
    "omega_label",
    "epsilon_of",
    "m24_ring",
    "get_ambient",
    "Piece",
    "build_D",
    "full_D_matrices",
    "nilpotency_holds",
    "DClass",
    "DCohomologyReport",
    "d_cohomology",
    "periodicity_check",
    "mod36_descriptors",
]
