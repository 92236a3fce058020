"""Graded spaces with a nilpotent degree +1 operator D, D^ell = 0.

Such a complex splits into Jordan-type blocks (a start degree and a length
between 1 and ell).  Blocks of length ell are free and carry no cohomology; the
remaining blocks form the semisimplified cohomology.  Multiplicities come from
ranks of powers of D, so no basis choices are involved.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .fieldalg import IntegrityError, EchelonSpan, identity, matmul, rank, row_reduce, zeros


@dataclass(frozen=True, order=True)
class Block:
    start: int
    length: int
    ell: int = 3

    @property
    def spin(self) -> Fraction:
        return Fraction(2 * self.start + self.length - 1, 2)

    @property
    def fermion(self) -> bool:
        return self.length % 2 == 0

    @property
    def parity(self) -> str:
        return "fermion" if self.fermion else "boson"

    @property
    def free(self) -> bool:
        return self.length == self.ell

    @property
    def top(self) -> int:
        return self.start + self.length - 1

    def __str__(self) -> str:
        if self.length == 1:
            return "{%d}" % self.start
        return "{%d->%d}" % (self.start, self.top)


class EllComplex:
    """Finite Z-graded F_p space with D: V_d -> V_{d+1} and D^ell = 0."""

    def __init__(self, ell: int, p: int, dims: Dict[int, int], maps: Optional[Dict[int, np.ndarray]] = None):
        if ell < 1:
            raise ValueError("ell must be positive")
        self.ell = ell
        self.p = p
        self.dims = {d: n for d, n in dims.items() if n > 0}
        self.maps: Dict[int, np.ndarray] = {}
        for d, m in (maps or {}).items():
            m = np.asarray(m, dtype=np.int64) % p
            want = (self.dim(d + 1), self.dim(d))
            if m.shape != want:
                raise ValueError(f"map out of degree {d} has shape {m.shape}, expected {want}")
            if m.size and m.any():
                self.maps[d] = m
        self._pow_memo: Dict[Tuple[int, int], np.ndarray] = {}

    def __repr__(self) -> str:
        return f"EllComplex(ell={self.ell}, p={self.p}, dims={dict(sorted(self.dims.items()))})"

    def dim(self, d: int) -> int:
        return self.dims.get(d, 0)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    @property
    def degrees(self) -> List[int]:
        return sorted(self.dims)

    def D(self, d: int) -> np.ndarray:
        if d in self.maps:
            return self.maps[d]
        return zeros(self.dim(d + 1), self.dim(d))

    def power(self, d: int, k: int) -> np.ndarray:
        """Matrix of D^k from V_d to V_{d+k}."""
        if k == 0:
            return identity(self.dim(d))
        key = (d, k)
        if key not in self._pow_memo:
            self._pow_memo[key] = matmul(self.D(d + k - 1), self.power(d, k - 1), self.p)
        return self._pow_memo[key]

    def r(self, k: int, d: int) -> int:
        """Rank of D^k out of degree d (r_0 is dim V_d)."""
        if k == 0:
            return self.dim(d)
        if self.dim(d) == 0 or self.dim(d + k) == 0:
            return 0
        return rank(self.power(d, k), self.p)


def verify_nilpotency(c: EllComplex) -> bool:
    return all(not c.power(d, c.ell).any() for d in c.degrees)


def _multiplicities(c: EllComplex) -> Dict[Tuple[int, int], int]:
    out = {}
    ell = c.ell
    for d in c.degrees:
        for k in range(1, ell + 1):
            m = c.r(k - 1, d) - c.r(k, d) - c.r(k, d - 1) + c.r(k + 1, d - 1)
            if m < 0:
                raise IntegrityError(f"negative multiplicity for length {k} at degree {d}")
            if m:
                out[(d, k)] = m
    return out


def block_decompose(c: EllComplex, check: bool = True) -> List[Block]:
    """All blocks, free ones included, sorted by (start, length)."""
    if check and not verify_nilpotency(c):
        raise IntegrityError(f"D^{c.ell} is not zero")
    blocks = []
    for (d, k), m in sorted(_multiplicities(c).items()):
        blocks += [Block(d, k, c.ell)] * m
    if sum(b.length for b in blocks) != c.total_dim:
        raise IntegrityError("block lengths do not add up to the total dimension")
    return blocks


@dataclass
class CohomologyObject:
    ell: int
    blocks: List[Block] = field(default_factory=list)

    @property
    def total_dim(self) -> int:
        return sum(b.length for b in self.blocks)

    def lengths(self) -> Counter:
        return Counter(b.length for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return ", ".join(str(b) for b in self.blocks) if self.blocks else "0"


def cohomology(c: EllComplex) -> CohomologyObject:
    return CohomologyObject(c.ell, [b for b in block_decompose(c) if not b.free])


def block_representatives(c: EllComplex) -> List[Tuple[Block, np.ndarray]]:
    """A generating vector in V_start for each block.

    For a length-L block at d we take x in ker D^L whose image D^{L-1}x is
    independent modulo D^L(V_{d-1}) and the images already chosen.
    """
    mults = _multiplicities(c)
    out = []
    for (d, L), m in sorted(mults.items()):
        tgt = d + L - 1
        span = EchelonSpan(c.dim(tgt), c.p)
        if c.dim(d - 1):
            img = c.power(d - 1, L)
            for j in range(img.shape[1]):
                span.add(img[:, j])
        ker = row_reduce(c.power(d, L), c.p).kernel if c.dim(d + L) else identity(c.dim(d))
        low = c.power(d, L - 1)
        found = 0
        for j in range(ker.shape[1]):
            x = ker[:, j]
            if span.add(matmul(low, x[:, None], c.p)[:, 0]):
                out.append((Block(d, L, c.ell), x))
                found += 1
                if found == m:
                    break
        if found != m:
            raise IntegrityError(f"could not find {m} generators for length {L} at degree {d}")
    return out


def tensor(a: EllComplex, b: EllComplex) -> EllComplex:
    """Degreewise tensor product with D(v x w) = Dv x w + v x Dw."""
    if a.ell != b.ell or a.p != b.p:
        raise ValueError("tensor factors need the same ell and field")
    # slice of degree n is the direct sum over (i, n - i) in a's degree order
    layout: Dict[int, List[Tuple[int, int, int]]] = {}
    for i in a.degrees:
        for j in b.degrees:
            layout.setdefault(i + j, []).append((i, j, 0))
    offsets: Dict[Tuple[int, int], int] = {}
    dims = {}
    for n, parts in layout.items():
        off = 0
        for i, j, _ in parts:
            offsets[(i, j)] = off
            off += a.dim(i) * b.dim(j)
        dims[n] = off
    maps = {}
    for n, parts in layout.items():
        if n + 1 not in dims:
            continue
        m = zeros(dims[n + 1], dims[n])
        for i, j, _ in parts:
            sz = a.dim(i) * b.dim(j)
            src = offsets[(i, j)]
            if (i + 1, j) in offsets:
                blk = np.kron(a.D(i), identity(b.dim(j)))
                tgt = offsets[(i + 1, j)]
                m[tgt : tgt + blk.shape[0], src : src + sz] += blk
            if (i, j + 1) in offsets:
                blk = np.kron(identity(a.dim(i)), b.D(j))
                tgt = offsets[(i, j + 1)]
                m[tgt : tgt + blk.shape[0], src : src + sz] += blk
        maps[n] = m % a.p
    return EllComplex(a.ell, a.p, dims, maps)


def quantum_dimension(n: int, ell: int, q: int = 1, p: Optional[int] = None) -> int:
    """[n]_q = (q^n - 1)/(q - 1) in F_p (p defaults to ell); equals n at q = 1."""
    p = p or ell
    if not 1 <= n <= ell:
        raise ValueError("length must lie between 1 and ell")
    return sum(pow(q, i, p) for i in range(n)) % p


def verlinde_fuse(a: int, b: int, ell: int) -> List[int]:
    """SL(2) fusion at level ell - 2 on the labels 1..ell-1 (labels are block lengths)."""
    for x in (a, b):
        if not 1 <= x <= ell - 1:
            raise ValueError(f"label {x} outside 1..{ell - 1}")
    lo = abs(a - b) + 1
    hi = min(a + b - 1, 2 * ell - 1 - a - b)
    return [c for c in range(lo, hi + 1) if (c - (a + b - 1)) % 2 == 0]


# constructors ---------------------------------------------------------------


def from_blocks(blocks: Iterable[Tuple[int, int]], ell: int, p: int) -> EllComplex:
    """Direct sum of Jordan blocks (start, length) in the standard basis."""
    blocks = list(blocks)
    dims: Dict[int, int] = {}
    where = []
    for start, length in blocks:
        if not 1 <= length <= ell:
            raise ValueError("block length out of range")
        idx = []
        for k in range(length):
            d = start + k
            idx.append((d, dims.get(d, 0)))
            dims[d] = dims.get(d, 0) + 1
        where.append(idx)
    maps = {d: zeros(dims.get(d + 1, 0), n) for d, n in dims.items()}
    for idx in where:
        for (d, i), (_, j) in zip(idx, idx[1:]):
            maps[d][j, i] = 1
    return EllComplex(ell, p, dims, maps)


def jordan_block(length: int, ell: int, p: int, start: int = 0) -> EllComplex:
    return from_blocks([(start, length)], ell, p)


def random_invertible(n: int, p: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Random invertible matrix with its inverse."""
    while True:
        g = rng.integers(0, p, size=(n, n))
        red = row_reduce(np.hstack([g, identity(n)]), p)
        if red.pivots[:n] == list(range(n)) and red.rank >= n:
            return g % p, red.rref[:n, n:]


def conjugate(c: EllComplex, rng: np.random.Generator) -> EllComplex:
    """Same complex in a random graded basis."""
    gs = {d: random_invertible(n, c.p, rng) for d, n in c.dims.items()}
    maps = {}
    for d in c.degrees:
        if c.dim(d + 1):
            g1, _ = gs[d + 1]
            _, g0inv = gs[d]
            maps[d] = matmul(matmul(g1, c.D(d), c.p), g0inv, c.p)
    return EllComplex(c.ell, c.p, c.dims, maps)


def random_blocks(rng: np.random.Generator, ell: int, max_dim: int = 60, span: int = 8) -> List[Tuple[int, int]]:
    total = int(rng.integers(1, max_dim + 1))
    out = []
    used = 0
    while used < total:
        length = int(rng.integers(1, ell + 1))
        if used + length > total:
            length = total - used
        out.append((int(rng.integers(0, span)), length))
        used += length
    return out


def random_complex(rng: np.random.Generator, ell: int, p: Optional[int] = None, max_dim: int = 60) -> Tuple[EllComplex, List[Tuple[int, int]]]:
    blocks = random_blocks(rng, ell, max_dim)
    c = conjugate(from_blocks(blocks, ell, p or ell), rng)
    return c, blocks


__all__ = [
    "Block",
    "EllComplex",
    "CohomologyObject",
    "verify_nilpotency",
    "block_decompose",
    "cohomology",
    "block_representatives",
    "tensor",
    "quantum_dimension",
    "verlinde_fuse",
    "from_blocks",
    "jordan_block",
    "conjugate",
    "random_complex",
    "random_blocks",
    "random_invertible",
]
