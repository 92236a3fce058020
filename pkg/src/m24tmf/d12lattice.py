"""Norm-1 vectors in twisted cosets of the D12+ lattice.

D12+ is the set of vectors in Z^12 or (Z + 1/2)^12 with even coordinate sum.
The Ramond coset D12+ + R (R = e_1) has odd sum instead.  For a torus vector g
we count lambda in D12+ + R + g with |lambda|^2 = 1 and split them by whether
lambda - g is integral (boson) or half-integral (fermion).

Coordinates are kept as integers scaled by 12 so thirds (3A) and quarters (4B)
stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

SCALE = 12
DIM = 12


def _frac_tuple(vals: Sequence) -> Tuple[Fraction, ...]:
    out = tuple(Fraction(v) for v in vals)
    if len(out) != DIM:
        raise ValueError(f"expected {DIM} coordinates")
    return out


@dataclass(frozen=True)
class TwistVector:
    name: str
    g: Tuple[Fraction, ...]
    cycle_structure: str

    @property
    def scaled(self) -> Tuple[int, ...]:
        out = []
        for x in self.g:
            y = x * SCALE
            if y.denominator != 1:
                raise ValueError(f"coordinate {x} is not a multiple of 1/{SCALE}")
            out.append(int(y))
        return tuple(out)

    def translate(self, t: Sequence) -> "TwistVector":
        t = _frac_tuple(t)
        if not in_d12_plus(t):
            raise ValueError("translation vector is not in D12+")
        return TwistVector(self.name, tuple(a + b for a, b in zip(self.g, t)), self.cycle_structure)


_H, _T, _Q = Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)
TWISTS: Dict[str, TwistVector] = {
    "1": TwistVector("1", _frac_tuple([0] * 12), "1^24"),
    "2A": TwistVector("2A", _frac_tuple([_H] * 4 + [0] * 8), "1^8 2^8"),
    "3A": TwistVector("3A", _frac_tuple([_T] * 6 + [0] * 6), "1^6 3^6"),
    "4B": TwistVector("4B", _frac_tuple([_H] * 3 + [_Q] * 4 + [0] * 5), "1^4 2^2 4^4"),
}
R_VECTOR = _frac_tuple([1] + [0] * 11)


@dataclass(frozen=True)
class LatticeVector:
    scaled: Tuple[int, ...]  # 12 * coordinates

    @property
    def coords(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(x, SCALE) for x in self.scaled)

    @property
    def norm(self) -> Fraction:
        return Fraction(sum(x * x for x in self.scaled), SCALE * SCALE)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def _kind(v: Sequence[Fraction]) -> Optional[str]:
    if all(x.denominator == 1 for x in v):
        return "integral"
    if all((2 * x).denominator == 1 and x.denominator == 2 for x in v):
        return "half"
    return None


def in_d12_plus(v: Sequence, odd: bool = False) -> bool:
    """Membership in D12+ (or its R-coset when ``odd``)."""
    v = _frac_tuple(v)
    if _kind(v) is None:
        return False
    s = sum(v)
    if s.denominator != 1:
        return False
    return int(s) % 2 == (1 if odd else 0)


def tr24(g: TwistVector) -> int:
    """Number of fixed points: the exponent of 1 in the cycle structure."""
    for part in g.cycle_structure.split():
        base, _, exp = part.partition("^")
        if base == "1":
            return int(exp or 1)
    return 0


def _enumerate(g_scaled: Sequence[int], target: int, offset: int) -> List[Tuple[int, ...]]:
    """Scaled lambda with lambda_i - g_i in Z + offset/12 and sum of squares = target."""
    bound = math.isqrt(target)
    options = []
    for gi in g_scaled:
        r = (gi + offset) % SCALE
        lo = -bound
        first = lo + ((r - lo) % SCALE)
        options.append(list(range(first, bound + 1, SCALE)))
    min_sq = [min(x * x for x in opts) if opts else None for opts in options]
    # suffix minima let us prune partial vectors early
    suffix = [0] * (DIM + 1)
    for i in range(DIM - 1, -1, -1):
        if min_sq[i] is None:
            return []
        suffix[i] = suffix[i + 1] + min_sq[i]
    out: List[Tuple[int, ...]] = []
    cur: List[int] = []

    def rec(i: int, left: int) -> None:
        if i == DIM:
            if left == 0:
                out.append(tuple(cur))
            return
        for x in options[i]:
            rest = left - x * x
            if rest < suffix[i + 1]:
                continue
            cur.append(x)
            rec(i + 1, rest)
            cur.pop()

    rec(0, target)
    return out


def coset_norm_vectors(g: TwistVector, norm_sq=1, parity: Optional[str] = None) -> List[LatticeVector]:
    """All lambda in D12+ + R + g with |lambda|^2 = norm_sq.

    ``parity`` restricts to lambda - g integral ("boson") or half-integral ("fermion").
    """
    norm_sq = Fraction(norm_sq)
    target = norm_sq * SCALE * SCALE
    if target.denominator != 1 or target < 0:
        return []
    gs = g.scaled
    out = []
    for kind, offset in (("boson", 0), ("fermion", SCALE // 2)):
        if parity and parity != kind:
            continue
        for lam in _enumerate(gs, int(target), offset):
            m_sum = Fraction(sum(a - b for a, b in zip(lam, gs)), SCALE)
            if m_sum.denominator == 1 and int(m_sum) % 2 == 1:
                out.append(LatticeVector(lam))
    return sorted(out, key=lambda v: v.scaled, reverse=True)


def ground_state_count(g: TwistVector) -> Tuple[int, int]:
    """(bosons, fermions) among norm-1 vectors of the twisted Ramond coset."""
    b = len(coset_norm_vectors(g, 1, "boson"))
    f = len(coset_norm_vectors(g, 1, "fermion"))
    return b, f


def random_translate(rng: np.random.Generator, half: Optional[bool] = None, spread: int = 2) -> Tuple[Fraction, ...]:
    """A random vector of D12+ (integral or glue type)."""
    if half is None:
        half = bool(rng.integers(0, 2))
    while True:
        ints = rng.integers(-spread, spread + 1, size=DIM)
        v = [Fraction(int(x)) + (_H if half else 0) for x in ints]
        if in_d12_plus(v):
            return tuple(v)


def lattice_table() -> List[Dict]:
    rows = []
    for name, g in TWISTS.items():
        b, f = ground_state_count(g)
        rows.append({"class": name, "tr24": tr24(g), "bosons": b, "fermions": f})
    return rows


__all__ = [
    "SCALE",
    "TwistVector",
    "LatticeVector",
    "TWISTS",
    "R_VECTOR",
    "in_d12_plus",
    "tr24",
    "coset_norm_vectors",
    "ground_state_count",
    "random_translate",
    "lattice_table",
]
