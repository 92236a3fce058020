"""Exact arithmetic over a prime field.

Two halves live here: dense linear algebra on ``numpy`` integer arrays reduced
mod p, and sparse graded-commutative superalgebras (polynomial rings whose odd
generators anticommute) together with the derivations acting on them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

Exponents = Tuple[int, ...]


class IntegrityError(RuntimeError):
    """An exact identity that must hold (nilpotency, injectivity, ...) failed."""


# ---------------------------------------------------------------------------
# prime field + dense matrices


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int = 3

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __call__(self, x: int) -> int:
        return x % self.p

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(x, self.p - 2, self.p)

    def sym(self, x: int) -> int:
        """Representative in (-p/2, p/2], handy for printing signs."""
        x %= self.p
        return x - self.p if x > self.p // 2 else x


F3 = PrimeField(3)


def as_fp(m, p: int) -> np.ndarray:
    return np.asarray(m, dtype=np.int64) % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] == 0 or b.shape[0] == 0:
        return zeros(a.shape[0], b.shape[1])
    return (a @ b) % p


@dataclass
class RowReduction:
    """Reduced row-echelon data of a matrix over F_p."""

    rank: int
    rref: np.ndarray
    pivots: List[int]
    kernel: np.ndarray  # columns span the null space
    image: np.ndarray  # pivot columns of the original matrix

    @property
    def nullity(self) -> int:
        return self.kernel.shape[1]


def rref(m: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Gauss-Jordan elimination, first nonzero entry in each column as pivot."""
    a = as_fp(m, p).copy()
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def row_reduce(m: np.ndarray, p: int = 3) -> RowReduction:
    m = as_fp(m, p)
    if m.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = m.shape
    red, pivots = rref(m, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    kernel = zeros(cols, len(free))
    for j, fc in enumerate(free):
        kernel[fc, j] = 1
        for i, pc in enumerate(pivots):
            kernel[pc, j] = (-red[i, fc]) % p
    image = m[:, pivots] if pivots else zeros(rows, 0)
    return RowReduction(len(pivots), red, pivots, kernel, image)


def rank(m: np.ndarray, p: int = 3) -> int:
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def kernel(m: np.ndarray, p: int = 3) -> np.ndarray:
    return row_reduce(m, p).kernel


def solve(a: np.ndarray, b: np.ndarray, p: int = 3) -> Optional[np.ndarray]:
    """Some x with a @ x = b (b a vector or matrix), or None if inconsistent."""
    a = as_fp(a, p)
    b = as_fp(b, p)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    rows, cols = a.shape
    if cols == 0:
        return (zeros(0, b.shape[1]) if not vec else zeros(0, 1)[:, 0]) if not b.any() else None
    red, pivots = rref(np.hstack([a, b]), p)
    if pivots and pivots[-1] >= cols:
        return None
    x = zeros(cols, b.shape[1])
    for i, pc in enumerate(pivots):
        x[pc] = red[i, cols:]
    return x[:, 0] if vec else x


def complement_columns(sub: np.ndarray, vectors: np.ndarray, p: int = 3) -> List[int]:
    """Indices of columns of ``vectors`` that greedily extend a basis of span(sub)."""
    base = rank(sub, p) if sub.size else 0
    chosen: List[int] = []
    acc = sub if sub.size else zeros(vectors.shape[0], 0)
    for j in range(vectors.shape[1]):
        trial = np.hstack([acc, vectors[:, j : j + 1]])
        r = rank(trial, p)
        if r > base:
            acc, base = trial, r
            chosen.append(j)
    return chosen


class EchelonSpan:
    """Incrementally grown span of vectors kept in reduced echelon form."""

    def __init__(self, dim: int, p: int = 3):
        self.dim = dim
        self.p = p
        self.rows: List[np.ndarray] = []
        self.pivots: List[int] = []

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v) -> np.ndarray:
        w = as_fp(v, self.p).copy()
        for row, pc in zip(self.rows, self.pivots):
            c = w[pc]
            if c:
                w = (w - c * row) % self.p
        return w

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def add(self, v) -> bool:
        """Add v if it is independent; returns whether the span grew."""
        w = self.reduce(v)
        nz = np.nonzero(w)[0]
        if nz.size == 0:
            return False
        pc = int(nz[0])
        w = (w * pow(int(w[pc]), self.p - 2, self.p)) % self.p
        for i, row in enumerate(self.rows):
            c = row[pc]
            if c:
                self.rows[i] = (row - c * w) % self.p
        self.rows.append(w)
        self.pivots.append(pc)
        return True


# ---------------------------------------------------------------------------
# graded-commutative superalgebras


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    degree: int
    fermion: bool = False


class SuperAlgebra:
    """Free graded-commutative algebra on a fixed, ordered generator list.

    Fermionic generators anticommute with each other and square to zero; all
    other pairs commute. Monomials are exponent tuples in generator order.
    """

    def __init__(self, generators: Sequence[GeneratorSpec], p: int = 3, name: str = ""):
        self.generators = tuple(generators)
        self.p = p
        self.name = name or "F%d[%s]" % (p, ",".join(g.name for g in generators))
        self.index = {g.name: i for i, g in enumerate(self.generators)}
        self.degrees = tuple(g.degree for g in self.generators)
        self.odd = tuple(g.fermion for g in self.generators)
        self._basis_cache: Dict[int, List[Exponents]] = {}

    def __repr__(self) -> str:
        return f"SuperAlgebra({self.name})"

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def degree_of(self, exps: Exponents) -> int:
        return sum(e * d for e, d in zip(exps, self.degrees))

    def monomial_basis(self, degree: int) -> List[Exponents]:
        """All monomials of the given degree, descending lexicographic order."""
        if degree < 0:
            return []
        if degree not in self._basis_cache:
            out: List[Exponents] = []
            n = self.ngens

            def rec(i: int, left: int, acc: List[int]) -> None:
                if i == n:
                    if left == 0:
                        out.append(tuple(acc))
                    return
                d = self.degrees[i]
                top = 1 if self.odd[i] else (left // d if d else 0)
                for e in range(min(top, left // d if d else 0), -1, -1):
                    acc.append(e)
                    rec(i + 1, left - e * d, acc)
                    acc.pop()

            rec(0, degree, [])
            self._basis_cache[degree] = out
        return list(self._basis_cache[degree])

    def monomial_sign(self, a: Exponents, b: Exponents) -> int:
        """Sign of reordering (monomial a)(monomial b) into canonical order, or 0."""
        s = 0
        odd = self.odd
        for i in range(self.ngens):
            if odd[i] and a[i] and b[i]:
                return 0
        # b_j must pass every odd a_i with i > j
        for j in range(self.ngens):
            if not (odd[j] and b[j]):
                continue
            for i in range(j + 1, self.ngens):
                if odd[i] and a[i]:
                    s ^= 1
        return -1 if s else 1

    # element constructors
    def zero(self, degree: int) -> "SuperElement":
        return SuperElement(self, {}, degree)

    def one(self) -> "SuperElement":
        return SuperElement(self, {(0,) * self.ngens: 1}, 0)

    def gen(self, name: str) -> "SuperElement":
        i = self.index[name]
        e = [0] * self.ngens
        e[i] = 1
        return SuperElement(self, {tuple(e): 1}, self.degrees[i])

    def monomial(self, exps: Exponents, coeff: int = 1) -> "SuperElement":
        exps = tuple(exps)
        if any(o and e > 1 for o, e in zip(self.odd, exps)):
            return self.zero(self.degree_of(exps))
        return SuperElement(self, {exps: coeff}, self.degree_of(exps))

    def from_vector(self, vec: Iterable[int], degree: int) -> "SuperElement":
        basis = self.monomial_basis(degree)
        return SuperElement(self, {m: int(c) for m, c in zip(basis, vec)}, degree)

    def format_monomial(self, exps: Exponents) -> str:
        parts = []
        for g, e in zip(self.generators, exps):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"


class SuperElement:
    """Homogeneous element: exponent tuple -> nonzero residue mod p."""

    __slots__ = ("algebra", "terms", "degree")

    def __init__(self, algebra: SuperAlgebra, terms: Mapping[Exponents, int], degree: int):
        p = algebra.p
        clean = {}
        for m, c in terms.items():
            c %= p
            if c:
                if algebra.degree_of(m) != degree:
                    raise ValueError(f"term {m} is not of degree {degree}")
                clean[m] = c
        self.algebra = algebra
        self.terms = dict(sorted(clean.items(), reverse=True))
        self.degree = degree

    def __repr__(self) -> str:
        return f"<{self} in {self.algebra.name}, deg {self.degree}>"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        f = PrimeField(self.algebra.p)
        out = ""
        for m, c in self.terms.items():
            c = f.sym(c)
            mono = self.algebra.format_monomial(m)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = mono if mag == 1 else (f"{mag}" if mono == "1" else f"{mag}*{mono}")
            out += f" {sign} {body}"
        out = out.strip()
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, SuperElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms and (
            self.degree == other.degree or not self.terms
        )

    def __hash__(self) -> int:
        return hash((id(self.algebra), self.degree, tuple(self.terms.items())))

    def _check(self, other: "SuperElement") -> None:
        if other.algebra is not self.algebra:
            raise ValueError("elements belong to different algebras")

    def __add__(self, other: "SuperElement") -> "SuperElement":
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if other.degree != self.degree:
            raise ValueError("inhomogeneous sum")
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return SuperElement(self.algebra, t, self.degree)

    def __neg__(self) -> "SuperElement":
        return SuperElement(self.algebra, {m: -c for m, c in self.terms.items()}, self.degree)

    def __sub__(self, other: "SuperElement") -> "SuperElement":
        return self + (-other)

    def scale(self, k: int) -> "SuperElement":
        return SuperElement(self.algebra, {m: c * k for m, c in self.terms.items()}, self.degree)

    def __rmul__(self, k: int) -> "SuperElement":
        return self.scale(k)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return multiply(self, other)

    def __pow__(self, n: int) -> "SuperElement":
        out = self.algebra.one()
        for _ in range(n):
            out = out * self
        return out

    def vector(self) -> np.ndarray:
        basis = self.algebra.monomial_basis(self.degree)
        pos = {m: i for i, m in enumerate(basis)}
        v = np.zeros(len(basis), dtype=np.int64)
        for m, c in self.terms.items():
            v[pos[m]] = c
        return v


def multiply(a: SuperElement, b: SuperElement) -> SuperElement:
    """Graded-commutative product with Koszul signs."""
    a._check(b)
    alg = a.algebra
    out: Dict[Exponents, int] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            s = alg.monomial_sign(ma, mb)
            if s == 0:
                continue
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + s * ca * cb
    return SuperElement(alg, out, a.degree + b.degree)


@dataclass
class GradedOperator:
    """A derivation determined by its values on generators.

    ``rule='plain'``: op(ab) = op(a) b + a op(b).
    ``rule='koszul'``: op(ab) = op(a) b + (-1)^{|a|} a op(b).
    """

    algebra: SuperAlgebra
    shift: int
    images: Dict[str, SuperElement]
    rule: str = "plain"
    name: str = "op"
    _memo: Dict[Exponents, SuperElement] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.rule not in ("plain", "koszul"):
            raise ValueError(f"unknown sign rule {self.rule!r}")
        for g, img in self.images.items():
            if g not in self.algebra.index:
                raise ValueError(f"{g} is not a generator of {self.algebra.name}")
            want = self.algebra.degrees[self.algebra.index[g]] + self.shift
            if img.terms and img.degree != want:
                raise ValueError(f"image of {g} has degree {img.degree}, expected {want}")

    def on_monomial(self, exps: Exponents) -> SuperElement:
        if exps in self._memo:
            return self._memo[exps]
        alg = self.algebra
        deg = alg.degree_of(exps) + self.shift
        total = alg.zero(deg)
        for i, e in enumerate(exps):
            if e == 0:
                continue
            g = alg.generators[i].name
            if g not in self.images:
                raise KeyError(f"no image given for generator {g}")
            img = self.images[g]
            if not img.terms:
                continue
            left = tuple(exps[:i]) + (0,) * (alg.ngens - i)
            right = (0,) * i + (e - 1,) + tuple(exps[i + 1 :])
            sign = 1
            if self.rule == "koszul" and (self.shift * alg.degree_of(left)) % 2:
                sign = -1
            term = alg.monomial(left) * img * alg.monomial(right)
            total = total + term.scale(sign * e)
        self._memo[exps] = total
        return total

    def __call__(self, x: SuperElement) -> SuperElement:
        if x.algebra is not self.algebra:
            raise ValueError("operator applied to an element of another algebra")
        out = self.algebra.zero(x.degree + self.shift)
        for m, c in x.terms.items():
            out = out + self.on_monomial(m).scale(c)
        return out


def extend_operator(op: GradedOperator, x: SuperElement) -> SuperElement:
    return op(x)


def operator_matrix(op: GradedOperator, degree: int) -> np.ndarray:
    """Matrix of ``op`` on monomial bases; column j is the image of basis[j]."""
    alg = op.algebra
    src = alg.monomial_basis(degree)
    tgt = alg.monomial_basis(degree + op.shift)
    pos = {m: i for i, m in enumerate(tgt)}
    mat = zeros(len(tgt), len(src))
    for j, m in enumerate(src):
        for t, c in op.on_monomial(m).terms.items():
            mat[pos[t], j] = c
    return mat


def twisted_matrix(op: GradedOperator, x: SuperElement, coeff: int, degree: int) -> np.ndarray:
    """Matrix of y -> op(y) + coeff * x * y on the degree slice."""
    alg = op.algebra
    if x.degree != op.shift:
        raise ValueError("twisting class must have the operator's degree")
    mat = operator_matrix(op, degree)
    tgt = alg.monomial_basis(degree + op.shift)
    pos = {m: i for i, m in enumerate(tgt)}
    for j, m in enumerate(alg.monomial_basis(degree)):
        for t, c in (x * alg.monomial(m)).terms.items():
            mat[pos[t], j] = (mat[pos[t], j] + coeff * c) % alg.p
    return mat


# standard algebras ---------------------------------------------------------


def elementary_abelian_rank2(p: int = 3) -> SuperAlgebra:
    """H^*(Z_3 x Z_3; F_3) = F_3[Y, Z, y, z] with |Y| = |Z| = 1, |y| = |z| = 2."""
    return SuperAlgebra(
        [GeneratorSpec("Y", 1, True), GeneratorSpec("Z", 1, True), GeneratorSpec("y", 2), GeneratorSpec("z", 2)],
        p,
    )


def cyclic_group_ring(p: int = 3) -> SuperAlgebra:
    """H^*(Z_3; F_3) = F_3[A, a]."""
    return SuperAlgebra([GeneratorSpec("A", 1, True), GeneratorSpec("a", 2)], p)


def steenrod_cube(alg: SuperAlgebra) -> GradedOperator:
    """First Steenrod cube: kills degree-1 generators, cubes degree-2 ones."""
    images = {}
    for g in alg.generators:
        if g.degree == 1:
            images[g.name] = alg.zero(5)
        elif g.degree == 2:
            images[g.name] = alg.gen(g.name) ** 3
        else:
            raise ValueError("steenrod_cube only knows degree-1 and degree-2 generators")
    return GradedOperator(alg, 4, images, "plain", "P")


def bockstein(alg: SuperAlgebra) -> GradedOperator:
    """Mod-3 Bockstein on a tensor of cyclic-group rings: X -> x, x -> 0."""
    images = {}
    deg2 = [g for g in alg.generators if g.degree == 2]
    deg1 = [g for g in alg.generators if g.degree == 1]
    if len(deg1) != len(deg2):
        raise ValueError("bockstein expects paired degree-1/degree-2 generators")
    for lo, hi in zip(deg1, deg2):
        images[lo.name] = alg.gen(hi.name)
        images[hi.name] = alg.zero(3)
    return GradedOperator(alg, 1, images, "koszul", "Bockstein")


__all__ = [
    "IntegrityError",
    "PrimeField",
    "F3",
    "RowReduction",
    "row_reduce",
    "rank",
    "kernel",
    "solve",
    "rref",
    "matmul",
    "complement_columns",
    "EchelonSpan",
    "GeneratorSpec",
    "SuperAlgebra",
    "SuperElement",
    "multiply",
    "GradedOperator",
    "extend_operator",
    "operator_matrix",
    "twisted_matrix",
    "elementary_abelian_rank2",
    "cyclic_group_ring",
    "steenrod_cube",
    "bockstein",
]
