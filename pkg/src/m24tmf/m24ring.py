"""H^*(M24; F_3) through its restrictions to two elementary abelian subgroups.

A class is a polynomial in the eight ring generators; two classes are equal when
their restrictions to ``AA = Z3A x Z3A`` and ``AB = Z3A x Z3B`` agree.  Both
restrictions land in F_3[Y, Z, y, z].  Per-degree bases are chosen greedily from
generator monomials so that their restriction vectors stay independent.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .fieldalg import (
    EchelonSpan,
    Exponents,
    GeneratorSpec,
    IntegrityError,
    SuperAlgebra,
    SuperElement,
    bockstein as _bockstein_op,
    elementary_abelian_rank2,
    solve,
    steenrod_cube,
    zeros,
)

GENERATORS = (
    GeneratorSpec("R", 3, True),
    GeneratorSpec("r", 4),
    GeneratorSpec("U", 10),
    GeneratorSpec("v", 11, True),
    GeneratorSpec("S", 11, True),
    GeneratorSpec("s", 12),
    GeneratorSpec("T", 15, True),
    GeneratorSpec("t", 16),
)
NAMES = tuple(g.name for g in GENERATORS)
SIGN_DEPENDENT = ("U", "v")
AUX_ONE = ("U", "v", "S", "s", "T", "t")

# restriction table; "~" marks entries multiplied by sigma
_RESTRICTIONS = {
    "R": ("0", "Z*z"),
    "r": ("0", "z^2"),
    "U": ("Y*Z*y^3*z - Y*Z*y*z^3", "~"),
    "v": ("0", "~Y*y*z^4 - Y*y^3*z^2 + Z*y^4*z - Z*y^2*z^3"),
    "S": ("Y*y*z^4 - Y*y^3*z^2 + Z*y^4*z - Z*y^2*z^3", "0"),
    "s": ("y^6 + y^4*z^2 + y^2*z^4 + z^6", "y^6 + y^4*z^2 + y^2*z^4"),
    "T": ("Y*y*z^6 - Y*y^3*z^4 + Z*y^6*z - Z*y^4*z^3", "0"),
    "t": ("y^6*z^2 + y^4*z^4 + y^2*z^6", "0"),
}

RELATIONS = (
    ("Ru = rU", "R*u - r*U"),
    ("TS = Tu", "T*S - T*u"),
    ("Tu = tU", "T*u - t*U"),
    ("tS = tu", "t*S - t*u"),
    ("u^2 = 0", "u*u"),
    ("R^2 = 0", "R*R"),
    ("T^2 = 0", "T*T"),
    ("U^2 = 0", "U*U"),
    ("rt = 0", "r*t"),
    ("rT = 0", "r*T"),
    ("uU = 0", "u*U"),
    ("tR = 0", "t*R"),
    ("RU = 0", "R*U"),
    ("RT = 0", "R*T"),
    ("UT = 0", "U*T"),
    ("rS = 0", "r*S"),
    ("uS = 0", "u*S"),
    ("RS = 0", "R*S"),
    ("US = 0", "U*S"),
    ("S^2 = 0", "S*S"),
)


# ---------------------------------------------------------------------------
# a tiny polynomial parser shared by both rings


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*^()]))")


def _tokenize(text: str) -> List[Tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text[pos:]!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    """expr := term (+|- term)*, term := factor (* factor)*, factor := atom [^ n]."""

    def __init__(self, text: str, lookup, scalar):
        self.toks = _tokenize(text)
        self.i = 0
        self.lookup = lookup
        self.scalar = scalar

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self):
        if not self.toks:
            raise ValueError("empty expression")
        val = self.expr()
        if self.i != len(self.toks):
            raise ValueError(f"unexpected token {self.peek()[1]!r}")
        return val

    def expr(self):
        neg = False
        if self.peek() == ("op", "-"):
            self.take()
            neg = True
        elif self.peek() == ("op", "+"):
            self.take()
        val = self.term()
        if neg:
            val = -val
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = _add(val, rhs) if op == "+" else _add(val, -rhs)
        return val

    def term(self):
        val = self.factor()
        while self.peek() == ("op", "*") or self.peek()[0] in ("name", "num") or self.peek() == ("op", "("):
            if self.peek() == ("op", "*"):
                self.take()
            rhs = self.factor()
            val = _mul(val, rhs)
        return val

    def factor(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, n = self.take()
            if kind != "num":
                raise ValueError("exponent must be a nonnegative integer")
            out = 1
            for _ in range(int(n)):
                out = _mul(out, base)
            return out
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return int(val)
        if kind == "name":
            return self.lookup(val)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return inner
        raise ValueError(f"unexpected token {val!r}")


def _mul(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return a * b
    if isinstance(a, int):
        return b.scale(a)
    if isinstance(b, int):
        return a.scale(b)
    return a * b


def _add(a, b):
    if isinstance(a, int) or isinstance(b, int):
        raise ValueError("bare integers may only appear as coefficients")
    return a + b


def parse_polynomial(algebra: SuperAlgebra, text: str) -> SuperElement:
    """Parse a homogeneous polynomial in the generators of ``algebra``."""

    def lookup(name):
        if name not in algebra.index:
            raise ValueError(f"unknown generator {name!r}")
        return algebra.gen(name)

    val = _Parser(text, lookup, None).parse()
    if isinstance(val, int):
        return algebra.one().scale(val)
    return val


# ---------------------------------------------------------------------------


@dataclass
class BasisSlice:
    degree: int
    monomials: List[Exponents]
    matrix: np.ndarray  # restriction coordinates, one column per monomial


class M24Ring:
    """The ring H^*(M24; F_3) for a fixed choice of the undetermined sign sigma."""

    p = 3

    def __init__(
        self,
        sigma: int = 1,
        cache_dir: Optional[str] = None,
        overrides: Optional[Dict[str, Tuple[str, str]]] = None,
    ):
        if sigma not in (1, -1):
            raise ValueError("sigma must be +1 or -1")
        self.sigma = sigma
        self.free = SuperAlgebra(GENERATORS, 3, "F3<R,r,U,v,S,s,T,t>")
        self.E = elementary_abelian_rank2(3)
        self.P_E = steenrod_cube(self.E)
        self.B_E = _bockstein_op(self.E)
        table = dict(_RESTRICTIONS)
        table.update(overrides or {})
        self.overridden = tuple(sorted(overrides or {}))
        self.gen_restrictions: Dict[str, Tuple[SuperElement, SuperElement]] = {}
        for g in GENERATORS:
            aa, ab = table[g.name]
            if ab == "~":
                ab = aa
                ab_sign = sigma
            elif ab.startswith("~"):
                ab = ab[1:]
                ab_sign = sigma
            else:
                ab_sign = 1
            ra = self._poly(aa, g.degree)
            rb = self._poly(ab, g.degree).scale(ab_sign)
            self.gen_restrictions[g.name] = (ra, rb)
        self._res_memo: Dict[Exponents, Tuple[SuperElement, SuperElement]] = {}
        self._slices: Dict[int, BasisSlice] = {}
        self._op_memo: Dict[Tuple[str, int], np.ndarray] = {}
        self.cache_dir = cache_dir if cache_dir is not None else os.environ.get("M24TMF_CACHE_DIR")

    def __repr__(self) -> str:
        return f"M24Ring(sigma={self.sigma:+d})"

    def _poly(self, text: str, degree: int) -> SuperElement:
        if text.strip() == "0":
            return self.E.zero(degree)
        out = parse_polynomial(self.E, text)
        if out.terms and out.degree != degree:
            raise ValueError(f"restriction {text!r} has the wrong degree")
        return out

    # restrictions --------------------------------------------------------
    def restrict_monomial(self, exps: Exponents) -> Tuple[SuperElement, SuperElement]:
        exps = tuple(exps)
        hit = self._res_memo.get(exps)
        if hit is not None:
            return hit
        if not any(exps):
            one = self.E.one()
            out = (one, one)
        else:
            last = max(i for i, e in enumerate(exps) if e)
            prev = list(exps)
            prev[last] -= 1
            a0, b0 = self.restrict_monomial(tuple(prev))
            ga, gb = self.gen_restrictions[NAMES[last]]
            out = (a0 * ga, b0 * gb)
        self._res_memo[exps] = out
        return out

    def restrict_element(self, x: SuperElement) -> Tuple[SuperElement, SuperElement]:
        aa = self.E.zero(x.degree)
        ab = self.E.zero(x.degree)
        for m, c in x.terms.items():
            ra, rb = self.restrict_monomial(m)
            aa = aa + ra.scale(c)
            ab = ab + rb.scale(c)
        return aa, ab

    def restriction_vector(self, aa: SuperElement, ab: SuperElement, degree: int) -> np.ndarray:
        n = len(self.E.monomial_basis(degree))
        va = aa.vector() if aa.terms else np.zeros(n, dtype=np.int64)
        vb = ab.vector() if ab.terms else np.zeros(n, dtype=np.int64)
        return np.concatenate([va, vb])

    # bases ----------------------------------------------------------------
    def _cache_path(self, degree: int) -> Optional[str]:
        if not self.cache_dir or self.overridden:
            return None
        return os.path.join(self.cache_dir, f"m24-basis-s{self.sigma:+d}-d{degree}.json")

    def basis_slice(self, degree: int) -> BasisSlice:
        if degree in self._slices:
            return self._slices[degree]
        path = self._cache_path(degree)
        if path and os.path.exists(path):
            with open(path) as fh:
                rec = json.load(fh)
            mons = [tuple(m) for m in rec["monomials"]]
            rows = 2 * len(self.E.monomial_basis(degree)) if degree >= 0 else 0
            mat = np.array(rec["restriction_matrix"], dtype=np.int64).reshape(rows, len(mons))
            sl = BasisSlice(degree, mons, mat)
        else:
            sl = self._build_slice(degree)
            if path:
                os.makedirs(self.cache_dir, exist_ok=True)
                with open(path, "w") as fh:
                    json.dump(
                        {
                            "degree": degree,
                            "sigma": self.sigma,
                            "monomials": [list(m) for m in sl.monomials],
                            "restriction_matrix": sl.matrix.reshape(-1).tolist(),
                        },
                        fh,
                    )
        self._slices[degree] = sl
        return sl

    def _build_slice(self, degree: int) -> BasisSlice:
        dim = 2 * len(self.E.monomial_basis(degree)) if degree >= 0 else 0
        span = EchelonSpan(dim, 3)
        chosen: List[Exponents] = []
        cols: List[np.ndarray] = []
        for m in self.free.monomial_basis(degree):
            vec = self.restriction_vector(*self.restrict_monomial(m), degree)
            if span.add(vec):
                chosen.append(m)
                cols.append(vec)
        mat = np.stack(cols, axis=1) if cols else zeros(dim, 0)
        return BasisSlice(degree, chosen, mat)

    def basis(self, degree: int) -> List["M24Class"]:
        return [self.monomial_class(m) for m in self.basis_slice(degree).monomials]

    def dim(self, degree: int) -> int:
        return len(self.basis_slice(degree).monomials)

    # classes --------------------------------------------------------------
    def gen(self, name: str) -> "M24Class":
        if name == "u":
            return self.gen("v") + self.gen("S")
        if name not in self.free.index:
            raise ValueError(f"unknown generator {name!r}")
        return M24Class(self, self.free.gen(name))

    def monomial_class(self, exps: Exponents) -> "M24Class":
        return M24Class(self, self.free.monomial(exps))

    def zero(self, degree: int) -> "M24Class":
        return M24Class(self, self.free.zero(degree))

    def one(self) -> "M24Class":
        return M24Class(self, self.free.one())

    def from_coordinates(self, coords, degree: int) -> "M24Class":
        sl = self.basis_slice(degree)
        terms = {m: int(c) for m, c in zip(sl.monomials, coords)}
        return M24Class(self, SuperElement(self.free, terms, degree))

    def parse(self, text: str) -> "M24Class":
        def lookup(name):
            return self.gen(name)

        val = _Parser(text, lookup, None).parse()
        if isinstance(val, int):
            return self.one().scale(val)
        return val

    def coordinates(self, x: "M24Class") -> np.ndarray:
        sl = self.basis_slice(x.degree)
        vec = self.restriction_vector(*x.restrictions, x.degree)
        sol = solve(sl.matrix, vec, 3)
        if sol is None:
            raise IntegrityError(f"class of degree {x.degree} is outside the span of the basis")
        return sol

    # operations -----------------------------------------------------------
    def _apply(self, op, x: "M24Class", shift: int) -> "M24Class":
        aa, ab = x.restrictions
        ta, tb = op(aa), op(ab)
        sl = self.basis_slice(x.degree + shift)
        vec = self.restriction_vector(ta, tb, x.degree + shift)
        sol = solve(sl.matrix, vec, 3)
        if sol is None:
            raise IntegrityError(f"{op.name} of a degree-{x.degree} class is not in the span of the basis")
        return self.from_coordinates(sol, x.degree + shift)

    def steenrod_P(self, x: "M24Class") -> "M24Class":
        return self._apply(self.P_E, x, 4)

    def bockstein(self, x: "M24Class") -> "M24Class":
        return self._apply(self.B_E, x, 1)

    def operator_matrix(self, which: str, degree: int) -> np.ndarray:
        """Matrix of ``P`` or ``B`` (Bockstein) from basis(degree) to basis(degree+shift)."""
        key = (which, degree)
        if key in self._op_memo:
            return self._op_memo[key]
        op, shift = {"P": (self.P_E, 4), "B": (self.B_E, 1)}[which]
        src = self.basis_slice(degree)
        tgt = self.basis_slice(degree + shift)
        cols = []
        for m in src.monomials:
            ra, rb = self.restrict_monomial(m)
            cols.append(self.restriction_vector(op(ra), op(rb), degree + shift))
        rhs = np.stack(cols, axis=1) if cols else zeros(tgt.matrix.shape[0], 0)
        sol = solve(tgt.matrix, rhs, 3) if cols else zeros(len(tgt.monomials), 0)
        if sol is None:
            raise IntegrityError(f"{which} out of degree {degree} leaves the span of the basis")
        self._op_memo[key] = sol
        return sol

    def multiplication_matrix(self, x: "M24Class", degree: int) -> np.ndarray:
        """Matrix of y -> x*y from basis(degree) to basis(degree + |x|)."""
        key = ("mul:" + str(sorted(x.expression.terms.items())), degree)
        if key in self._op_memo:
            return self._op_memo[key]
        src = self.basis(degree)
        tgt_deg = degree + x.degree
        n_tgt = self.dim(tgt_deg)
        mat = zeros(n_tgt, len(src))
        for j, b in enumerate(src):
            mat[:, j] = self.coordinates(x * b)
        self._op_memo[key] = mat
        return mat

    def aux_degree(self, exps: Exponents) -> int:
        return sum(e for e, n in zip(exps, NAMES) if n in AUX_ONE)

    def format_monomial(self, exps: Exponents) -> str:
        return self.free.format_monomial(exps)

    # relations ------------------------------------------------------------
    def verify_relations(self) -> "RelationReport":
        items = []
        for name, expr in RELATIONS:
            x = self.parse(expr)
            items.append((name, x.is_zero()))
        return RelationReport(self.sigma, items)


@dataclass
class RelationReport:
    sigma: int
    items: List[Tuple[str, bool]]

    @property
    def ok(self) -> bool:
        return all(h for _, h in self.items)

    @property
    def failures(self) -> List[str]:
        return [n for n, h in self.items if not h]

    def __str__(self) -> str:
        lines = [f"relations (sigma={self.sigma:+d}):"]
        lines += [f"  {'ok  ' if h else 'FAIL'} {n}" for n, h in self.items]
        return "\n".join(lines)


class M24Class:
    """Homogeneous class: a generator polynomial plus its cached restriction pair."""

    __slots__ = ("ring", "expression", "_res")

    def __init__(self, ring: M24Ring, expression: SuperElement):
        self.ring = ring
        self.expression = expression
        self._res = None

    @property
    def degree(self) -> int:
        return self.expression.degree

    @property
    def restrictions(self) -> Tuple[SuperElement, SuperElement]:
        if self._res is None:
            self._res = self.ring.restrict_element(self.expression)
        return self._res

    def is_zero(self) -> bool:
        aa, ab = self.restrictions
        return not aa.terms and not ab.terms

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, M24Class):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.restrictions == other.restrictions

    def __hash__(self) -> int:
        return hash((self.degree, self.restrictions))

    def __add__(self, other: "M24Class") -> "M24Class":
        if self.degree != other.degree and self.expression.terms and other.expression.terms:
            raise ValueError("inhomogeneous sum")
        if self.degree != other.degree:
            raise ValueError(f"inhomogeneous sum of degrees {self.degree} and {other.degree}")
        return M24Class(self.ring, self.expression + other.expression)

    def __neg__(self) -> "M24Class":
        return M24Class(self.ring, -self.expression)

    def __sub__(self, other: "M24Class") -> "M24Class":
        return self + (-other)

    def scale(self, k: int) -> "M24Class":
        return M24Class(self.ring, self.expression.scale(k))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return M24Class(self.ring, self.expression * other.expression)

    __rmul__ = scale

    def __pow__(self, n: int) -> "M24Class":
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def reduced(self) -> "M24Class":
        """Same class rewritten in the degree's basis monomials."""
        return self.ring.from_coordinates(self.ring.coordinates(self), self.degree)

    def __str__(self) -> str:
        return str(self.expression).replace("*", "")

    def __repr__(self) -> str:
        return f"M24Class({self}, deg {self.degree})"


# expected values; "~" stands for the sign sigma
STEENROD_TABLE = (
    ("R", "R*r"),
    ("r", "-r^2"),
    ("U", "0"),
    ("S", "T"),
    ("T", "0"),
    ("t", "0"),
    ("s", "s*r + t"),
    ("v", "v*r + ~R*s"),
    ("u", "u*r + T + ~R*s"),
)
BOCKSTEIN_TABLE = (("R", "r"), ("S", "0"), ("T", "t"), ("U", "u"), ("r", "0"), ("s", "0"), ("t", "0"))


def _signed(text: str, sigma: int) -> str:
    return text.replace("+ ~", "+ " if sigma == 1 else "- ")


def _expected(ring: M24Ring, text: str, degree: int) -> M24Class:
    text = _signed(text, ring.sigma)
    if text.strip() == "0":
        return ring.zero(degree)
    return ring.parse(text)


def check_operation_tables(ring: M24Ring) -> List[Tuple[str, bool]]:
    """Steenrod cube and Bockstein on generators against the expected table."""
    out = []
    for g, want in STEENROD_TABLE:
        x = ring.gen(g)
        label = f"P({g}) = {_signed(want, ring.sigma)}"
        try:
            ok = ring.steenrod_P(x) == _expected(ring, want, x.degree + 4)
        except IntegrityError:
            ok = False
        out.append((label, ok))
    for g, want in BOCKSTEIN_TABLE:
        x = ring.gen(g)
        try:
            ok = ring.bockstein(x) == _expected(ring, want, x.degree + 1)
        except IntegrityError:
            ok = False
        out.append((f"B({g}) = {want}", ok))
    return out


def check_naturality(ring: M24Ring, max_degree: int = 76) -> List[Tuple[str, bool]]:
    """restrict(P x) = P(restrict x) and likewise for the Bockstein, on every basis class."""
    bad_p = []
    bad_b = []
    for n in range(max_degree + 1):
        for b in ring.basis(n):
            aa, ab = b.restrictions
            try:
                ok = ring.steenrod_P(b).restrictions == (ring.P_E(aa), ring.P_E(ab))
            except IntegrityError:
                ok = False
            if not ok:
                bad_p.append(str(b))
            try:
                ok = ring.bockstein(b).restrictions == (ring.B_E(aa), ring.B_E(ab))
            except IntegrityError:
                ok = False
            if not ok:
                bad_b.append(str(b))
    return [
        (f"naturality of P up to degree {max_degree}", not bad_p),
        (f"naturality of B up to degree {max_degree}", not bad_b),
    ]


FAULTS = {
    # flips the sign of r on Z3A x Z3B; breaks Ru = rU
    "r-sign": {"r": ("0", "-z^2")},
    # gives r a nonzero restriction to Z3A x Z3A; breaks rt = 0 among others
    "r-aa": {"r": ("z^2", "z^2")},
}


def restrict(x: M24Class) -> Tuple[SuperElement, SuperElement]:
    return x.restrictions


def steenrod_P(x: M24Class) -> M24Class:
    return x.ring.steenrod_P(x)


def bockstein(x: M24Class) -> M24Class:
    return x.ring.bockstein(x)


def parse_element(text: str, ring: Optional[M24Ring] = None) -> M24Class:
    return (ring or M24Ring()).parse(text)


def verify_relations(sigma: int = 1) -> RelationReport:
    return M24Ring(sigma).verify_relations()


# named classes in the restriction ring F_3[Y, Z, y, z]
def named_restriction_classes(E: Optional[SuperAlgebra] = None) -> Dict[str, SuperElement]:
    E = E or elementary_abelian_rank2(3)
    Y, Z, y, z = (E.gen(n) for n in "YZyz")
    return {"w": y * Z - Y * z, "c": y ** 3 - y * z * z}


__all__ = [
    "GENERATORS",
    "RELATIONS",
    "M24Ring",
    "M24Class",
    "RelationReport",
    "BasisSlice",
    "restrict",
    "STEENROD_TABLE",
    "BOCKSTEIN_TABLE",
    "FAULTS",
    "check_operation_tables",
    "check_naturality",
    "steenrod_P",
    "bockstein",
    "parse_element",
    "parse_polynomial",
    "verify_relations",
    "named_restriction_classes",
]
