"""3-local coefficients of tmf with 2 inverted, as lookup tables.

Torsion is 72-periodic under Delta^3.  In each period there are nine classes
linked by nu-multiplication and by the Massey product <nu, nu, ->.  Nontorsion
classes are only named here; the twisted AHSS never needs their ring structure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Union

# symbol -> degree in the period 0 >= degree > -72; ASCII names, unicode for display
TORSION = {
    "1": 0,
    "nu": -3,
    "mu": -10,
    "nu*mu": -13,
    "mu^2": -20,
    "{nu*Delta}": -27,
    "mu^3": -30,
    "{nu*Delta}*mu": -37,
    "mu^4": -40,
}
TORSION_ORDER = tuple(TORSION)
PRETTY = {
    "1": "1",
    "nu": "ν",
    "mu": "μ",
    "nu*mu": "νμ",
    "mu^2": "μ²",
    "{nu*Delta}": "{νΔ}",
    "mu^3": "μ³",
    "{nu*Delta}*mu": "{νΔ}μ",
    "mu^4": "μ⁴",
}
DELTA3_DEGREE = -72

_NU = {"1": "nu", "mu": "nu*mu", "{nu*Delta}": "mu^3", "{nu*Delta}*mu": "mu^4"}
_MASSEY = {"nu": "mu", "nu*mu": "mu^2", "mu^2": "{nu*Delta}", "mu^3": "{nu*Delta}*mu", "mu^4": None}

NONTORSION = {"c4": -8, "c6": -12, "{3Delta}": -24, "{3Delta^2}": -48, "Delta^3": -72}


class Undefined:
    """Marker for a Massey product that does not exist (nu*x != 0)."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "UNDEFINED"

    def __bool__(self) -> bool:
        return False


UNDEFINED = Undefined()


@dataclass(frozen=True, order=True)
class TmfTorsionClass:
    symbol: str
    delta3_power: int = 0

    def __post_init__(self):
        if self.symbol not in TORSION:
            raise ValueError(f"unknown torsion symbol {self.symbol!r}")

    @property
    def degree(self) -> int:
        return TORSION[self.symbol] + DELTA3_DEGREE * self.delta3_power

    @property
    def additive_order(self) -> int:
        # Delta^{3k} * 1 is the only nontorsion entry in the table
        return 0 if self.symbol == "1" else 3

    def pretty(self) -> str:
        base = PRETTY[self.symbol]
        if self.delta3_power == 0:
            return base
        d = "Δ³" if self.delta3_power == 1 else f"Δ^{3 * self.delta3_power}"
        return d if base == "1" else f"{base}{d}"

    def __str__(self) -> str:
        if self.delta3_power == 0:
            return self.symbol
        d = "Delta^3" if self.delta3_power == 1 else f"Delta^{3 * self.delta3_power}"
        return d if self.symbol == "1" else f"{self.symbol}*{d}"


@dataclass(frozen=True)
class NontorsionSymbol:
    name: str

    @property
    def degree(self) -> int:
        return NONTORSION[self.name]


def torsion_at(degree: int) -> List[TmfTorsionClass]:
    """Classes of the table in the given degree (the unit counts as a class)."""
    if degree > 0:
        return []
    k, rem = divmod(-degree, 72)
    return [TmfTorsionClass(s, k) for s, d in TORSION.items() if -d == rem]


def nu_mult(x: TmfTorsionClass) -> Optional[TmfTorsionClass]:
    """nu * x, or None for zero."""
    tgt = _NU.get(x.symbol)
    return TmfTorsionClass(tgt, x.delta3_power) if tgt else None


def massey_nu_nu(x: TmfTorsionClass) -> Union[TmfTorsionClass, None, Undefined]:
    """<nu, nu, x>: UNDEFINED when nu*x != 0, None when the product is zero."""
    if x.symbol in _NU:
        return UNDEFINED
    tgt = _MASSEY[x.symbol]
    return TmfTorsionClass(tgt, x.delta3_power) if tgt else None


def delta_integrality(m: int, k: int) -> bool:
    """m * Delta^k lifts to tmf (with 2 inverted) exactly when 3 | m*k."""
    return (m * k) % 3 == 0


def torsion_table() -> List[Dict]:
    rows = []
    for s in TORSION_ORDER:
        x = TmfTorsionClass(s)
        nu = nu_mult(x)
        ms = massey_nu_nu(x)
        rows.append(
            {
                "symbol": s,
                "degree": x.degree,
                "nu": str(nu) if nu else "0",
                "massey_nu_nu": "undefined" if ms is UNDEFINED else (str(ms) if ms else "0"),
            }
        )
    return rows


def table_json() -> str:
    return json.dumps({"period": 72, "torsion": torsion_table(), "nontorsion": NONTORSION}, indent=2)


def table_markdown() -> str:
    lines = ["| class | degree | ν · x | ⟨ν,ν,x⟩ |", "|---|---:|---|---|"]
    for row in torsion_table():
        def pp(v):
            return PRETTY.get(v, v)

        lines.append(f"| {pp(row['symbol'])} | {row['degree']} | {pp(row['nu'])} | {pp(row['massey_nu_nu'])} |")
    lines.append("")
    lines.append("Nontorsion: " + ", ".join(f"{k} ({v})" for k, v in NONTORSION.items()))
    lines.append("Everything repeats under Δ³ (degree -72).")
    return "\n".join(lines)


__all__ = [
    "TORSION",
    "TORSION_ORDER",
    "NONTORSION",
    "UNDEFINED",
    "TmfTorsionClass",
    "NontorsionSymbol",
    "torsion_at",
    "nu_mult",
    "massey_nu_nu",
    "delta_integrality",
    "torsion_table",
    "table_json",
    "table_markdown",
]
